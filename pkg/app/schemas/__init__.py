from .experiment import CompositeConfig, ExperimentConfig, ResultRow, SweepSpec, ThetaRange
from .scenario import (
    BooleanShadow,
    ClusterShadow,
    GridShadow,
    LinkModel,
    MaternDeployment,
    PPPDeployment,
    Scenario,
)
from .verification import PropertyResult, VerificationReport
