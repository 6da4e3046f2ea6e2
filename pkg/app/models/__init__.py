from .enums import (
    BooleanMeanRule,
    CorrelationMode,
    DeploymentKind,
    FadingKind,
    LaplaceKind,
    MetricKind,
    ShadowKind,
    SweepVariable,
    VerifySuite,
)
from .geometry import PointPattern, SegmentSet, Window
from .results import (
    DelayTail,
    InterferenceSample,
    LaplaceCurve,
    MetricEstimate,
    MomentPair,
    OrderingReport,
    RicianCoverage,
)
from .shadowing import PoissonLogAttenuation, ShadowedPattern
