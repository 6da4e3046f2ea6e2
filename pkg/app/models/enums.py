import enum


class CorrelationMode(str, enum.Enum):
    CORRELATED = "correlated"    # одна тень на ячейку
    INDEPENDENT = "independent"  # i.i.d. тени с тем же маргинальным законом


class DeploymentKind(str, enum.Enum):
    PPP = "ppp"
    MATERN = "matern"


class ShadowKind(str, enum.Enum):
    GRID = "grid"
    CLUSTER = "cluster"
    BOOLEAN = "boolean"


class FadingKind(str, enum.Enum):
    RAYLEIGH = "rayleigh"
    RICIAN = "rician"


class MetricKind(str, enum.Enum):
    LAPLACE = "laplace"
    COVERAGE = "coverage"
    THROUGHPUT = "throughput"
    DELAY = "delay"


class LaplaceKind(str, enum.Enum):
    ANALYTIC = "analytic"
    EMPIRICAL = "empirical"


class BooleanMeanRule(str, enum.Enum):
    CORRECTED = "corrected"  # 2·λ_b·l·d/π
    LENGTH_FREE = "length_free"  # λ_b·d/(2π), без длины отрезка


class SweepVariable(str, enum.Enum):
    NONE = "none"
    DELTA = "delta"
    LAMBDA_D = "lambda_d"
    LAMBDA_B_L = "lambda_b_l"
    KAPPA = "kappa"


class VerifySuite(str, enum.Enum):
    ORDERING = "ordering"
    MOMENTS = "moments"
    CONVERGENCE = "convergence"
    CROSS_VALIDATION = "cross-validation"
    REPRODUCTION = "reproduction"  # сравнение с эталонными числами, не инвариант
