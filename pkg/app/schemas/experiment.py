from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.enums import (
    BooleanMeanRule,
    CorrelationMode,
    DeploymentKind,
    FadingKind,
    LaplaceKind,
    MetricKind,
    ShadowKind,
    SweepVariable,
)
from app.schemas.scenario import Scenario


class ThetaRange(BaseModel):
    """θ в дБ от start до stop включительно с шагом step."""

    model_config = ConfigDict(extra="forbid")

    start: float = -10.0
    stop: float = 20.0
    step: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def validate_bounds(self) -> "ThetaRange":
        if self.stop < self.start:
            raise ValueError("theta range stop must not be below start")
        return self

    def values(self) -> List[float]:
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + k * self.step, 10) for k in range(count)]


class SweepSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variable: SweepVariable = SweepVariable.NONE
    values: List[Union[float, List[float]]] = Field(default_factory=list)
    hold_density: bool = True

    @model_validator(mode="after")
    def validate_values(self) -> "SweepSpec":
        if self.variable == SweepVariable.NONE:
            if self.values:
                raise ValueError("sweep values given without a sweep variable")
            return self
        if not self.values:
            raise ValueError("sweep values must be a nonempty list")
        if self.variable == SweepVariable.LAMBDA_B_L:
            if any(not isinstance(v, list) or len(v) != 2 for v in self.values):
                raise ValueError("lambda_b_l sweep values must be [lambda_b, length] pairs")
            if any(v[0] < 0 or v[1] <= 0 for v in self.values):
                raise ValueError("lambda_b must be >= 0 and length > 0")
        else:
            if any(isinstance(v, list) for v in self.values):
                raise ValueError(f"{self.variable.value} sweep values must be numbers")
            if self.variable in (SweepVariable.DELTA, SweepVariable.LAMBDA_D) and any(v <= 0 for v in self.values):
                raise ValueError(f"{self.variable.value} sweep values must be positive")
            if self.variable == SweepVariable.KAPPA and any(v < 0 for v in self.values):
                raise ValueError("kappa sweep values must be non-negative")
        return self

    def points(self) -> List[Optional[Union[float, List[float]]]]:
        return list(self.values) if self.variable != SweepVariable.NONE else [None]


class ExperimentConfig(BaseModel):
    """One panel of an experiment: a scenario run in each mode over a sweep and an x-grid."""

    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1, max_length=100)
    scenario: Scenario
    metric: MetricKind = MetricKind.COVERAGE
    modes: List[CorrelationMode] = Field(
        default_factory=lambda: [CorrelationMode.CORRELATED, CorrelationMode.INDEPENDENT]
    )
    sweep: SweepSpec = Field(default_factory=SweepSpec)
    theta_db: Union[List[float], ThetaRange] = Field(default_factory=ThetaRange)
    s_grid: Optional[List[float]] = None
    laplace_kind: LaplaceKind = LaplaceKind.EMPIRICAL
    reps: int = Field(100_000, ge=1)
    delay_patterns: int = Field(10_000, ge=1)
    delay_theta_db: float = 0.0
    n_max: int = Field(100, ge=1)
    n_max_series: int = Field(40, ge=0)
    mean_rules: List[BooleanMeanRule] = Field(default_factory=list)
    quad_tol: float = Field(1e-6, gt=0)
    seed: Optional[int] = Field(None, ge=0)
    output: Optional[str] = None

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("experiment name must not be blank")
        return v.strip()

    @field_validator("theta_db")
    @classmethod
    def validate_theta(cls, v):
        values = v.values() if isinstance(v, ThetaRange) else v
        if not values:
            raise ValueError("theta grid must not be empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("theta grid must be strictly increasing")
        return v

    @field_validator("s_grid")
    @classmethod
    def validate_s_grid(cls, v):
        if v is not None and (not v or any(s < 0 for s in v)):
            raise ValueError("s_grid must be a nonempty list of non-negative numbers")
        return v

    @model_validator(mode="after")
    def validate_combination(self) -> "ExperimentConfig":
        if not self.modes:
            raise ValueError("at least one correlation mode is required")
        variable = self.sweep.variable
        shadow_kind = self.scenario.shadow.kind
        if variable == SweepVariable.DELTA and shadow_kind != ShadowKind.GRID:
            raise ValueError("a delta sweep needs grid shadowing")
        if variable == SweepVariable.LAMBDA_D and self.scenario.deployment.kind != DeploymentKind.MATERN:
            raise ValueError("a lambda_d sweep needs a matern deployment")
        if variable == SweepVariable.LAMBDA_B_L and shadow_kind != ShadowKind.BOOLEAN:
            raise ValueError("a lambda_b_l sweep needs boolean shadowing")
        if self.mean_rules and shadow_kind != ShadowKind.BOOLEAN:
            raise ValueError("mean_rules only apply to boolean shadowing")
        rician = self.scenario.link.fading == FadingKind.RICIAN or variable == SweepVariable.KAPPA
        if rician and self.metric != MetricKind.COVERAGE:
            raise ValueError(f"{self.metric.value} is defined for a Rayleigh serving link only")
        if rician and self.laplace_kind == LaplaceKind.ANALYTIC:
            raise ValueError("Rician coverage is estimated from interference samples, use laplace_kind=empirical")
        if self.laplace_kind == LaplaceKind.ANALYTIC and shadow_kind == ShadowKind.BOOLEAN:
            raise ValueError("boolean shadowing has no analytic transform, use laplace_kind=empirical")
        return self

    @property
    def thetas_db(self) -> List[float]:
        return self.theta_db.values() if isinstance(self.theta_db, ThetaRange) else list(self.theta_db)


class CompositeConfig(BaseModel):
    """Список конфигураций, выполняемых по порядку."""

    model_config = ConfigDict(extra="forbid")

    include: List[str] = Field(..., min_length=1)


class ResultRow(BaseModel):
    scenario: str
    mode: str
    sweep: str
    x: float
    estimate: float
    error: float
    reps: int
    seed: int
