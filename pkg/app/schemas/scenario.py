from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.enums import BooleanMeanRule, CorrelationMode, DeploymentKind, FadingKind, ShadowKind
from app.models.geometry import Window
from app.services.geometry import DEFAULT_TRUNCATION_EPS, truncation_radius


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# ========== РАЗМЕЩЕНИЕ БАЗОВЫХ СТАНЦИЙ ==========

class PPPDeployment(StrictModel):
    kind: Literal["ppp"] = "ppp"
    intensity: float = Field(1.0, ge=0)

    @property
    def density(self) -> float:
        return self.intensity


class MaternDeployment(StrictModel):
    kind: Literal["matern"] = "matern"
    lambda_m: float = Field(..., ge=0)
    lambda_d: float = Field(..., ge=0)
    r_d: float = Field(1.0, gt=0)

    @property
    def density(self) -> float:
        """Плотность PCP: λ_m·λ_d."""
        return self.lambda_m * self.lambda_d


Deployment = Annotated[Union[PPPDeployment, MaternDeployment], Field(discriminator="kind")]


# ========== МОДЕЛИ ЗАТЕНЕНИЯ ==========

class _ShadowBase(StrictModel):
    lambda_b: float = Field(..., ge=0)
    K: float = Field(..., gt=0, le=1)


class GridShadow(_ShadowBase):
    kind: Literal["grid"] = "grid"
    delta: float = Field(..., gt=0)


class ClusterShadow(_ShadowBase):
    kind: Literal["cluster"] = "cluster"


class BooleanShadow(_ShadowBase):
    kind: Literal["boolean"] = "boolean"
    length: float = Field(..., gt=0)
    independent_mean: BooleanMeanRule = BooleanMeanRule.CORRECTED


ShadowModel = Annotated[Union[GridShadow, ClusterShadow, BooleanShadow], Field(discriminator="kind")]


class LinkModel(StrictModel):
    """Serving link; its shadow T_δ is always 1."""

    fading: FadingKind = FadingKind.RAYLEIGH
    kappa: float = Field(0.0, ge=0)
    d_link: float = Field(0.5, gt=0)


class Scenario(StrictModel):
    deployment: Deployment
    shadow: ShadowModel
    mode: CorrelationMode = CorrelationMode.CORRELATED
    alpha: float = Field(4.0, gt=2)
    link: LinkModel = Field(default_factory=LinkModel)
    noise: float = Field(0.0, ge=0)
    exclusion_radius: float = Field(0.25, ge=0)
    r_max: Optional[float] = Field(None, gt=0)
    eps_trunc: float = Field(DEFAULT_TRUNCATION_EPS, gt=0, lt=1)

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        if v <= 2:
            raise ValueError("path-loss exponent must exceed 2 for finite interference")
        return v

    @model_validator(mode="after")
    def validate_shadow_fits_deployment(self) -> "Scenario":
        if self.shadow.kind == ShadowKind.CLUSTER and self.deployment.kind != DeploymentKind.MATERN:
            raise ValueError("cluster shadowing needs a matern deployment (cells are the clusters)")
        return self

    @property
    def window(self) -> Window:
        if self.r_max is not None:
            return Window(self.r_max)
        inner = self.exclusion_radius if self.exclusion_radius > 0 else self.link.d_link
        return Window(truncation_radius(self.alpha, self.eps_trunc, inner))

    @property
    def density(self) -> float:
        return self.deployment.density

    def with_mode(self, mode: CorrelationMode) -> "Scenario":
        return self.model_copy(update={"mode": mode})
