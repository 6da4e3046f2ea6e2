from typing import List, Optional

from pydantic import BaseModel, Field

from app.models.enums import VerifySuite


class PropertyResult(BaseModel):
    """Результат одной проверки; margin > 0 означает запас, margin < 0 величину нарушения."""

    name: str
    passed: bool
    margin: float
    detail: Optional[str] = None


class VerificationReport(BaseModel):
    suite: VerifySuite
    passed: bool
    seed: int
    reps: int
    properties: List[PropertyResult] = Field(default_factory=list)

    @property
    def failures(self) -> List[PropertyResult]:
        return [prop for prop in self.properties if not prop.passed]
