from typing import Optional

from fastapi import APIRouter, HTTPException, Query, status

from app.api.errors import to_http_error
from app.models.enums import VerifySuite
from app.schemas.verification import VerificationReport
from app.services.verification import run_suite

verify_router = APIRouter(prefix="/verify", tags=["verify"])


@verify_router.get("/{suite}", response_model=VerificationReport)
def verify(
    suite: str,
    seed: Optional[int] = Query(None, ge=0),
    reps: Optional[int] = Query(None, ge=1),
):
    """Прогнать набор свойств и вернуть отчёт (даже если свойства не выполнены)"""
    if suite not in [s.value for s in VerifySuite]:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"Unknown verify suite: {suite}")
    try:
        return run_suite(suite, reps=reps, seed=seed)
    except Exception as e:
        raise to_http_error(e)
