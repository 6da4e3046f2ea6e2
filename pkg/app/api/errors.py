import logging

from fastapi import HTTPException, status

from app.exceptions import ConfigError, DivergenceError, UnsupportedError

logger = logging.getLogger(__name__)


def to_http_error(e: Exception) -> HTTPException:
    """Ошибки симулятора в HTTP-коды; всё непредвиденное логируется и отдаётся как 500."""
    if isinstance(e, ConfigError):
        return HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail={"message": str(e).splitlines()[0], "diagnostics": e.diagnostics},
        )
    if isinstance(e, DivergenceError):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    if isinstance(e, (ValueError, UnsupportedError)):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    logger.error(f"Unhandled error: {e!r}")
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail="Internal error")
