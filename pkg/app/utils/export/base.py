from abc import ABC, abstractmethod
from io import BytesIO
from pathlib import Path
from typing import Sequence

import pandas as pd
from fastapi.responses import StreamingResponse

from app.schemas.experiment import ResultRow

RESULT_COLUMNS = ["scenario", "mode", "sweep", "x", "estimate", "error", "reps", "seed"]
PANEL_COLUMNS = ["scenario", "mode", "sweep"]


def summary_frame(frame: pd.DataFrame) -> pd.DataFrame:
    """Число точек и диапазон оценок по панелям (scenario, mode, sweep)."""
    if frame.empty:
        return pd.DataFrame(columns=PANEL_COLUMNS + ["points", "min", "max"])
    return (
        frame.groupby(PANEL_COLUMNS, sort=False)["estimate"]
        .agg(points="count", min="min", max="max")
        .reset_index()
    )


class BaseExporter(ABC):
    """Базовый класс экспортёров строк результата: в файл для CLI или потоком для HTTP"""

    def frame(self, rows: Sequence[ResultRow]) -> pd.DataFrame:
        if not rows:
            raise ValueError("No data to export")
        return pd.DataFrame([row.model_dump() for row in rows], columns=RESULT_COLUMNS)

    def to_bytes(self, rows: Sequence[ResultRow]) -> bytes:
        stream = BytesIO()
        self._write_to_stream(self.frame(rows), stream)
        return stream.getvalue()

    def to_path(self, rows: Sequence[ResultRow], path: str | Path) -> Path:
        path = Path(path)
        if path.suffix != f".{self.extension}":
            path = path.with_suffix(f".{self.extension}")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_bytes(rows))
        return path

    def export(self, rows: Sequence[ResultRow], filename: str = "results") -> StreamingResponse:
        stream = BytesIO(self.to_bytes(rows))
        return StreamingResponse(
            stream,
            media_type=self.media_type,
            headers={"Content-Disposition": f"attachment; filename={filename}.{self.extension}"}
        )

    @property
    @abstractmethod
    def media_type(self) -> str:
        """MIME-тип ответа (например, 'text/csv')"""

    @property
    @abstractmethod
    def extension(self) -> str:
        """Расширение файла (например, 'csv')"""

    @abstractmethod
    def _write_to_stream(self, df: pd.DataFrame, stream: BytesIO) -> None:
        """Специфичная логика записи в поток"""
