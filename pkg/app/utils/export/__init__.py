from enum import Enum
from pathlib import Path
from typing import Dict, Optional

from .base import RESULT_COLUMNS, BaseExporter, summary_frame
from .csv_exporter import CSVExporter
from .xlsx_exporter import XLSXExporter


class ExportFormat(str, Enum):
    CSV = "csv"
    XLSX = "xlsx"


EXPORTERS: Dict[str, BaseExporter] = {
    ExportFormat.CSV.value: CSVExporter(),
    ExportFormat.XLSX.value: XLSXExporter(),
}


def get_exporter(format_value: str | ExportFormat) -> BaseExporter:
    key = format_value.value if isinstance(format_value, ExportFormat) else str(format_value).lower()
    if key not in EXPORTERS:
        raise ValueError(f"Unsupported format: {format_value}. Available: {sorted(EXPORTERS)}")
    return EXPORTERS[key]


def format_for_path(path: str | Path, default: Optional[str] = None) -> str:
    """Формат по расширению файла; неизвестное расширение даёт ``default`` (или CSV)."""
    suffix = Path(path).suffix.lstrip(".").lower()
    if suffix in EXPORTERS:
        return suffix
    return default or ExportFormat.CSV.value
