from io import BytesIO

import pandas as pd

from .base import BaseExporter, summary_frame


class XLSXExporter(BaseExporter):
    """Лист ``results`` со строками результата и лист ``summary`` по панелям."""

    results_sheet = "results"
    summary_sheet = "summary"

    @property
    def media_type(self) -> str:
        return "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"

    @property
    def extension(self) -> str:
        return "xlsx"

    def _write_to_stream(self, df: pd.DataFrame, stream: BytesIO) -> None:
        with pd.ExcelWriter(stream, engine="openpyxl") as writer:
            df.to_excel(writer, index=False, sheet_name=self.results_sheet)
            summary_frame(df).to_excel(writer, index=False, sheet_name=self.summary_sheet)
            for sheet in writer.sheets.values():
                sheet.freeze_panes = "A2"
