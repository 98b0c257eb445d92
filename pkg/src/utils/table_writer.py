"""Deterministic CSV, JSON and Markdown writers for numeric tables."""

import csv
import io
import json
from decimal import ROUND_HALF_EVEN, Context, Decimal
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from loguru import logger


class TableWriter:
    """Render rows of mixed text and reals with a fixed number of significant digits."""

    def __init__(self, digits: int = 6):
        """
        Initialize the writer.

        Args:
            digits: Significant digits kept for every real, rounded half-even
        """
        self.digits = digits
        self._context = Context(prec=digits, rounding=ROUND_HALF_EVEN)

    def round_real(self, value: float) -> Decimal:
        """Round a real to the configured significant digits."""
        return self._context.create_decimal(repr(float(value)))

    def cell(self, value: Any) -> str:
        """Text form of one cell; None renders as an empty string."""
        if value is None:
            return ""
        if isinstance(value, float):
            return format(self.round_real(value), "g")
        return str(value)

    def _plain(self, value: Any) -> Any:
        if isinstance(value, float):
            return float(self.round_real(value))
        if isinstance(value, dict):
            return {k: self._plain(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self._plain(v) for v in value]
        return value

    def to_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([self.cell(v) for v in row])
        return buffer.getvalue()

    def to_json(self, payload: Any) -> str:
        """JSON with reals as rounded numbers, keys in insertion order."""
        return json.dumps(self._plain(payload), indent=2, ensure_ascii=False) + "\n"

    def to_markdown(
        self, header: Sequence[str], rows: Iterable[Sequence[Any]], title: Optional[str] = None
    ) -> str:
        lines = []
        if title:
            lines.extend([f"### {title}", ""])
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join("---" for _ in header) + "|")
        for row in rows:
            lines.append("| " + " | ".join(self.cell(v) or "---" for v in row) + " |")
        return "\n".join(lines) + "\n"

    @staticmethod
    def save(content: str, output_path: Union[str, Path]) -> Path:
        """Write content as UTF-8, creating parent directories."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(content)
        logger.info(f"Table saved to {output_path}")
        return output_path
