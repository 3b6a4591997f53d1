"""sweep file formats and record formatting"""

import csv
import io
import json
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from ..config import get_settings
from ..exceptions import SweepFileError
from ..schemas import PeakRecord, PointRecord, SweepMetadata, SweepResult, SweepRow

CSV_COLUMNS = ("t", "gamma", "sx", "sy", "sz", "fidelity", "tangle")


class ResultFormatter:
    """formatter for sweep files and records"""

    @staticmethod
    def format_float(value: float, digits: Optional[int] = None) -> str:
        """fixed significant-digit float text"""
        digits = digits if digits is not None else get_settings().csv_significant_digits
        return format(value, f".{digits}g")

    @staticmethod
    def _metadata_value(value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return ResultFormatter.format_float(value)
        return str(value)

    @staticmethod
    def to_csv(result: SweepResult) -> str:
        """csv text: '# key=value' metadata lines, header, one line per row, '\\n' newlines"""
        lines = [
            f"# {key}={ResultFormatter._metadata_value(value)}"
            for key, value in result.metadata.model_dump().items()
        ]
        lines.append(",".join(CSV_COLUMNS))
        for row in result.rows:
            lines.append(
                ",".join(ResultFormatter.format_float(getattr(row, column)) for column in CSV_COLUMNS)
            )
        return "\n".join(lines) + "\n"

    @staticmethod
    def to_json(result: SweepResult) -> str:
        """json text: metadata object plus rows array"""
        return result.model_dump_json(indent=2) + "\n"

    @staticmethod
    def point_to_csv(record: PointRecord) -> str:
        """header and one line for a single point"""
        columns = list(PointRecord.model_fields)
        values = [
            ResultFormatter.format_float(v) if isinstance(v, float) else str(v)
            for v in record.model_dump().values()
        ]
        return ",".join(columns) + "\n" + ",".join(values) + "\n"

    @staticmethod
    def peaks_to_json(peaks: List[PeakRecord]) -> str:
        """json array of peak records"""
        return json.dumps([peak.model_dump() for peak in peaks], indent=2) + "\n"

    @staticmethod
    def parse_sweep_file(text: str) -> SweepResult:
        """parse csv or json sweep text back into a SweepResult

        raises:
            SweepFileError: malformed text
        """
        if text.lstrip().startswith("{"):
            try:
                return SweepResult.model_validate_json(text)
            except ValidationError as e:
                raise SweepFileError(f"malformed json sweep file: {e}") from e

        metadata: Dict[str, str] = {}
        body: List[str] = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition("=")
                if not sep:
                    raise SweepFileError(f"malformed metadata line: {line!r}")
                metadata[key.strip()] = value.strip()
            elif line.strip():
                body.append(line)

        if not body:
            raise SweepFileError("sweep file has no header")

        reader = csv.DictReader(io.StringIO("\n".join(body)))
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise SweepFileError(f"unexpected csv header {reader.fieldnames}, want {','.join(CSV_COLUMNS)}")

        try:
            rows = [SweepRow(**{key: float(value) for key, value in record.items()}) for record in reader]
            return SweepResult(metadata=SweepMetadata(**metadata), rows=rows)
        except (TypeError, ValueError) as e:
            raise SweepFileError(f"malformed csv sweep file: {e}") from e
