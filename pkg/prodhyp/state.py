"""
Module that implements the state of a run: the ordered collection of output records
"""

import asyncio
import csv
import hashlib
import io
import json
from typing import Any, Literal


OutputFormat = Literal["csv", "json"]


def format_value(value: Any) -> str:
    """
    Formats one CSV cell, floats keep 17 significant digits
    """
    if isinstance(value, bool):
        return "true" if value else "false"

    if isinstance(value, float):
        return format(value, ".17g")

    return str(value)


class RunState():
    """
    Represents the output of a run
    ASYNC-SAFE
    THREAD-UNSAFE
    """
    def __init__(self, columns: list[str], out_format: OutputFormat = "csv"):
        """
        Run state constructor

        IN:
            columns - output columns, every record must provide them
            out_format - csv or json
        """
        self._lock = asyncio.Lock()
        self._columns = list(columns)
        self._format = out_format
        self._records: dict[int, dict[str, Any]] = {}

    def __repr__(self) -> str:
        return "<RunState({}, {} records)>".format(
            self._format,
            len(self._records)
        )

    @property
    def out_format(self) -> OutputFormat:
        return self._format

    def __len__(self) -> int:
        return len(self._records)

    async def add_record(self, index: int, record: dict[str, Any]):
        """
        Stores the record for the given grid index
        """
        missing = [c for c in self._columns if c not in record]
        if missing:
            raise KeyError(f"Record {index} lacks the columns {missing}")

        async with self._lock:
            self._records[index] = record

    def _ordered(self) -> list[dict[str, Any]]:
        return [self._records[i] for i in sorted(self._records)]

    def _generate_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self._columns)
        for record in self._ordered():
            writer.writerow([format_value(record[c]) for c in self._columns])
        return buffer.getvalue()

    def _generate_json(self) -> str:
        return json.dumps(self._ordered(), indent=2) + "\n"

    async def generate_output(self) -> str:
        """
        Renders every record in index order
        """
        async with self._lock:
            if self._format == "json":
                return self._generate_json()
            return self._generate_csv()

    async def get_digest(self) -> str:
        """
        Digest of the rendered output, equal for equal runs
        """
        output = await self.generate_output()
        return hashlib.sha256(output.encode("utf-8")).hexdigest()
