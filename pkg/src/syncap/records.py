"""Run records (JSON lines), the v1 sweep CSV, and key=value config files."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Sequence

__all__ = [
    "CSV_HEADER",
    "RunRecord",
    "append_record",
    "dumps",
    "format_csv",
    "read_config",
    "read_records",
]

CSV_HEADER = "# syncap-csv v1"
RECORDS_FILE = "runs.jsonl"


def _clean(value):
    """Make ``value`` JSON-safe: floats are kept, non-finite become strings."""
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item"):
        return _clean(value.item())
    return value


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True)


@dataclass
class RunRecord:
    command: str
    parameters: Dict
    seed: int
    version: str
    results: Dict
    meta: Dict = field(default_factory=dict)

    @classmethod
    def create(cls, command, parameters, seed, version, results) -> "RunRecord":
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(command, dict(parameters), int(seed), version, results, {"timestamp": stamp})

    def to_json(self) -> str:
        return dumps(asdict(self))

    def deterministic_json(self) -> str:
        """Serialisation without the timestamp metadata."""
        d = asdict(self)
        d.pop("meta")
        return dumps(d)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        return cls(**json.loads(line))


def append_record(directory: str, record: RunRecord) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, RECORDS_FILE)
    with open(path, "a") as fh:
        fh.write(record.to_json() + "\n")
    return path


def read_records(path: str) -> List[RunRecord]:
    if os.path.isdir(path):
        path = os.path.join(path, RECORDS_FILE)
    if not os.path.exists(path):
        return []
    with open(path) as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]


def format_csv(columns: Sequence[str], rows: Sequence[Dict]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k, "")) for k in columns})
    return buf.getvalue()


def _cell(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return value


def read_config(path: str) -> Dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out
