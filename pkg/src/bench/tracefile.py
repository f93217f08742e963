"""
Trace files

csv:   line 1 is the JSON header, line 2 the column names, then one CSV row
       per record, scalars as shortest round-trip decimals.
json:  line 1 is the JSON header, then one JSON array per record in the
       same column order.

The header carries the schema version, the config echo, the run metadata,
the terminal status and a git-style hash of everything after line 1.
"""

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import jsonschema

from src.core.errors import ConfigError
from src.core.state import TRACE_COLUMNS, Trace
from src.utils.helpers import content_hash, format_scalar, parse_scalar
from src.utils.logger import get_logger

logger = get_logger(__name__)

TRACE_SCHEMA_VERSION = "mtm-trace/1"

TRACE_HEADER_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema_version", "config", "meta", "status", "columns", "content_hash", "format"],
    "properties": {
        "schema_version": {"const": TRACE_SCHEMA_VERSION},
        "config": {"type": "object"},
        "meta": {
            "type": "object",
            "required": ["solver", "problem", "L"],
            "properties": {
                "solver": {"type": "string"},
                "problem": {"type": "string"},
                "L": {"type": "number"},
                "f_star": {"type": "number"},
                "R2": {"type": "number"},
            },
        },
        "status": {"enum": ["PENDING", "RUNNING", "COMPLETED", "CONVERGED", "FAILED"]},
        "columns": {"type": "array", "items": {"type": "string"}, "minItems": len(TRACE_COLUMNS)},
        "content_hash": {"type": "string", "pattern": "^[0-9a-f]{40}$"},
        "format": {"enum": ["csv", "json"]},
    },
}

INTEGER_COLUMNS = {"k", "m_k", "calls_f", "calls_g", "retries"}


@dataclass
class TraceFile:
    header: dict[str, Any]
    records: list[dict[str, Optional[float]]]
    hash_ok: bool = True

    @property
    def meta(self) -> dict[str, Any]:
        return self.header["meta"]

    def column(self, name: str) -> list[Optional[float]]:
        return [r.get(name) for r in self.records]


def _cell(name: str, value: Any) -> Any:
    if value is not None and name in INTEGER_COLUMNS:
        return int(value)
    return value


def _render_body(trace: Trace, fmt: str) -> str:
    rows = [[_cell(n, v) for n, v in zip(TRACE_COLUMNS, r.row())] for r in trace.records]
    if fmt == "json":
        lines = [json.dumps(list(TRACE_COLUMNS))]
        lines += [json.dumps(row) for row in rows]
        return "\n".join(lines) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for row in rows:
        writer.writerow([format_scalar(v) for v in row])
    return buffer.getvalue()


def render_trace(trace: Trace, config: Optional[dict] = None, fmt: str = "csv") -> str:
    """Full file text; identical inputs give byte-identical output."""
    if fmt not in ("csv", "json"):
        raise ConfigError("CONFIG_INVALID", f"unknown trace format {fmt!r}")
    body = _render_body(trace, fmt)
    header = {
        "schema_version": TRACE_SCHEMA_VERSION,
        "format": fmt,
        "config": config or {},
        "meta": trace.meta,
        "status": trace.status.value,
        "columns": list(TRACE_COLUMNS),
        "content_hash": content_hash(body),
    }
    jsonschema.validate(header, TRACE_HEADER_SCHEMA)
    return json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n" + body


def write_trace(trace: Trace, path: Path, config: Optional[dict] = None, fmt: str = "csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_trace(trace, config, fmt), encoding="utf-8")
    logger.debug(f"wrote {len(trace)} records to {path}")
    return path


def read_trace(path: Path) -> TraceFile:
    """
    Parses and schema-checks a trace file. A content-hash mismatch is
    reported through `hash_ok`, not raised, so edited traces can still be
    verified.

    Raises:
        ConfigError: unreadable file or invalid header (code TRACE_INVALID)
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise ConfigError("TRACE_INVALID", f"cannot read {path}: {error}") from error
    first, _, body = text.partition("\n")
    try:
        header = json.loads(first)
        jsonschema.validate(header, TRACE_HEADER_SCHEMA)
    except (json.JSONDecodeError, jsonschema.ValidationError) as error:
        raise ConfigError("TRACE_INVALID", f"{path}: bad header: {error}") from error

    hash_ok = content_hash(body) == header["content_hash"]
    if not hash_ok:
        logger.warning(f"{path}: content hash mismatch, file was edited after writing")

    lines = body.splitlines()
    if header["format"] == "json":
        columns = json.loads(lines[0])
        rows = [json.loads(line) for line in lines[1:] if line.strip()]
    else:
        reader = csv.reader(lines)
        columns = next(reader)
        rows = [[parse_scalar(cell) for cell in row] for row in reader if row]
    records = [dict(zip(columns, row)) for row in rows]
    return TraceFile(header=header, records=records, hash_ok=hash_ok)
