# qtradeoff/output.py
"""Stable CSV/JSON emission: 12 significant digits, LF line endings, manifest sidecars."""
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from . import config
from .schemas import RunManifest

logger = logging.getLogger(__name__)


def format_number(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return format(x, f".{config.SIGNIFICANT_DIGITS}g")


def to_jsonable(value: Any) -> Any:
    """Plain JSON types with floats cut to 12 significant digits; infinities become strings."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x) or math.isinf(x):
            return format_number(x)
        return float(format_number(x))
    return value


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) if not isinstance(v, str) else v for v in row])
    return buffer.getvalue()


def render_json(value: Any) -> str:
    return json.dumps(to_jsonable(value), indent=2, sort_keys=False) + "\n"


def manifest_path(out: Path) -> Path:
    return out.with_name(f"{out.stem}.manifest.json")


def emit(text: str, manifest: RunManifest, out: Optional[str] = None) -> None:
    """Write data to `out` (or stdout) and the manifest beside it (or to stderr)."""
    manifest_text = render_json(manifest)
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        sys.stderr.write(manifest_text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    with open(manifest_path(path), "w", encoding="utf-8", newline="\n") as f:
        f.write(manifest_text)
    logger.info(f"Wrote {path} and {manifest_path(path)}")
