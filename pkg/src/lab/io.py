# src/lab/io.py
"""
Serialisation helpers: JSON payload conversion and atomic file writes.
Reports must be byte-identical across runs, so keys are sorted and no
wall-clock data is ever added here.
"""
import csv
import io
import json
import os
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy / complex / enum values into JSON-friendly types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_float(value.real), _float(value.imag)]
    if isinstance(value, (float, np.floating)):
        return _float(value)
    return value


def _float(x) -> Any:
    x = float(x)
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_json(path: Path, payload: Any) -> None:
    atomic_write_text(path, dumps(payload))


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]], comment: Optional[str] = None) -> str:
    """Header row then data rows; an optional leading "# comment" line carries provenance."""
    buffer = io.StringIO()
    if comment:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _cell(v: Any) -> Any:
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], comment: Optional[str] = None) -> None:
    atomic_write_text(path, csv_text(header, rows, comment))


def read_csv(path: Path) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    return list(csv.DictReader(lines))


def complex_from_json(value: Any) -> complex:
    """Accept a number, an [re, im] pair or a {"re": .., "im": ..} mapping."""
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    raise ValueError(f"cannot read a complex number from {value!r}")
