import csv
import io
import json
from typing import Any, Iterable, Sequence

import numpy as np


def format_real(value: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return "%.17g" % float(value)


def list_to_str(obj, sep: str = " ") -> str:
    if isinstance(obj, str):
        return obj
    if isinstance(obj, (list, tuple)):
        return sep.join(list_to_str(item, sep) for item in obj)
    if isinstance(obj, float):
        return format_real(obj)
    return str(obj)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if hasattr(obj, "_asdict"):
        return {k: to_jsonable(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False) + "\n"


def csv_lines(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    """Header plus one line per row, reals at full precision, LF endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_real(value) for value in row])
    return buffer.getvalue()
