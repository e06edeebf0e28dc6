"""Deterministic artifact writers (atomic, 12 significant digits)."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

SIG_DIGITS = 12


def round_sig(x: float) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def _clean(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _clean(obj.item())
    if hasattr(obj, "value"):  # enum
        return obj.value
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        v = round_sig(x)
        return "" if v is None else repr(v)
    return str(x)


def atomic_write_text(path: Path | str, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path: Path | str, payload: Any) -> Path:
    return atomic_write_text(path, json.dumps(_clean(payload), indent=2) + "\n")


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        w.writerow([_cell(x) for x in row])
    return atomic_write_text(path, buf.getvalue())


CURVE_HEADER = (
    "r_qunats",
    "s_r_analytic",
    "mi_analytic",
    "s_r_mc_mean",
    "s_r_mc_stderr",
    "mi_mc_mean",
    "mi_mc_stderr",
)
REPORT_HEADER = ("r", "lhs", "rhs", "margin", "contradiction", "assumptions")
DECAY_HEADER = ("d", "mutual_information_qunats")
