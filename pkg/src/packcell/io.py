"""File formats: packing JSON, point-set CSV, JSON reports and CSV tables.

Floats are written with ``repr``, the shortest string that parses back to the
same double, so every file round-trips exactly and reruns are byte-identical.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .geometry import ConvexPolygon, Window, window_from_json
from .packing import Packing, PackingError
from .pointset import EmpiricalPointSet, PointSetError


class InputError(ValueError):
    """Malformed input file or flag (exit code 2)."""


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _real(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{where}: field {key!r} must be a number")
    v = float(v)
    if not math.isfinite(v):
        raise InputError(f"{where}: field {key!r} must be finite")
    return v


def parse_packing(text: str) -> tuple[Packing, Window | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("discs"), list):
        raise InputError('packing file must be an object with a "discs" list')
    if not doc["discs"]:
        raise InputError("packing file has no discs")
    centers, radii = [], []
    for k, item in enumerate(doc["discs"]):
        if not isinstance(item, dict):
            raise InputError(f"discs[{k}]: expected an object")
        centers.append((_real(item, "x", f"discs[{k}]"), _real(item, "y", f"discs[{k}]")))
        radii.append(_real(item, "r", f"discs[{k}]"))
    window = None
    if "window" in doc:
        if not isinstance(doc["window"], dict):
            raise InputError("window: expected an object")
        try:
            window = window_from_json(doc["window"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"window: {exc}") from exc
    try:
        packing = Packing(np.array(centers), np.array(radii))
    except PackingError as exc:
        raise InputError(str(exc)) from exc
    return packing, window


def load_packing(path: str | Path) -> tuple[Packing, Window | None]:
    return parse_packing(_read_text(path))


def packing_document(p: Packing, window: Window | None = None) -> dict:
    doc: dict[str, Any] = {"discs": [{"x": float(x), "y": float(y), "r": float(r)}
                                     for (x, y), r in zip(p.centers, p.radii)]}
    if window is not None:
        doc["window"] = window.to_json()
    return doc


def dump_packing(p: Packing, window: Window | None = None) -> str:
    return dumps(packing_document(p, window))


def parse_pointset(text: str, domain: Window) -> EmpiricalPointSet:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
        raise InputError("point-set CSV must start with the header x,y")
    pts = []
    for line, r in enumerate(rows[1:], start=2):
        if len(r) != 2:
            raise InputError(f"line {line}: expected two columns")
        try:
            x, y = float(r[0]), float(r[1])
        except ValueError as exc:
            raise InputError(f"line {line}: {exc}") from exc
        pts.append((x, y))
    try:
        return EmpiricalPointSet(np.array(pts, dtype=float).reshape(-1, 2), domain)
    except PointSetError as exc:
        raise InputError(str(exc)) from exc


def load_pointset(path: str | Path, domain: Window) -> EmpiricalPointSet:
    return parse_pointset(_read_text(path), domain)


def dump_pointset(X: EmpiricalPointSet) -> str:
    return write_csv(["x", "y"], X.points.tolist())


# --- reports -------------------------------------------------------------------

def jsonable(obj: Any) -> Any:
    """Plain JSON values from dataclasses, numpy values, polygons and windows.

    Raises ValueError on NaN or infinity so no report carries a non-finite number.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise ValueError("non-finite number in report")
        return v
    if isinstance(obj, ConvexPolygon):
        return [[float(x), float(y)] for x, y in obj.vertices]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def make_report(command: str, argv: Sequence[str], seed: int, results: Any, summary: dict) -> dict:
    return {"command": {"name": command, "argv": list(argv)}, "seed": int(seed),
            "results": results, "summary": summary}


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if not math.isfinite(f):
            raise ValueError("non-finite number in table")
        return repr(f)
    return str(v)


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def emit(text: str, path: str | Path | None, stdout) -> None:
    if path is None or str(path) == "-":
        stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


__all__ = [
    "InputError", "parse_packing", "load_packing", "packing_document", "dump_packing",
    "parse_pointset", "load_pointset", "dump_pointset", "jsonable", "dumps", "make_report",
    "write_csv", "emit",
]
