"""File formats: field files, vortex manifests, group data, CSV tables and JSON reports.

A field file is a pair ``name.json`` + ``name.bin``.  The binary holds little-endian
``complex128`` (or ``float64`` for real arrays) in row-major order ``[j, i]``, node
``(x0 + i h, y0 + j h)``; entries outside the active set are NaN.
"""
from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .fields import WeightedField
from .grid import Grid
from .hyperbolic import FuchsianGroup

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to ``None``."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")
    return path


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"cannot read {path}: {e}") from e


def write_csv(path, columns, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return path


def read_csv(path):
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]


# ---------------------------------------------------------------------------

def group_to_json(group: FuchsianGroup) -> dict:
    return group.to_json()


def grid_from_layout(layout: dict) -> Grid:
    try:
        g = Grid(float(layout["h"]), FuchsianGroup(tuple(layout["branch_signs"])), int(layout["margin"]))
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad grid layout: {e}") from e
    if g.n != layout.get("n", g.n) or abs(g.x0 - layout.get("x0", g.x0)) > 1e-12:
        raise FormatError("grid layout does not reproduce the stored node positions")
    return g


def _write_array(stem: Path, arr: np.ndarray, grid: Grid, header: dict) -> Path:
    stem = Path(stem)
    stem.parent.mkdir(parents=True, exist_ok=True)
    dtype = "<c16" if np.iscomplexobj(arr) else "<f8"
    data = np.where(grid.active, arr, np.nan).astype(dtype)
    data.tofile(stem.with_suffix(".bin"))
    head = {"format_version": FORMAT_VERSION, "grid": grid.layout(), "dtype": dtype,
            "shape": list(data.shape), "order": "row-major [j, i]", "data": stem.with_suffix(".bin").name}
    head.update(header)
    return write_json(stem.with_suffix(".json"), head)


def _read_array(path, grid: Grid | None = None):
    path = Path(path).with_suffix(".json")
    head = read_json(path)
    if head.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version")
    g = grid if grid is not None else grid_from_layout(head["grid"])
    if grid is not None and (g.h != head["grid"]["h"] or g.n != head["grid"]["n"]):
        raise FormatError(f"{path}: field grid differs from the supplied grid")
    data = np.fromfile(path.with_name(head["data"]), dtype=head["dtype"])
    if data.size != g.n * g.n:
        raise FormatError(f"{path}: binary size does not match the grid")
    return head, g, data.reshape(g.n, g.n).astype(complex if head["dtype"] == "<c16" else float)


def write_field(stem, f: WeightedField, **extra) -> Path:
    w = Fraction(f.weight)
    header = {"kind": "field", "weight": str(w), "metric_tag": f.metric_tag,
              "branch_signs": list(f.grid.group.branch_signs)}
    header.update(extra)
    return _write_array(stem, f.values, f.grid, header)


def read_field(path, grid: Grid | None = None) -> WeightedField:
    head, g, data = _read_array(path, grid)
    if head.get("kind") != "field":
        raise FormatError(f"{path}: not a field file")
    data = np.where(g.active, data, 0.0)
    return WeightedField(g, Fraction(head["weight"]), data, head["metric_tag"])


def write_real(stem, arr: np.ndarray, grid: Grid, name: str) -> Path:
    return _write_array(stem, np.asarray(arr, dtype=float), grid, {"kind": "real", "name": name})


def read_real(path, grid: Grid | None = None) -> np.ndarray:
    head, g, data = _read_array(path, grid)
    if head.get("kind") != "real":
        raise FormatError(f"{path}: not a real array file")
    return np.where(g.active, data, 0.0)


# ---------------------------------------------------------------------------

def write_manifest(directory, datum, extra: dict | None = None) -> Path:
    """Write ``manifest.json`` with ``A``, ``theta``, ``u`` (and ``f``) as field files."""
    from .vortex import VortexData

    if not isinstance(datum, VortexData):
        raise TypeError("expected VortexData")
    d = Path(directory)
    files = {"A": write_field(d / "A", datum.A), "theta": write_field(d / "theta", datum.theta),
             "u": write_real(d / "u", datum.u, datum.grid, "u")}
    if datum.f is not None:
        files["f"] = write_real(d / "f", datum.f, datum.grid, "f")
    man = {"format_version": FORMAT_VERSION, "kind": "vortex", "ell": datum.ell, "k": datum.k,
           "grid": datum.grid.layout(), "group": group_to_json(datum.grid.group),
           "files": {k: p.name for k, p in files.items()}}
    man.update(extra or {})
    return write_json(d / "manifest.json", man)


def read_manifest(path):
    """Load a ``VortexData`` from a manifest file (or its directory)."""
    from .vortex import VortexData

    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    man = read_json(path)
    if man.get("kind") != "vortex" or man.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"{path}: not a vortex manifest")
    g = grid_from_layout(man["grid"])
    files = man["files"]
    A = read_field(path.with_name(files["A"]), g)
    theta = read_field(path.with_name(files["theta"]), g)
    u = read_real(path.with_name(files["u"]), g)
    f = read_real(path.with_name(files["f"]), g) if "f" in files else None
    return VortexData(Fraction(man["ell"]), A, theta, u, f, Fraction(man["k"]))


def write_convergence_log(path, log) -> Path:
    return write_csv(path, ("iteration", "residual_sup", "step_norm"), log)


def write_orbit_csv(path, trace) -> Path:
    from .dynamics import CSV_COLUMNS

    return write_csv(path, CSV_COLUMNS, trace.to_rows())
