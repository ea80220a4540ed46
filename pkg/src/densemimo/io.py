"""Result tables (CSV/JSON) and the JSON schema for paths, matrices and SINR profiles.

Complex numbers are stored as ``[re, im]`` pairs. Floats are written with
``repr`` so that parsing and re-emitting a file reproduces it byte for byte.
"""
from __future__ import annotations

import csv
from dataclasses import asdict, fields
import io as _io
import json
from pathlib import Path

import numpy as np

from .channel_model import PathSet
from .experiment import GapPoint, RatePoint
from .lmmse_sic import SinrProfile

RATE_COLUMNS = tuple(f.name for f in fields(RatePoint))
GAP_COLUMNS = tuple(f.name for f in fields(GapPoint))
PATTERN_COLUMNS = ("phi", "magnitude")

SCHEMA_PATHSET = "densemimo/pathset/v1"
SCHEMA_MATRIX = "densemimo/matrix/v1"
SCHEMA_SINR = "densemimo/sinr/v1"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _rows(points):
    for p in points:
        yield asdict(p) if hasattr(p, "__dataclass_fields__") else dict(p)


def _columns_for(points, columns):
    if columns is not None:
        return tuple(columns)
    first = next(iter(points), None)
    if isinstance(first, GapPoint):
        return GAP_COLUMNS
    return RATE_COLUMNS


def render(points, fmt: str = "csv", columns=None) -> str:
    """Serialize result rows to text; ``columns`` defaults from the row type."""
    points = list(points)
    cols = _columns_for(points, columns)
    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in _rows(points):
            writer.writerow([_fmt(row[c]) for c in cols])
        return buf.getvalue()
    if fmt == "json":
        records = [{c: row[c] for c in cols} for row in _rows(points)]
        return json.dumps({"columns": list(cols), "rows": records}, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(points, fmt: str = "csv", path=None, columns=None) -> str:
    """Write rows to ``path`` (or return the text when ``path`` is None)."""
    text = render(points, fmt, columns)
    if path is not None:
        target = Path(path)
        try:
            target.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write results to {target}: {exc.strerror or exc}") from exc
    return text


def _coerce(cls, record: dict):
    out = {}
    for f in fields(cls):
        raw = record[f.name]
        kind = f.type if isinstance(f.type, str) else f.type.__name__
        if kind == "int":
            out[f.name] = int(raw)
        elif kind == "float":
            out[f.name] = float(raw)
        else:
            out[f.name] = str(raw)
    return cls(**out)


def parse(text: str, fmt: str = "csv", cls=RatePoint) -> list:
    """Inverse of :func:`render` for RatePoint or GapPoint tables."""
    if fmt == "csv":
        reader = csv.DictReader(_io.StringIO(text))
        return [_coerce(cls, rec) for rec in reader]
    if fmt == "json":
        return [_coerce(cls, rec) for rec in json.loads(text)["rows"]]
    raise ValueError(f"unknown format {fmt!r}")


def complex_to_json(z) -> list:
    arr = np.asarray(z, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def complex_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def pathset_to_json(paths: PathSet) -> dict:
    return {
        "schema": SCHEMA_PATHSET,
        "count": paths.count,
        "attenuation": complex_to_json(paths.attenuation),
        "omega_t": paths.omega_t.tolist(),
        "omega_r": paths.omega_r.tolist(),
    }


def pathset_from_json(doc: dict) -> PathSet:
    _expect(doc, SCHEMA_PATHSET)
    att = complex_from_json(doc["attenuation"]) if doc["attenuation"] else np.zeros(0, complex)
    paths = PathSet(att, doc["omega_t"], doc["omega_r"])
    if paths.count != doc.get("count", paths.count):
        raise ValueError("path count does not match the stored arrays")
    return paths


def matrix_to_json(mat) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {"schema": SCHEMA_MATRIX, "shape": list(mat.shape), "data": complex_to_json(mat)}


def matrix_from_json(doc: dict) -> np.ndarray:
    _expect(doc, SCHEMA_MATRIX)
    shape = tuple(doc["shape"])
    if 0 in shape:
        return np.zeros(shape, complex)
    mat = complex_from_json(doc["data"])
    if mat.shape != shape:
        raise ValueError(f"matrix data has shape {mat.shape}, header says {shape}")
    return mat


def sinr_to_json(profile: SinrProfile) -> dict:
    return {
        "schema": SCHEMA_SINR,
        "rho": profile.rho.tolist(),
        "snr_norm": profile.snr_norm,
        "dt": profile.dt,
    }


def sinr_from_json(doc: dict) -> SinrProfile:
    _expect(doc, SCHEMA_SINR)
    return SinrProfile(np.asarray(doc["rho"], dtype=float), float(doc["snr_norm"]), float(doc["dt"]))


def _expect(doc: dict, schema: str):
    if doc.get("schema") != schema:
        raise ValueError(f"expected schema {schema!r}, got {doc.get('schema')!r}")


def dump_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
