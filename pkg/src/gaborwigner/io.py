"""CSV storage for signals and fields with a JSON sidecar manifest.

``name.csv`` holds one row per sample: ``index,re,im`` for a Signal or
``i,k,re,im`` for a PhaseField, written with 17 significant digits so a
round trip is bit-exact.  ``name.json`` holds ``{"n", "dx", "kind"}``.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import GridMismatch, MalformedCsv
from .grid import Grid, PhaseField, Signal

SCHEMA = "v1"
_HEADERS = {"signal": ["index", "re", "im"], "phasefield": ["i", "k", "re", "im"]}


def manifest_path(path) -> Path:
    return Path(path).with_suffix(".json")


def _write(path, kind: str, grid: Grid, values: np.ndarray) -> None:
    path = Path(path)
    flat = values.ravel()
    idx = np.indices(values.shape).reshape(values.ndim, -1).T
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_HEADERS[kind])
        for ix, v in zip(idx, flat):
            w.writerow([*map(int, ix), f"{v.real:.17g}", f"{v.imag:.17g}"])
    manifest = {"schema": SCHEMA, "n": grid.n, "dx": grid.dx, "kind": kind}
    manifest_path(path).write_text(json.dumps(manifest, indent=2) + "\n")


def save_signal(s: Signal, path) -> None:
    _write(path, "signal", s.grid, s.values)


def save_field(F: PhaseField, path) -> None:
    _write(path, "phasefield", F.grid, F.values)


def _read_manifest(path) -> dict:
    mp = manifest_path(path)
    try:
        m = json.loads(mp.read_text())
        return {"n": int(m["n"]), "dx": float(m["dx"]), "kind": str(m["kind"])}
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedCsv(f"bad manifest {mp}: {exc}") from exc


def _read(path, kind: str):
    m = _read_manifest(path)
    if m["kind"] != kind:
        raise MalformedCsv(f"{path} holds a {m['kind']}, expected a {kind}")
    try:
        grid = Grid(m["n"], m["dx"])
    except ValueError as exc:
        raise MalformedCsv(f"bad manifest for {path}: {exc}") from exc
    ncol = len(_HEADERS[kind])
    nidx = ncol - 2
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != _HEADERS[kind]:
        raise MalformedCsv(f"{path}: expected header {','.join(_HEADERS[kind])}")
    body = rows[1:]
    shape = (grid.n,) * nidx
    size = grid.n ** nidx
    for r, row in enumerate(body, start=2):
        if len(row) != ncol:
            raise MalformedCsv(f"{path}:{r}: expected {ncol} columns, got {len(row)}")
    if len(body) != size:
        raise GridMismatch(f"{path}: {len(body)} rows but manifest says n={grid.n}")
    values = np.empty(size, dtype=complex)
    seen = np.zeros(size, dtype=bool)
    for r, row in enumerate(body, start=2):
        try:
            ix = tuple(int(c) for c in row[:nidx])
            v = complex(float(row[-2]), float(row[-1]))
        except ValueError as exc:
            raise MalformedCsv(f"{path}:{r}: {exc}") from exc
        if any(not 0 <= i < grid.n for i in ix):
            raise GridMismatch(f"{path}:{r}: index {ix} outside n={grid.n}")
        flat = int(np.ravel_multi_index(ix, shape))
        if seen[flat]:
            raise MalformedCsv(f"{path}:{r}: duplicate index {ix}")
        seen[flat] = True
        values[flat] = v
    return grid, values.reshape(shape)


def load_signal(path) -> Signal:
    return Signal(*_read(path, "signal"))


def load_field(path) -> PhaseField:
    return PhaseField(*_read(path, "phasefield"))


def load(path):
    """Load whichever kind the manifest declares."""
    kind = _read_manifest(path)["kind"]
    if kind == "signal":
        return load_signal(path)
    if kind == "phasefield":
        return load_field(path)
    raise MalformedCsv(f"unknown kind {kind!r}")
