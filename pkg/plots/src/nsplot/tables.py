"""Readers for the documented result formats, plus the slope fitter.

This package deliberately reimplements the reading and fitting against the
documented CSV schemas instead of importing the producer, so the slope shown
on a figure is an independent cross-check of the harness fitter.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = ["Table", "read_table", "read_vectors", "SlopeFit", "fit_medians"]


@dataclass(frozen=True)
class Table:
    path: str
    meta: dict
    header: list
    rows: list

    def column(self, name: str) -> int:
        if name not in self.header:
            raise InputError(f"{self.path} has no column {name!r} "
                             f"(columns: {', '.join(self.header)})")
        return self.header.index(name)


def read_table(path) -> Table:
    """Read a metadata + header + rows CSV."""
    if not os.path.exists(path):
        raise InputError(f"input file {path} does not exist")
    meta: dict = {}
    header = None
    rows = []
    with open(path, "r", newline="") as fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body and " " not in body.split("=", 1)[0]:
                    key, val = body.split("=", 1)
                    meta[key] = val
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append(line.split(","))
    if not meta:
        raise InputError(f"{path} carries no metadata lines; not a result file")
    if header is None:
        raise InputError(f"{path} has no header row")
    return Table(path=str(path), meta=meta, header=header, rows=rows)


def read_vectors(path, expect: str) -> tuple[dict, np.ndarray]:
    """Read a frame or dual file: one ``# <expect> ...`` line, then bare rows."""
    if not os.path.exists(path):
        raise InputError(f"input file {path} does not exist")
    meta: dict = {}
    rows = []
    with open(path, "r", newline="") as fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith(expect + " "):
                    for tok in body[len(expect):].split():
                        if "=" in tok:
                            key, val = tok.split("=", 1)
                            meta[key] = val
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise InputError(f"bad numeric row in {path}: {line!r}") from exc
    if not meta:
        raise InputError(f"{path} lacks the '# {expect} ...' metadata line")
    mat = np.asarray(rows, dtype=float)
    if "m" in meta and "k" in meta and mat.shape != (int(meta["m"]), int(meta["k"])):
        raise InputError(f"{path} claims {meta['m']}x{meta['k']} but holds {mat.shape}")
    return meta, mat


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    points: tuple
    log_x: bool


def fit_medians(table: Table, x_col: str, y_col: str, where: dict | None = None,
                log_x: bool = True) -> SlopeFit:
    """Line through per-grid-point medians, log10 y, log10 or linear x.

    Rows flagged overloaded and rows with empty cells are dropped; ``where``
    keeps rows whose named columns hold the given text.
    """
    xi, yi = table.column(x_col), table.column(y_col)
    oi = table.column("overloaded") if "overloaded" in table.header else None
    filters = [(table.column(col), str(val)) for col, val in (where or {}).items()]
    groups: dict[float, list[float]] = {}
    for row in table.rows:
        if oi is not None and row[oi] == "true":
            continue
        if any(row[ci] != want for ci, want in filters):
            continue
        if row[xi] == "" or row[yi] == "":
            continue
        groups.setdefault(float(row[xi]), []).append(float(row[yi]))
    if len(groups) < 2:
        raise InputError(
            f"{table.path}: need at least 2 grid points to plot a decay, got {len(groups)}"
        )
    pts = sorted((x, float(np.median(vals))) for x, vals in groups.items())
    xv = np.array([p[0] for p in pts])
    yv = np.array([p[1] for p in pts])
    if np.any(yv <= 0):
        raise InputError(f"{table.path}: column {y_col!r} has non-positive medians")
    if log_x:
        if np.any(xv <= 0):
            raise InputError(f"{table.path}: column {x_col!r} must be positive on a log axis")
        xt = np.log10(xv)
    else:
        xt = xv
    slope, intercept = np.polyfit(xt, np.log10(yv), 1)
    if not (math.isfinite(slope) and math.isfinite(intercept)):
        raise InputError(f"{table.path}: degenerate fit")
    return SlopeFit(slope=float(slope), intercept=float(intercept),
                    points=tuple((float(a), float(b)) for a, b in pts), log_x=log_x)
