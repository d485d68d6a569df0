"""Delimited output with pinned, reproducible formatting.

All files use comma separators, ``\n`` newlines regardless of platform, and
floats at 17 significant digits so values round-trip exactly.  Metadata rides
in ``#``-prefixed lines above the data.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .frames import Frame
from .duals import DualFrame

__all__ = [
    "format_value",
    "write_table",
    "read_table",
    "write_frame_csv",
    "read_frame_csv",
    "write_dual_csv",
    "read_dual_csv",
]


def format_value(v) -> str:
    """Canonical cell text: 17 significant digits for floats, true/false, empty for None."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_table(path, metadata, header, rows) -> None:
    """Write metadata lines, one header row, then data rows.

    ``metadata`` is an ordered list of (key, value) pairs, each emitted as
    ``# key=value``; ``header`` may be None for headerless tables.
    """
    with open(path, "w", newline="\n") as fh:
        for key, val in metadata:
            fh.write(f"# {key}={format_value(val)}\n")
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def read_table(path, has_header: bool = True):
    """Inverse of ``write_table``: (metadata dict, header or None, rows of strings).

    Raw ``#`` lines that are not ``key=value`` pairs are collected under the
    ``_comments`` key.
    """
    meta: dict[str, str] = {}
    comments: list[str] = []
    header = None
    rows: list[list[str]] = []
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
                comments.append(body)
                continue
            if has_header and header is None:
                header = line.split(",")
                continue
            rows.append(line.split(","))
    if comments:
        meta["_comments"] = "\n".join(comments)
    return meta, header, rows


def _parse_tokens(line: str) -> dict[str, str]:
    out = {}
    for tok in line.split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            out[key] = val
    return out


def write_frame_csv(path, frame: Frame) -> None:
    """One metadata line ``# frame kind=.. m=.. k=.. seed=..`` then m rows of k reals."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# frame kind={frame.kind} m={frame.m} k={frame.k} seed={frame.seed}\n")
        for row in frame.matrix:
            fh.write(",".join(format_value(float(v)) for v in row) + "\n")


def read_frame_csv(path) -> Frame:
    """Read a frame written by ``write_frame_csv``."""
    meta, rows = _read_matrix_file(path, expect="frame")
    mat = np.asarray(rows)
    if mat.shape != (int(meta["m"]), int(meta["k"])):
        raise ConfigError(
            f"frame file {path} claims {meta['m']}x{meta['k']} but holds {mat.shape}"
        )
    return Frame(matrix=mat, kind=meta.get("kind", "custom"), seed=int(meta.get("seed", 0)))


def write_dual_csv(path, dual: DualFrame) -> None:
    """Mirror of the frame layout: row j is the j-th synthesis (dual) vector."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# dual kind={dual.kind} m={dual.m} k={dual.k}\n")
        for row in dual.matrix.T:
            fh.write(",".join(format_value(float(v)) for v in row) + "\n")


def read_dual_csv(path) -> DualFrame:
    """Read a dual written by ``write_dual_csv``."""
    meta, rows = _read_matrix_file(path, expect="dual")
    mat = np.asarray(rows)
    if mat.shape != (int(meta["m"]), int(meta["k"])):
        raise ConfigError(
            f"dual file {path} claims {meta['m']}x{meta['k']} but holds {mat.shape}"
        )
    return DualFrame(matrix=mat.T, kind=meta.get("kind", "custom"))


def _read_matrix_file(path, expect: str):
    meta: dict[str, str] = {}
    rows: list[list[float]] = []
    with open(path, "r", newline="") as fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith(expect + " "):
                    meta.update(_parse_tokens(body[len(expect):]))
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise ConfigError(f"bad numeric row in {path}: {line!r}") from exc
    if not meta:
        raise ConfigError(f"{path} lacks the '# {expect} ...' metadata line")
    if "m" not in meta or "k" not in meta:
        raise ConfigError(f"{path} metadata must carry m= and k=")
    return meta, rows
