"""Figure builders and file-writing entry points.

Every builder returns a plain ``Figure`` so tests can inspect artists without
touching the filesystem.  The ``plot_*`` wrappers read and validate their
inputs before the output file is opened, so a bad input never leaves a
truncated image behind.  SVG output carries no timestamps and uses a fixed
hash salt, so rerunning a command reproduces the file byte for byte, and text
is written as real ``<text>`` elements so annotations stay searchable.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure
from matplotlib.lines import Line2D
from matplotlib.patches import FancyArrow

from .errors import InputError
from .tables import SlopeFit, Table, fit_medians, read_table, read_vectors

__all__ = [
    "build_decay_figure",
    "build_spectrum_figure",
    "build_duals_figure",
    "plot_decay",
    "plot_spectrum",
    "plot_duals",
]

_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "nsplot",
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 100,
}

_FORMATS = ("svg", "png")


def _resolve_format(out_path, fmt) -> str:
    if fmt is None:
        ext = os.path.splitext(str(out_path))[1].lstrip(".").lower()
        fmt = ext or "svg"
    if fmt not in _FORMATS:
        raise InputError(f"unsupported output format {fmt!r} (choose from {_FORMATS})")
    return fmt


def _save(fig: Figure, out_path, fmt) -> None:
    fmt = _resolve_format(out_path, fmt)
    # Date for SVG, Software for PNG: both embed wall-clock or version noise.
    metadata = {"Date": None} if fmt == "svg" else {"Software": None}
    with rc_context(_RC):
        fig.savefig(out_path, format=fmt, metadata=metadata)


def build_decay_figure(table: Table, x_col: str, y_col: str, where=None,
                       log_x: bool = True):
    """Median decay curve with a fitted slope annotation.

    Returns ``(figure, fit)`` where ``fit`` is the independent median fit the
    annotation was rendered from.
    """
    fit = fit_medians(table, x_col, y_col, where=where, log_x=log_x)
    xs = np.array([p[0] for p in fit.points])
    ys = np.array([p[1] for p in fit.points])
    xt = np.log10(xs) if log_x else xs
    line = 10.0 ** (fit.intercept + fit.slope * xt)

    with rc_context(_RC):
        fig = Figure()
        ax = fig.subplots()
        ax.plot(xs, ys, "o-", color="C0", label=f"median {y_col}")
        ax.plot(xs, line, "--", color="C3",
                label=f"fit, slope = {fit.slope:.4f}")
        ax.set_yscale("log")
        if log_x:
            ax.set_xscale("log")
        ax.set_xlabel(x_col)
        ax.set_ylabel(y_col)
        kind = table.meta.get("kind", "")
        ax.set_title(f"{kind} decay" if kind else "decay")
        ax.annotate(f"slope = {fit.slope:.4f}", xy=(0.05, 0.05),
                    xycoords="axes fraction")
        ax.legend(loc="upper right")
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
    return fig, fit


_SPECTRUM_SERIES = [
    ("magnitude_msq", "memoryless", "C2"),
    ("magnitude_sd1", "first order", "C0"),
    ("magnitude_sd2", "second order", "C3"),
]


def build_spectrum_figure(table: Table) -> Figure:
    """Overlaid error spectra with the signal band shaded."""
    fi = table.column("freq_index")
    sig_i = table.column("signal_magnitude")
    series = [(table.column(col), label, color)
              for col, label, color in _SPECTRUM_SERIES]
    try:
        band = int(table.meta["band"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"{table.path} lacks an integer band= metadata entry") from exc

    freq = np.array([float(r[fi]) for r in table.rows])
    order = np.argsort(freq)
    freq = freq[order]

    def col_vals(ci):
        v = np.array([float(r[ci]) for r in table.rows])[order]
        return np.where(v > 0, v, np.nan)

    with rc_context(_RC):
        fig = Figure()
        ax = fig.subplots()
        ax.axvspan(-band, band, color="0.85", zorder=0, label="signal band")
        ax.semilogy(freq, col_vals(sig_i), color="0.4", lw=1.0, label="signal")
        for ci, label, color in series:
            ax.semilogy(freq, col_vals(ci), color=color, lw=1.2, label=label)
        ax.set_xlabel("freq_index")
        ax.set_ylabel("magnitude")
        ax.set_title(f"error spectra, band {band}, "
                     f"oversampling {table.meta.get('oversampling', '?')}")
        ax.legend(loc="upper right", fontsize="small")
        fig.tight_layout()
    return fig


def build_duals_figure(frame: np.ndarray, dual: np.ndarray, frame_meta=None,
                       scale: float = 2.0) -> Figure:
    """Planar frame and dual vectors as arrows from the origin.

    The dual is drawn scaled by ``scale`` so short dual vectors stay visible;
    the factor is annotated on the figure.
    """
    for name, mat in (("frame", frame), ("dual", dual)):
        if mat.ndim != 2 or mat.shape[1] != 2:
            raise InputError(f"{name} must be m x 2 to draw arrows, got {mat.shape}")
    if frame.shape != dual.shape:
        raise InputError(f"frame {frame.shape} and dual {dual.shape} disagree")
    if scale <= 0:
        raise InputError(f"dual scale must be positive, got {scale}")

    reach = max(float(np.max(np.linalg.norm(frame, axis=1))),
                scale * float(np.max(np.linalg.norm(dual, axis=1))))
    head = 0.04 * reach
    with rc_context(_RC):
        fig = Figure(figsize=(6.0, 6.0))
        ax = fig.subplots()
        for row in frame:
            ax.add_patch(FancyArrow(0.0, 0.0, row[0], row[1], color="C0",
                                    width=0.002 * reach, head_width=head,
                                    length_includes_head=True, label="_frame"))
        for row in dual:
            ax.add_patch(FancyArrow(0.0, 0.0, scale * row[0], scale * row[1],
                                    color="C3", width=0.002 * reach,
                                    head_width=head,
                                    length_includes_head=True, label="_dual"))
        lim = 1.15 * reach
        ax.set_xlim(-lim, lim)
        ax.set_ylim(-lim, lim)
        ax.set_aspect("equal")
        meta = frame_meta or {}
        bits = [meta.get("kind", "frame"), f"m={len(frame)}"]
        ax.set_title(", ".join(bits))
        ax.annotate(f"dual x{scale:g}", xy=(0.03, 0.95), xycoords="axes fraction",
                    color="C3")
        ax.legend(handles=[Line2D([], [], color="C0", label="frame"),
                           Line2D([], [], color="C3", label=f"dual x{scale:g}")],
                  loc="upper right")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
    return fig


def plot_decay(in_path, out_path, x_col: str, y_col: str = "err2", where=None,
               log_x: bool = True, fmt=None) -> SlopeFit:
    _resolve_format(out_path, fmt)
    table = read_table(in_path)
    fig, fit = build_decay_figure(table, x_col, y_col, where=where, log_x=log_x)
    _save(fig, out_path, fmt)
    return fit


def plot_spectrum(in_path, out_path, fmt=None) -> None:
    _resolve_format(out_path, fmt)
    table = read_table(in_path)
    fig = build_spectrum_figure(table)
    _save(fig, out_path, fmt)


def plot_duals(frame_path, dual_path, out_path, scale: float = 2.0,
               fmt=None) -> None:
    _resolve_format(out_path, fmt)
    frame_meta, frame = read_vectors(frame_path, "frame")
    _, dual = read_vectors(dual_path, "dual")
    fig = build_duals_figure(frame, dual, frame_meta=frame_meta, scale=scale)
    _save(fig, out_path, fmt)
