"""Figure rendering for noise-shaping result CSVs.

Reads the documented experiment, spectrum, frame, and dual file formats and
renders decay curves, error spectra, and dual-frame arrow diagrams.  The
readers and the slope fitter are independent of the producing package on
purpose: an annotated slope is a cross-check, not an echo.
"""

from .errors import InputError
from .figures import (
    build_decay_figure,
    build_duals_figure,
    build_spectrum_figure,
    plot_decay,
    plot_duals,
    plot_spectrum,
)
from .tables import SlopeFit, Table, fit_medians, read_table, read_vectors

__all__ = [
    "InputError",
    "SlopeFit",
    "Table",
    "build_decay_figure",
    "build_duals_figure",
    "build_spectrum_figure",
    "fit_medians",
    "plot_decay",
    "plot_duals",
    "plot_spectrum",
    "read_table",
    "read_vectors",
]

__version__ = "0.1.0"
