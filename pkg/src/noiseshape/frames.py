"""Finite frames for R^k as tall matrices, plus the norms used by error bounds.

A frame is an ``m x k`` real matrix of full column rank whose rows are the
analysis vectors; coefficients of a signal ``x`` are ``y = Phi x``.  Row order
matters downstream: noise-shaping output depends on the order rows feed the
quantizer, so ``Frame`` carries the ordering explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError
from .noise_shaping import TransferOperator

__all__ = [
    "Frame",
    "generate_frame",
    "canonical_dual",
    "frame_variation",
    "sigma_min",
    "pinv_full_rank",
    "norm_2_to_2",
    "norm_inf_to_inf",
    "norm_l21",
    "bound_inf_to_2",
    "norm_inf_to_2_exact",
]

# Exhaustive sign enumeration is exponential in m; keep it a diagnostic.
EXACT_INF2_LIMIT = 20


@dataclass(frozen=True, eq=False)
class Frame:
    """Analysis frame: rows of ``matrix`` are the frame vectors.

    ``ordering`` records the row permutation relative to the native
    construction (identity unless the frame was reordered).
    """

    matrix: np.ndarray
    kind: str
    seed: int = 0
    ordering: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        mat = np.ascontiguousarray(np.asarray(self.matrix, dtype=float))
        if mat.ndim != 2 or mat.shape[0] < mat.shape[1] or mat.shape[1] < 1:
            raise ConfigError(f"frame matrix must be m x k with m >= k >= 1, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ConfigError("frame matrix must be finite")
        object.__setattr__(self, "matrix", mat)
        order = self.ordering
        if order is None:
            order = np.arange(mat.shape[0])
        order = np.asarray(order, dtype=int)
        if sorted(order.tolist()) != list(range(mat.shape[0])):
            raise ConfigError("ordering must be a permutation of the row indices")
        object.__setattr__(self, "ordering", order)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def k(self) -> int:
        return self.matrix.shape[1]

    def analyze(self, x) -> np.ndarray:
        """Coefficients ``Phi x``."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.k,):
            raise ConfigError(f"expected a length-{self.k} signal, got shape {x.shape}")
        return self.matrix @ x

    def reorder(self, permutation) -> "Frame":
        """New frame with rows permuted; composes with the stored ordering."""
        perm = np.asarray(permutation, dtype=int)
        return Frame(
            matrix=self.matrix[perm],
            kind=self.kind,
            seed=self.seed,
            ordering=self.ordering[perm],
        )


def _harmonic_matrix(m: int, k: int, period_scale: float) -> np.ndarray:
    """Sampled trigonometric system on t_j = j / (period_scale * m)."""
    t = np.arange(m) / (period_scale * m)
    cols = []
    if k % 2 == 1:
        cols.append(np.ones(m))
        pairs = (k - 1) // 2
    else:
        pairs = k // 2
    for ell in range(1, pairs + 1):
        cols.append(np.cos(2.0 * np.pi * ell * t))
        cols.append(np.sin(2.0 * np.pi * ell * t))
    return np.column_stack(cols)


def generate_frame(kind: str, m: int, k: int, seed: int = 0, **params) -> Frame:
    """Generate a frame of one of the built-in kinds.

    Kinds
    -----
    ``roots-of-unity``
        k = 2 only; row j is ``(cos, sin)`` of ``2 pi j / m``.
    ``harmonic``
        Full-period sampled trigonometric frame on ``t_j = j / m``; odd k
        includes the constant column, even k uses cos/sin pairs only.
    ``harmonic-semi``
        Half-period variant on ``t_j = j / (2 m)``.
    ``sobolev-selfdual``
        Columns are the k lowest left singular vectors of the r-fold
        difference operator (keyword ``r``, default 1); deterministic.
    ``gaussian``
        I.i.d. standard normal entries from seed.
    ``bernoulli``
        I.i.d. uniform +-1 entries from seed.
    ``custom``
        Caller-supplied matrix (keyword ``matrix``), validated only.

    Raises
    ------
    ConfigError
        For m < k, a kind/shape mismatch, or unknown kind.
    NumericalError
        If the result is not numerically full column rank.
    """
    if m < k or k < 1:
        raise ConfigError(f"need m >= k >= 1, got m={m} k={k}")
    if kind == "roots-of-unity":
        if k != 2:
            raise ConfigError("roots-of-unity frames require k = 2")
        theta = 2.0 * np.pi * np.arange(m) / m
        mat = np.column_stack([np.cos(theta), np.sin(theta)])
    elif kind == "harmonic":
        mat = _harmonic_matrix(m, k, 1.0)
    elif kind == "harmonic-semi":
        mat = _harmonic_matrix(m, k, 2.0)
    elif kind == "sobolev-selfdual":
        r = int(params.get("r", 1))
        diff = TransferOperator.sigma_delta(r, m).dense()
        left, _, _ = np.linalg.svd(diff)
        mat = left[:, m - k:]
    elif kind == "gaussian":
        rng = np.random.default_rng(seed)
        mat = rng.standard_normal((m, k))
    elif kind == "bernoulli":
        rng = np.random.default_rng(seed)
        mat = rng.integers(0, 2, size=(m, k)).astype(float) * 2.0 - 1.0
    elif kind == "custom":
        if "matrix" not in params:
            raise ConfigError("custom frames need a matrix")
        mat = np.asarray(params["matrix"], dtype=float)
    else:
        raise ConfigError(f"unknown frame kind {kind!r}")

    frame = Frame(matrix=mat, kind=kind, seed=int(seed))
    if sigma_min(frame.matrix) <= _rank_tol(frame.matrix):
        raise NumericalError(f"{kind} frame with m={m} k={k} is numerically rank deficient")
    return frame


# -- linear algebra helpers ------------------------------------------------


def _rank_tol(a: np.ndarray) -> float:
    return max(a.shape) * np.finfo(float).eps * norm_2_to_2(a)


def sigma_min(a) -> float:
    """Smallest singular value."""
    a = np.asarray(a, dtype=float)
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def pinv_full_rank(a) -> np.ndarray:
    """Pseudoinverse that refuses rank-deficient input.

    Raises
    ------
    NumericalError
        If the smallest singular value is at or below the rank tolerance
        ``max(shape) * eps * sigma_max``.
    """
    a = np.asarray(a, dtype=float)
    left, sing, right_t = np.linalg.svd(a, full_matrices=False)
    tol = max(a.shape) * np.finfo(float).eps * (sing[0] if sing.size else 0.0)
    if sing.size == 0 or sing[-1] <= tol:
        raise NumericalError(
            f"matrix numerically rank deficient: sigma_min={sing[-1] if sing.size else 0.0:.3e}"
        )
    return (right_t.T / sing) @ left.T


def canonical_dual(frame: Frame | np.ndarray) -> np.ndarray:
    """Canonical dual as a ``k x m`` synthesis matrix, ``(Phi^T Phi)^{-1} Phi^T``."""
    mat = frame.matrix if isinstance(frame, Frame) else np.asarray(frame, dtype=float)
    return pinv_full_rank(mat)


def frame_variation(dual: np.ndarray) -> float:
    """Total variation of the dual column sequence.

    For a ``k x m`` synthesis matrix with columns ``psi_1 .. psi_m`` this is
    ``sum_j |psi_j - psi_{j+1}|_2`` with ``psi_{m+1} = 0``.  Small variation
    is what makes first-order noise shaping effective for a given dual.
    """
    dual = np.asarray(dual, dtype=float)
    if dual.ndim != 2:
        raise ConfigError(f"expected a k x m synthesis matrix, got shape {dual.shape}")
    steps = np.diff(dual, axis=1)
    total = float(np.sum(np.linalg.norm(steps, axis=0)))
    total += float(np.linalg.norm(dual[:, -1]))
    return total


def norm_2_to_2(a) -> float:
    """Spectral norm."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def norm_inf_to_inf(a) -> float:
    """Max absolute row sum."""
    a = np.asarray(a, dtype=float)
    return float(np.max(np.sum(np.abs(a), axis=1)))


def norm_l21(a) -> float:
    """Sum of column Euclidean norms; upper-bounds the inf-to-2 norm."""
    a = np.asarray(a, dtype=float)
    return float(np.sum(np.linalg.norm(a, axis=0)))


def bound_inf_to_2(a) -> float:
    """Cheapest available upper bound on ``max_{|v|_inf <= 1} |A v|_2``.

    Takes the minimum of the column-norm sum and ``sqrt(cols) * spectral``.
    """
    a = np.asarray(a, dtype=float)
    return min(norm_l21(a), math.sqrt(a.shape[1]) * norm_2_to_2(a))


def norm_inf_to_2_exact(a) -> float:
    """Exact ``inf -> 2`` operator norm by sign enumeration.

    The maximizer is a sign vector, so the norm is ``max_s |A s|_2`` over all
    ``2^{cols}`` sign patterns; only the patterns with first entry fixed need
    scanning.  Guarded to ``cols <= 20``.
    """
    a = np.asarray(a, dtype=float)
    cols = a.shape[1]
    if cols > EXACT_INF2_LIMIT:
        raise ConfigError(f"exact inf->2 norm limited to {EXACT_INF2_LIMIT} columns, got {cols}")
    best = 0.0
    # Gray-code style scan in chunks keeps memory flat for cols near the limit.
    total = 1 << max(cols - 1, 0)
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        bits = (idx[:, None] >> np.arange(cols, dtype=np.uint64)) & 1
        signs = bits.astype(float) * 2.0 - 1.0
        vals = np.linalg.norm(signs @ a.T, axis=1)
        best = max(best, float(np.max(vals)))
    return best
