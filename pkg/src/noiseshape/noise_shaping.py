"""Noise-shaping quantization of frame coefficient sequences.

A noise-shaping quantizer maps a coefficient sequence ``y`` to a sequence
``q`` drawn from a finite alphabet so that the error satisfies

    y - q = H u

where ``H`` is a lower triangular transfer operator with unit diagonal and
``u`` is an internal state sequence the quantizer keeps small.  The greedy
quantizer implemented here achieves ``|u_n| <= delta`` whenever the operating
condition

    strict_part_inf_norm(H) + max|y| / delta <= levels

holds, where the strict part is ``I - H`` (the subdiagonal feedback).

Three transfer shapes are supported: a causal FIR filter with unit leading
tap, the r-th power of the first-order difference operator (classic
r-th-order sigma-delta), and a block-diagonal one-tap recursion with
coefficient beta that restarts at fixed block boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import ConfigError

__all__ = [
    "Alphabet",
    "TransferOperator",
    "QuantizationResult",
    "greedy_quantize",
    "msq_quantize",
    "stability_margin",
]

# Relative slack on |u| <= delta before a trial is flagged as overloaded;
# absorbs float roundoff when operating exactly at the stability boundary.
OVERLOAD_RTOL = 1e-9

# Dense realizations are meant for inspection and certificates, not bulk math.
DENSE_LIMIT = 4096


@dataclass(frozen=True)
class Alphabet:
    """Symmetric midrise alphabet with ``levels`` points spaced ``2 * delta``.

    The points are ``-(levels - 1) * delta + 2 * delta * i`` for
    ``i = 0 .. levels - 1``.  With ``levels = 2`` this is the one-bit alphabet
    ``{-delta, +delta}``.

    Parameters
    ----------
    levels : int
        Number of alphabet points, at least 2.
    delta : float
        Half the spacing between adjacent points, strictly positive.
    """

    levels: int
    delta: float

    def __post_init__(self) -> None:
        if not isinstance(self.levels, (int, np.integer)) or self.levels < 2:
            raise ConfigError(f"alphabet needs an integer levels >= 2, got {self.levels!r}")
        if not (isinstance(self.delta, (int, float, np.floating)) and math.isfinite(self.delta) and self.delta > 0):
            raise ConfigError(f"alphabet needs a finite delta > 0, got {self.delta!r}")
        object.__setattr__(self, "levels", int(self.levels))
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def values(self) -> np.ndarray:
        """All alphabet points in increasing order."""
        return (2.0 * np.arange(self.levels) - (self.levels - 1)) * self.delta

    @property
    def max_level(self) -> float:
        """Largest alphabet point, ``(levels - 1) * delta``."""
        return (self.levels - 1) * self.delta

    def round(self, w):
        """Round ``w`` to the nearest alphabet point.

        Ties go to the larger point; inputs beyond the extreme points saturate.
        Accepts scalars or arrays and returns the same shape.
        """
        lo = -self.max_level
        idx = np.floor((np.asarray(w, dtype=float) - lo) / (2.0 * self.delta) + 0.5)
        idx = np.clip(idx, 0, self.levels - 1)
        out = lo + 2.0 * self.delta * idx
        if np.isscalar(w):
            return float(out)
        return out


@dataclass(frozen=True, eq=False)
class TransferOperator:
    """Lower triangular unit-diagonal transfer operator of a fixed size.

    Instances are built through the class methods below rather than the raw
    constructor.  ``kind`` is one of ``"filter"``, ``"power-diff"`` or
    ``"beta-block"``.
    """

    kind: str
    size: int
    taps: tuple[float, ...] = ()
    order: int = 0
    beta: float = 0.0
    blocks: int = 0

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_filter(cls, h, size: int) -> "TransferOperator":
        """Causal FIR transfer with impulse response ``h``, ``h[0] == 1``.

        Row ``n`` of the operator is ``h`` reversed and right-aligned, so the
        action on a vector is convolution truncated to ``size`` terms.
        """
        h = [float(v) for v in h]
        if len(h) == 0 or h[0] != 1.0:
            raise ConfigError("filter transfer needs a leading tap equal to 1")
        if not all(math.isfinite(v) for v in h):
            raise ConfigError("filter taps must be finite")
        if size < 1:
            raise ConfigError(f"transfer size must be >= 1, got {size}")
        return cls(kind="filter", size=int(size), taps=tuple(h[1:]))

    @classmethod
    def sigma_delta(cls, order: int, size: int) -> "TransferOperator":
        """r-th power of the first-order difference, taps ``(-1)^j C(r, j)``."""
        if not (isinstance(order, (int, np.integer)) and order >= 1):
            raise ConfigError(f"difference order must be an integer >= 1, got {order!r}")
        if size < 1:
            raise ConfigError(f"transfer size must be >= 1, got {size}")
        taps = tuple(float((-1) ** j * math.comb(order, j)) for j in range(1, order + 1))
        return cls(kind="power-diff", size=int(size), taps=taps, order=int(order))

    @classmethod
    def beta_block(cls, beta: float, blocks: int, size: int) -> "TransferOperator":
        """Block-diagonal recursion ``u_n -> u_n - beta * u_{n-1}`` inside blocks.

        ``size`` must split into ``blocks`` equal blocks; the recursion state
        resets at every block boundary.
        """
        if not (math.isfinite(beta) and beta >= 1.0):
            raise ConfigError(f"beta must be finite and >= 1, got {beta!r}")
        if blocks < 1 or size < 1 or size % blocks != 0:
            raise ConfigError(f"size {size} must be a positive multiple of blocks {blocks}")
        return cls(kind="beta-block", size=int(size), beta=float(beta), blocks=int(blocks))

    # -- structure ------------------------------------------------------

    @property
    def block_len(self) -> int:
        if self.kind != "beta-block":
            raise ConfigError("block_len only applies to beta-block transfers")
        return self.size // self.blocks

    @property
    def tag(self) -> str:
        """Short identifier used in CSV metadata and dual labels."""
        if self.kind == "power-diff":
            return f"r={self.order}"
        if self.kind == "beta-block":
            return f"beta={self.beta:g},p={self.blocks}"
        return "filter"

    def strict_part_inf_norm(self) -> float:
        """Max-row-sum norm of ``I - H`` (the feedback the quantizer sees)."""
        if self.kind == "beta-block":
            return self.beta if self.block_len > 1 else 0.0
        reach = min(len(self.taps), self.size - 1)
        return float(sum(abs(t) for t in self.taps[:reach]))

    def dense(self) -> np.ndarray:
        """Materialize the operator as a dense array. Guarded by size."""
        if self.size > DENSE_LIMIT:
            raise ConfigError(f"dense transfer limited to size {DENSE_LIMIT}, got {self.size}")
        m = self.size
        out = np.eye(m)
        if self.kind == "beta-block":
            for start in range(0, m, self.block_len):
                for n in range(start + 1, start + self.block_len):
                    out[n, n - 1] = -self.beta
            return out
        for j, t in enumerate(self.taps, start=1):
            if j >= m:
                break
            out += np.diag(np.full(m - j, t), k=-j)
        return out

    # -- actions ----------------------------------------------------------
    # apply / solve / *_transpose accept (size,) or (size, cols) arrays and
    # act along axis 0.

    def _check_shape(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.size:
            raise ConfigError(f"expected leading dimension {self.size}, got {v.shape}")
        return v

    def _blockwise(self, v: np.ndarray, fn) -> np.ndarray:
        shape = v.shape
        rows = v.reshape(self.blocks, self.block_len, -1)
        return fn(rows).reshape(shape)

    def apply(self, v):
        """Compute ``H v``."""
        v = self._check_shape(v)
        if self.kind == "beta-block":
            def fwd(rows):
                out = rows.copy()
                out[:, 1:, :] -= self.beta * rows[:, :-1, :]
                return out
            return self._blockwise(v, fwd)
        b = np.array([1.0, *self.taps])
        return lfilter(b, [1.0], v, axis=0)

    def solve(self, w):
        """Compute ``H^{-1} w`` by forward substitution."""
        w = self._check_shape(w)
        if self.kind == "power-diff":
            out = w
            for _ in range(self.order):
                out = np.cumsum(out, axis=0)
            return out
        if self.kind == "beta-block":
            def fwd(rows):
                return lfilter([1.0], [1.0, -self.beta], rows, axis=1)
            return self._blockwise(w, fwd)
        a = np.array([1.0, *self.taps])
        return lfilter([1.0], a, w, axis=0)

    def apply_transpose(self, v):
        """Compute ``H^T v``."""
        v = self._check_shape(v)
        if self.kind == "beta-block":
            def bwd(rows):
                out = rows.copy()
                out[:, :-1, :] -= self.beta * rows[:, 1:, :]
                return out
            return self._blockwise(v, bwd)
        b = np.array([1.0, *self.taps])
        return lfilter(b, [1.0], v[::-1], axis=0)[::-1]

    def solve_transpose(self, w):
        """Compute ``H^{-T} w`` by backward substitution."""
        w = self._check_shape(w)
        if self.kind == "beta-block":
            def bwd(rows):
                return lfilter([1.0], [1.0, -self.beta], rows[:, ::-1, :], axis=1)[:, ::-1, :]
            return self._blockwise(w, bwd)
        a = np.array([1.0, *self.taps])
        return lfilter([1.0], a, w[::-1], axis=0)[::-1]


@dataclass(frozen=True, eq=False)
class QuantizationResult:
    """Output of a quantization run.

    Attributes
    ----------
    q : np.ndarray
        Quantized sequence, every entry an alphabet point.
    u : np.ndarray
        Internal state, satisfies ``y - q = H u`` exactly for the greedy
        quantizer and ``u = y - q`` for memoryless scalar quantization.
    overloaded : bool
        True when ``max|u| > delta`` beyond roundoff slack, meaning the
        operating condition was violated and error guarantees are void.
    u_inf : float
        ``max|u|``.
    """

    q: np.ndarray
    u: np.ndarray
    overloaded: bool
    u_inf: float


def _flag(u: np.ndarray, delta: float) -> tuple[bool, float]:
    u_inf = float(np.max(np.abs(u))) if u.size else 0.0
    return bool(u_inf > delta * (1.0 + OVERLOAD_RTOL)), u_inf


def greedy_quantize(y, transfer: TransferOperator, alphabet: Alphabet) -> QuantizationResult:
    """Run the greedy noise-shaping quantizer.

    At each step the quantizer forms ``w_n = y_n - sum_j (I - H)_{n, n-j}
    u_{n-j}``, rounds it to the alphabet and stores the remainder in ``u_n``.
    The identity ``y - q = H u`` holds to machine precision regardless of
    overload.

    Parameters
    ----------
    y : array_like
        Coefficient sequence of length ``transfer.size``.
    transfer : TransferOperator
        Noise transfer operator ``H``.
    alphabet : Alphabet
        Output alphabet.

    Returns
    -------
    QuantizationResult
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != transfer.size:
        raise ConfigError(f"expected a length-{transfer.size} sequence, got shape {y.shape}")
    m = transfer.size
    lo = -alphabet.max_level
    two_delta = 2.0 * alphabet.delta
    top = alphabet.levels - 1
    q = np.empty(m)
    u = np.empty(m)

    if transfer.kind == "beta-block":
        beta = transfer.beta
        blen = transfer.block_len
        for n in range(m):
            w = y[n]
            if n % blen != 0:
                w += beta * u[n - 1]
            i = math.floor((w - lo) / two_delta + 0.5)
            if i < 0:
                i = 0
            elif i > top:
                i = top
            qn = lo + two_delta * i
            q[n] = qn
            u[n] = w - qn
    else:
        taps = transfer.taps
        s = len(taps)
        for n in range(m):
            w = y[n]
            for j in range(1, min(s, n) + 1):
                w -= taps[j - 1] * u[n - j]
            i = math.floor((w - lo) / two_delta + 0.5)
            if i < 0:
                i = 0
            elif i > top:
                i = top
            qn = lo + two_delta * i
            q[n] = qn
            u[n] = w - qn

    overloaded, u_inf = _flag(u, alphabet.delta)
    return QuantizationResult(q=q, u=u, overloaded=overloaded, u_inf=u_inf)


def msq_quantize(y, alphabet: Alphabet) -> QuantizationResult:
    """Memoryless scalar quantization: round each entry independently.

    Equivalent to the greedy quantizer with ``H = I``; the state is the plain
    rounding error ``u = y - q``.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ConfigError(f"expected a 1-d sequence, got shape {y.shape}")
    q = alphabet.round(y)
    u = y - q
    overloaded, u_inf = _flag(u, alphabet.delta)
    return QuantizationResult(q=q, u=u, overloaded=overloaded, u_inf=u_inf)


def stability_margin(transfer: TransferOperator, alphabet: Alphabet, y_inf: float) -> float:
    """Slack in the operating condition; nonnegative means guaranteed stable.

    Returns ``levels - strict_part_inf_norm(H) - y_inf / delta``.
    """
    if y_inf < 0:
        raise ConfigError("y_inf must be nonnegative")
    return alphabet.levels - transfer.strict_part_inf_norm() - y_inf / alphabet.delta
