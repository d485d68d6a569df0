"""Sparse recovery from noise-shaped compressed measurements.

Two pipelines:

* two-stage: a greedy decoder on the scaled pair ``(Phi / sqrt(m), q / sqrt(m))``
  produces a coarse estimate and a support guess; the fine stage re-solves on
  that support through ``H^{-1}`` and carries an a posteriori certificate.
* one-stage condensed: measurements and matrix are condensed by ``V`` and
  rescaled so columns have near-unit norm, then decoded directly; the decoder
  tolerance absorbs the condensed quantization noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConfigError, NumericalError
from .duals import Condensation, ErrorCertificate
from .frames import norm_2_to_2, norm_inf_to_inf, pinv_full_rank, sigma_min
from .noise_shaping import TransferOperator

__all__ = [
    "SparseSignal",
    "DecoderSpec",
    "DecodeResult",
    "TwoStageResult",
    "OneStageResult",
    "gen_sparse",
    "gen_compressible",
    "best_k_term_l1",
    "rip_constant_bruteforce",
    "decode",
    "two_stage_reconstruct",
    "one_stage_condensed_reconstruct",
]

RIP_BUDGET = 1_000_000


@dataclass(frozen=True, eq=False)
class SparseSignal:
    """Signal with known support and magnitude floor.

    ``min_mag`` is the smallest nonzero magnitude for exactly sparse signals
    and the smallest magnitude overall for compressible ones.
    """

    x: np.ndarray
    support: np.ndarray
    sparsity: int
    min_mag: float
    kind: str


def gen_sparse(n: int, k: int, min_mag: float, rng, spread: float = 2.0) -> SparseSignal:
    """Exactly k-sparse signal with unit-ball norm and magnitude floor.

    Magnitudes are uniform on ``[min_mag, M]`` with
    ``M = min(spread * min_mag, 1 / sqrt(k))`` so that the Euclidean norm
    stays at most 1; signs and support are uniform.

    Raises
    ------
    ConfigError
        If ``min_mag * sqrt(k) > 1`` (no such signal fits the unit ball).
    """
    if not (1 <= k <= n):
        raise ConfigError(f"need 1 <= k <= n, got k={k} n={n}")
    if min_mag <= 0:
        raise ConfigError(f"min_mag must be positive, got {min_mag}")
    hi = min(spread * min_mag, 1.0 / math.sqrt(k))
    if min_mag > hi:
        raise ConfigError(f"min_mag {min_mag} too large for k={k} within the unit ball")
    rng = np.random.default_rng(rng)
    support = np.sort(rng.choice(n, size=k, replace=False))
    mags = rng.uniform(min_mag, hi, size=k)
    signs = rng.integers(0, 2, size=k) * 2.0 - 1.0
    x = np.zeros(n)
    x[support] = mags * signs
    return SparseSignal(x=x, support=support, sparsity=k, min_mag=float(min_mag), kind="exact")


def gen_compressible(n: int, decay: float, rng) -> SparseSignal:
    """Unit-norm signal with power-law magnitudes ``i^{-decay}``, shuffled."""
    if decay <= 0:
        raise ConfigError(f"decay must be positive, got {decay}")
    rng = np.random.default_rng(rng)
    mags = np.arange(1, n + 1, dtype=float) ** (-decay)
    signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
    x = mags * signs
    rng.shuffle(x)
    x /= np.linalg.norm(x)
    return SparseSignal(
        x=x,
        support=np.arange(n),
        sparsity=n,
        min_mag=float(np.min(np.abs(x))),
        kind="compressible",
    )


def best_k_term_l1(x, k: int) -> float:
    """l1 norm of everything outside the k largest magnitudes."""
    x = np.asarray(x, dtype=float)
    if not (0 <= k <= x.size):
        raise ConfigError(f"need 0 <= k <= {x.size}, got {k}")
    mags = np.sort(np.abs(x))
    return float(np.sum(mags[: x.size - k]))


def rip_constant_bruteforce(a, k: int) -> float:
    """Exact restricted isometry constant of order k by support enumeration.

    Scans all supports of size k, so the budget guard refuses anything past
    one million subsets.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[1]
    if not (1 <= k <= n):
        raise ConfigError(f"need 1 <= k <= {n}, got {k}")
    if math.comb(n, k) > RIP_BUDGET:
        raise ConfigError(f"C({n},{k}) supports exceed the enumeration budget {RIP_BUDGET}")
    gram = a.T @ a
    worst = 0.0
    for supp in combinations(range(n), k):
        idx = np.asarray(supp)
        eigs = np.linalg.eigvalsh(gram[np.ix_(idx, idx)])
        worst = max(worst, float(eigs[-1] - 1.0), float(1.0 - eigs[0]))
    return worst


@dataclass(frozen=True)
class DecoderSpec:
    """Greedy decoder selection: kind ``"omp"`` or ``"iht"``.

    ``max_iter`` and ``tol`` only matter for iht (tol is on the change of the
    residual norm between sweeps); ``step`` overrides the default gradient
    step ``1 / |A|_2^2``.
    """

    kind: str
    sparsity: int
    max_iter: int = 500
    tol: float = 1e-10
    step: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("omp", "iht"):
            raise ConfigError(f"unknown decoder kind {self.kind!r}")
        if self.sparsity < 1:
            raise ConfigError(f"decoder sparsity must be >= 1, got {self.sparsity}")


@dataclass(frozen=True, eq=False)
class DecodeResult:
    estimate: np.ndarray
    support: np.ndarray
    iterations: int
    residual: float
    converged: bool


def _omp(a: np.ndarray, b: np.ndarray, k: int, residual_tol: float) -> DecodeResult:
    n = a.shape[1]
    col_norms = np.linalg.norm(a, axis=0)
    col_norms[col_norms == 0.0] = 1.0
    resid = b.copy()
    chosen: list[int] = []
    x = np.zeros(n)
    it = 0
    while len(chosen) < k:
        if np.linalg.norm(resid) <= residual_tol:
            break
        scores = np.abs(a.T @ resid) / col_norms
        scores[chosen] = -1.0
        nxt = int(np.argmax(scores))
        chosen.append(nxt)
        sub = a[:, chosen]
        coef, *_ = np.linalg.lstsq(sub, b, rcond=None)
        resid = b - sub @ coef
        it += 1
    x = np.zeros(n)
    if chosen:
        x[chosen] = coef
    return DecodeResult(
        estimate=x,
        support=np.sort(np.asarray(chosen, dtype=int)),
        iterations=it,
        residual=float(np.linalg.norm(resid)),
        converged=True,
    )


def _iht(a: np.ndarray, b: np.ndarray, spec: DecoderSpec) -> DecodeResult:
    n = a.shape[1]
    step = spec.step if spec.step is not None else 1.0 / norm_2_to_2(a) ** 2
    x = np.zeros(n)
    resid = b.copy()
    prev = float(np.linalg.norm(resid))
    converged = False
    it = 0
    for it in range(1, spec.max_iter + 1):
        x = x + step * (a.T @ resid)
        keep = np.argpartition(np.abs(x), n - spec.sparsity)[n - spec.sparsity:]
        mask = np.zeros(n, dtype=bool)
        mask[keep] = True
        x[~mask] = 0.0
        resid = b - a @ x
        cur = float(np.linalg.norm(resid))
        if abs(prev - cur) < spec.tol:
            converged = True
            break
        prev = cur
    return DecodeResult(
        estimate=x,
        support=np.sort(np.flatnonzero(x)),
        iterations=it,
        residual=float(np.linalg.norm(resid)),
        converged=converged,
    )


def decode(spec: DecoderSpec, a, b, residual_tol: float = 0.0) -> DecodeResult:
    """Run the selected greedy decoder on ``min |b - A x|`` with ``x`` sparse.

    ``residual_tol`` stops omp early once the residual is explained to within
    the known noise level; iht ignores it (its stop is stagnation-based).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.shape != (a.shape[0],):
        raise ConfigError(f"shape mismatch: A {a.shape}, b {b.shape}")
    if spec.sparsity > a.shape[1]:
        raise ConfigError(f"decoder sparsity {spec.sparsity} exceeds columns {a.shape[1]}")
    if spec.kind == "omp":
        return _omp(a, b, spec.sparsity, residual_tol)
    return _iht(a, b, spec)


@dataclass(frozen=True, eq=False)
class TwoStageResult:
    """Coarse decode plus support-restricted refinement.

    ``fallback`` is True when the fine stage was skipped because the
    transformed column submatrix was rank deficient; ``estimate`` then equals
    the coarse output and no certificate is attached.
    """

    estimate: np.ndarray
    support: np.ndarray
    coarse: np.ndarray
    certificate: ErrorCertificate | None
    fallback: bool


def two_stage_reconstruct(
    phi,
    q,
    transfer: TransferOperator,
    spec: DecoderSpec,
    u_inf: float | None = None,
    overloaded: bool = False,
) -> TwoStageResult:
    """Coarse greedy decode, then least squares through ``H^{-1}`` on the support.

    The decoder sees ``(Phi / sqrt(m), q / sqrt(m))`` so its columns are near
    unit norm.  The support is the decoder's ``sparsity`` largest coarse
    magnitudes.  When ``u_inf`` is given and the run was not overloaded, the
    result carries the support-restricted certificate
    ``sqrt(m) * u_inf / sigma_min(H^{-1} Phi_T)``.
    """
    phi = np.asarray(phi, dtype=float)
    q = np.asarray(q, dtype=float)
    m = phi.shape[0]
    if transfer.size != m or q.shape != (m,):
        raise ConfigError("frame rows, transfer size and coefficient length must agree")
    scale = math.sqrt(m)
    coarse_res = decode(spec, phi / scale, q / scale)
    coarse = coarse_res.estimate
    order = np.argsort(np.abs(coarse))
    support = np.sort(order[-spec.sparsity:])

    sub = transfer.solve(phi[:, support])
    smin = sigma_min(sub)
    tol = max(sub.shape) * np.finfo(float).eps * norm_2_to_2(sub)
    if smin <= tol:
        return TwoStageResult(
            estimate=coarse,
            support=support,
            coarse=coarse,
            certificate=None,
            fallback=True,
        )
    fine_coef = pinv_full_rank(sub) @ transfer.solve(q)
    estimate = np.zeros(phi.shape[1])
    estimate[support] = fine_coef

    certificate = None
    if u_inf is not None and not overloaded:
        certificate = ErrorCertificate(
            bound=scale * u_inf / smin,
            mechanism="hinv",
            u_inf=float(u_inf),
            sigma_min=smin,
            rows=m,
            bound_l21=float("nan"),
            bound_sqrt=scale * u_inf / smin,
            tighter_route="sqrt",
        )
    return TwoStageResult(
        estimate=estimate,
        support=support,
        coarse=coarse,
        certificate=certificate,
        fallback=False,
    )


@dataclass(frozen=True, eq=False)
class OneStageResult:
    """Direct decode of condensed measurements."""

    estimate: np.ndarray
    support: np.ndarray
    noise_budget: float
    decode: DecodeResult


def one_stage_condensed_reconstruct(
    phi,
    q,
    cond: Condensation,
    transfer: TransferOperator,
    spec: DecoderSpec,
    u_inf: float | None = None,
) -> OneStageResult:
    """Decode ``alpha V q`` against ``alpha V Phi`` directly.

    For the beta condensation the scale ``alpha = 1 / (sqrt(entry_variance *
    p))`` makes the condensed gaussian columns near unit norm.  The noise
    budget handed to the decoder is ``alpha * sqrt(p) * |V H|_{inf->inf} *
    u_inf``, a bound on the Euclidean norm of the condensed quantization
    noise; omp stops once the residual falls below it.
    """
    phi = np.asarray(phi, dtype=float)
    q = np.asarray(q, dtype=float)
    m = phi.shape[0]
    if cond.m != m or transfer.size != m or q.shape != (m,):
        raise ConfigError("frame rows, condensation columns and transfer size must agree")
    if cond.kind.startswith("beta=") and cond.entry_variance > 0:
        alpha = 1.0 / math.sqrt(cond.entry_variance * cond.p)
    else:
        alpha = 1.0 / math.sqrt(cond.p)
    a = alpha * (cond.matrix @ phi)
    b = alpha * (cond.matrix @ q)
    budget = 0.0
    if u_inf is not None:
        vh = transfer.apply_transpose(cond.matrix.T).T
        budget = alpha * math.sqrt(cond.p) * norm_inf_to_inf(vh) * u_inf
    res = decode(spec, a, b, residual_tol=budget)
    return OneStageResult(
        estimate=res.estimate,
        support=res.support,
        noise_budget=budget,
        decode=res,
    )
