"""Reproducible experiment harness.

Every experiment is a sweep over a grid of integers (frame sizes, block
lengths or oversampling factors) with a fixed number of trials per grid
point.  Trial ``t`` at grid index ``g`` draws everything it needs from one
generator seeded with ``splitmix64(master_seed, g * trials + t)``, so results
are independent of execution order and reruns are byte-identical.

Per-trial wall time is tracked on the record objects and logged to stderr on
request but never written to the CSV, which would break byte determinism.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, fields, replace

import numpy as np

from . import adc as adcmod
from .compressive import (
    DecoderSpec,
    best_k_term_l1,
    gen_compressible,
    gen_sparse,
    one_stage_condensed_reconstruct,
    two_stage_reconstruct,
)
from .csvio import format_value, read_table, write_table
from .duals import (
    beta_condensation,
    certificate_hinv,
    certificate_vdual,
    hinv_dual,
    reconstruct,
    v_dual,
)
from .errors import ConfigError
from .frames import Frame, bound_inf_to_2, canonical_dual, generate_frame, sigma_min
from .noise_shaping import Alphabet, TransferOperator, greedy_quantize, msq_quantize

__all__ = [
    "EXPERIMENT_KINDS",
    "ExperimentConfig",
    "ExperimentRecord",
    "FitResult",
    "splitmix64",
    "sub_seed",
    "default_config",
    "run_experiment",
    "fit_slope",
    "singular_value_census",
    "census_pass_rate",
    "adc_spectrum_table",
]

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

EXPERIMENT_KINDS = (
    "frame-decay",
    "beta-decay",
    "sv-census",
    "cs-two-stage",
    "cs-compressible",
    "adc-decay",
)


def splitmix64(master_seed: int, index: int) -> int:
    """Mix a master seed and an index into an independent 64-bit sub-seed.

    Exact arithmetic, all mod 2**64::

        z = master_seed + (index + 1) * 0x9E3779B97F4A7C15
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)
    """
    if index < 0:
        raise ConfigError(f"index must be >= 0, got {index}")
    z = (master_seed + (index + 1) * _GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def sub_seed(master_seed: int, grid_index: int, trials: int, trial: int) -> int:
    """Sub-seed for one trial: ``splitmix64(master, grid_index * trials + trial)``."""
    return splitmix64(master_seed, grid_index * trials + trial)


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment sweep.

    ``grid`` is the sweep axis; its meaning depends on ``kind`` (frame sizes
    for frame-decay / sv-census / cs experiments, block lengths for
    beta-decay, oversampling factors for adc-decay).  ``levels`` and
    ``delta`` equal to 0 select the per-kind policy documented in the README.
    """

    kind: str
    grid: tuple[int, ...]
    trials: int
    master_seed: int
    frame_kind: str = "gaussian"
    k: int = 2
    r: int = 1
    levels: int = 0
    delta: float = 0.0
    beta: float = 1.5
    p: int = 2
    alpha: float = 0.5
    ambient: int = 256
    sparsity: int = 5
    min_mag: float = 0.3
    decoder: str = "omp"
    band: int = 2
    rolloff: float = 0.25
    delta_floor: float = 4.0
    decay: float = 2.0

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        grid = tuple(int(g) for g in self.grid)
        if len(grid) == 0 or any(g < 1 for g in grid):
            raise ConfigError(f"grid must be nonempty positive integers, got {self.grid}")
        object.__setattr__(self, "grid", grid)
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        if self.r < 1:
            raise ConfigError(f"r must be >= 1, got {self.r}")
        if self.levels < 0 or self.delta < 0:
            raise ConfigError("levels and delta must be 0 (policy default) or positive")
        if self.kind == "beta-decay" and self.beta <= 1.0:
            raise ConfigError(f"beta-decay needs beta > 1, got {self.beta}")
        if self.kind in ("cs-two-stage", "cs-compressible"):
            if self.ambient < 1 or self.sparsity < 1 or self.sparsity > self.ambient:
                raise ConfigError("need 1 <= sparsity <= ambient")
        if self.kind == "cs-compressible":
            for m in grid:
                if m % self.p != 0:
                    raise ConfigError(f"grid size {m} not a multiple of blocks p={self.p}")
        if self.kind == "adc-decay":
            if self.band < 1:
                raise ConfigError(f"band must be >= 1, got {self.band}")
            if any(g < 2 for g in grid):
                raise ConfigError("adc-decay oversampling grid must be >= 2")


_DEFAULTS: dict[str, dict] = {
    "frame-decay": dict(
        grid=(32, 64, 128, 256, 512, 1024), trials=20, frame_kind="roots-of-unity", k=2, r=1
    ),
    "beta-decay": dict(grid=tuple(range(2, 13)), trials=50, k=2, p=2, beta=1.5, levels=2),
    "sv-census": dict(grid=(512,), trials=100, k=8, r=1, alpha=0.5),
    "cs-two-stage": dict(
        grid=(160,), trials=50, ambient=256, sparsity=5, r=2, levels=61, min_mag=0.3
    ),
    "cs-compressible": dict(
        grid=(64, 128, 256), trials=20, ambient=256, sparsity=16, p=32, beta=1.5, levels=16
    ),
    "adc-decay": dict(grid=(8, 16, 32, 64, 128), trials=10, band=2, r=1),
}


def default_config(kind: str, master_seed: int = 0, **overrides) -> ExperimentConfig:
    """Config with the documented defaults for a kind, plus overrides."""
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    params = dict(_DEFAULTS[kind])
    params.update(overrides)
    return ExperimentConfig(kind=kind, master_seed=master_seed, **params)


@dataclass
class ExperimentRecord:
    """One trial outcome.

    ``params`` carries the sweep coordinates and per-kind extras in CSV column
    order.  ``runtime_ms`` stays in memory only.
    """

    trial: int
    sub_seed: int
    params: dict
    err2: float | None = None
    bound: float | None = None
    sigma_min: float | None = None
    u_inf: float | None = None
    overloaded: bool | None = None
    support_recovered: bool | None = None
    runtime_ms: float = 0.0

    def row(self) -> list:
        return [
            self.trial,
            self.sub_seed,
            *self.params.values(),
            self.err2,
            self.bound,
            self.sigma_min,
            self.u_inf,
            self.overloaded,
            self.support_recovered,
        ]

    def header(self) -> list[str]:
        return [
            "trial",
            "sub_seed",
            *self.params.keys(),
            "err2",
            "bound",
            "sigma_min",
            "u_inf",
            "overloaded",
            "support_recovered",
        ]


def _sd_levels(r: int) -> int:
    return 2 ** r + 1


def _uniform_disk(rng) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * np.pi)
    rad = math.sqrt(rng.uniform())
    return np.array([rad * math.cos(theta), rad * math.sin(theta)])


def _run_frame_decay(cfg: ExperimentConfig, records: list) -> None:
    levels = cfg.levels or _sd_levels(cfg.r)
    delta = cfg.delta or 0.5
    alphabet = Alphabet(levels, delta)
    for gi, m in enumerate(cfg.grid):
        frame = generate_frame(cfg.frame_kind, m, cfg.k)
        transfer = TransferOperator.sigma_delta(cfg.r, m)
        dual = hinv_dual(frame, transfer)
        cdual = canonical_dual(frame)
        cdual_gain = bound_inf_to_2(cdual)
        for t in range(cfg.trials):
            seed = sub_seed(cfg.master_seed, gi, cfg.trials, t)
            rng = np.random.default_rng(seed)
            x = _uniform_disk(rng)
            y = frame.analyze(x)
            start = time.perf_counter()

            qres = greedy_quantize(y, transfer, alphabet)
            xh = reconstruct(dual, qres.q)
            err = float(np.linalg.norm(x - xh))
            cert = None if qres.overloaded else certificate_hinv(frame, transfer, qres)
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={"m": m, "scheme": "sd"},
                err2=err,
                bound=None if cert is None else cert.bound,
                sigma_min=None if cert is None else cert.sigma_min,
                u_inf=qres.u_inf,
                overloaded=qres.overloaded,
                runtime_ms=(time.perf_counter() - start) * 1e3,
            ))

            mres = msq_quantize(y, alphabet)
            xm = cdual @ mres.q
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={"m": m, "scheme": "msq"},
                err2=float(np.linalg.norm(x - xm)),
                bound=None if mres.overloaded else cdual_gain * mres.u_inf,
                sigma_min=sigma_min(frame.matrix),
                u_inf=mres.u_inf,
                overloaded=mres.overloaded,
            ))


def _run_beta_decay(cfg: ExperimentConfig, records: list) -> None:
    levels = cfg.levels or 2
    for gi, lam in enumerate(cfg.grid):
        m = cfg.p * lam
        for t in range(cfg.trials):
            seed = sub_seed(cfg.master_seed, gi, cfg.trials, t)
            rng = np.random.default_rng(seed)
            x = rng.standard_normal(cfg.k)
            x /= np.linalg.norm(x)
            frame = Frame(matrix=rng.standard_normal((m, cfg.k)), kind="gaussian", seed=seed)
            y = frame.analyze(x)
            start = time.perf_counter()
            y_inf = float(np.max(np.abs(y)))
            delta = cfg.delta or max(y_inf, cfg.delta_floor) / (levels - cfg.beta)
            alphabet = Alphabet(levels, delta)
            transfer = TransferOperator.beta_block(cfg.beta, cfg.p, m)
            cond = beta_condensation(cfg.beta, cfg.p, m)
            qres = greedy_quantize(y, transfer, alphabet)
            dual = v_dual(frame, cond)
            xh = reconstruct(dual, qres.q)
            err = float(np.linalg.norm(x - xh))
            cert = None if qres.overloaded else certificate_vdual(frame, cond, transfer, qres)
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={"lam": lam, "m": m, "delta": delta},
                err2=err,
                bound=None if cert is None else cert.bound,
                sigma_min=None if cert is None else cert.sigma_min,
                u_inf=qres.u_inf,
                overloaded=qres.overloaded,
                runtime_ms=(time.perf_counter() - start) * 1e3,
            ))


def _run_sv_census(cfg: ExperimentConfig, records: list) -> None:
    if cfg.frame_kind not in ("gaussian", "bernoulli"):
        raise ConfigError(f"sv-census needs a random frame kind, got {cfg.frame_kind!r}")
    for gi, m in enumerate(cfg.grid):
        if m % cfg.k != 0:
            raise ConfigError(f"census size {m} must be a multiple of k={cfg.k}")
        lam = m // cfg.k
        threshold = lam ** (cfg.alpha * (cfg.r - 0.5)) * math.sqrt(m)
        transfer = TransferOperator.sigma_delta(cfg.r, m)
        for t in range(cfg.trials):
            seed = sub_seed(cfg.master_seed, gi, cfg.trials, t)
            start = time.perf_counter()
            frame = generate_frame(cfg.frame_kind, m, cfg.k, seed=seed)
            smin = sigma_min(transfer.solve(frame.matrix))
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={
                    "m": m,
                    "k": cfg.k,
                    "lam": lam,
                    "threshold": threshold,
                    "passed": bool(smin >= threshold),
                },
                sigma_min=smin,
                runtime_ms=(time.perf_counter() - start) * 1e3,
            ))


def _run_cs_two_stage(cfg: ExperimentConfig, records: list) -> None:
    levels = cfg.levels or 61
    strict = 2 ** cfg.r - 1
    if levels <= strict + 1:
        raise ConfigError(f"levels {levels} leave no stability budget at r={cfg.r}")
    spec = DecoderSpec(cfg.decoder, cfg.sparsity)
    for gi, m in enumerate(cfg.grid):
        transfer = TransferOperator.sigma_delta(cfg.r, m)
        for t in range(cfg.trials):
            seed = sub_seed(cfg.master_seed, gi, cfg.trials, t)
            rng = np.random.default_rng(seed)
            signal = gen_sparse(cfg.ambient, cfg.sparsity, cfg.min_mag, rng)
            phi = rng.standard_normal((m, cfg.ambient))
            y = phi @ signal.x
            start = time.perf_counter()
            y_inf = float(np.max(np.abs(y)))
            delta = cfg.delta or y_inf / (levels - strict)
            alphabet = Alphabet(levels, delta)
            qres = greedy_quantize(y, transfer, alphabet)
            res = two_stage_reconstruct(
                phi, qres.q, transfer, spec, u_inf=qres.u_inf, overloaded=qres.overloaded
            )
            err_fine = float(np.linalg.norm(signal.x - res.estimate))
            err_coarse = float(np.linalg.norm(signal.x - res.coarse))
            eps_q = float(np.linalg.norm(y - qres.q) / math.sqrt(m))
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={
                    "m": m,
                    "ambient": cfg.ambient,
                    "sparsity": cfg.sparsity,
                    "err_coarse": err_coarse,
                    "eps_q": eps_q,
                    "fallback": res.fallback,
                },
                err2=err_fine,
                bound=None if res.certificate is None else res.certificate.bound,
                sigma_min=None if res.certificate is None else res.certificate.sigma_min,
                u_inf=qres.u_inf,
                overloaded=qres.overloaded,
                support_recovered=bool(np.array_equal(res.support, signal.support)),
                runtime_ms=(time.perf_counter() - start) * 1e3,
            ))


def _run_cs_compressible(cfg: ExperimentConfig, records: list) -> None:
    levels = cfg.levels or 16
    spec = DecoderSpec(cfg.decoder, cfg.sparsity)
    for gi, m in enumerate(cfg.grid):
        lam = m // cfg.p
        transfer = TransferOperator.beta_block(cfg.beta, cfg.p, m)
        cond = beta_condensation(cfg.beta, cfg.p, m)
        for t in range(cfg.trials):
            seed = sub_seed(cfg.master_seed, gi, cfg.trials, t)
            rng = np.random.default_rng(seed)
            signal = gen_compressible(cfg.ambient, cfg.decay, rng)
            phi = rng.standard_normal((m, cfg.ambient))
            y = phi @ signal.x
            start = time.perf_counter()
            y_inf = float(np.max(np.abs(y)))
            delta = cfg.delta or y_inf / (levels - cfg.beta)
            alphabet = Alphabet(levels, delta)
            qres = greedy_quantize(y, transfer, alphabet)
            res = one_stage_condensed_reconstruct(
                phi, qres.q, cond, transfer, spec, u_inf=qres.u_inf
            )
            err = float(np.linalg.norm(signal.x - res.estimate))
            term_quant = math.sqrt(cfg.p) * cfg.beta ** (-float(lam)) * delta
            term_tail = best_k_term_l1(signal.x, cfg.sparsity) / math.sqrt(cfg.sparsity)
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={
                    "m": m,
                    "lam": lam,
                    "delta": delta,
                    "term_quant": term_quant,
                    "term_tail": term_tail,
                    "noise_budget": res.noise_budget,
                },
                err2=err,
                u_inf=qres.u_inf,
                overloaded=qres.overloaded,
                runtime_ms=(time.perf_counter() - start) * 1e3,
            ))


def _run_adc_decay(cfg: ExperimentConfig, records: list) -> None:
    levels = cfg.levels or _sd_levels(cfg.r)
    delta = cfg.delta or 0.5
    strict = 2 ** cfg.r - 1
    budget = levels - strict
    if budget <= 0:
        raise ConfigError(f"levels {levels} leave no stability budget at r={cfg.r}")
    sup_target = adcmod.SUP_SAFETY * budget * delta
    alphabet = Alphabet(levels, delta)
    kernel = adcmod.build_kernel(cfg.band, cfg.rolloff)
    for gi, lam in enumerate(cfg.grid):
        m = adcmod.sample_count(cfg.band, lam)
        transfer = TransferOperator.sigma_delta(cfg.r, m)
        for t in range(cfg.trials):
            seed = sub_seed(cfg.master_seed, gi, cfg.trials, t)
            rng = np.random.default_rng(seed)
            signal = adcmod.random_bandlimited(cfg.band, sup_target, rng)
            y = adcmod.sample(signal, lam)
            start = time.perf_counter()
            dense = signal.evaluate(adcmod.DENSE_FACTOR * m)

            qres = greedy_quantize(y, transfer, alphabet)
            d = adcmod.surrogate_error_stream(qres, cfg.r)
            xh = adcmod.reconstruct(y - d, kernel)
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={
                    "lam": lam,
                    "m": m,
                    "scheme": "sd",
                    "bound_asym": adcmod.sup_error_bound_asymptotic(kernel, cfg.r, qres.u_inf, m),
                    "inband": adcmod.inband_fraction(d, cfg.band),
                },
                err2=float(np.max(np.abs(dense - xh))),
                bound=adcmod.sup_error_bound(kernel, cfg.r, qres.u_inf, m),
                u_inf=qres.u_inf,
                overloaded=qres.overloaded,
                runtime_ms=(time.perf_counter() - start) * 1e3,
            ))

            mres = msq_quantize(y, alphabet)
            dm = mres.u
            xm = adcmod.reconstruct(y - dm, kernel)
            records.append(ExperimentRecord(
                trial=t,
                sub_seed=seed,
                params={
                    "lam": lam,
                    "m": m,
                    "scheme": "msq",
                    "bound_asym": adcmod.sup_error_bound_asymptotic(kernel, 0, mres.u_inf, m),
                    "inband": adcmod.inband_fraction(dm, cfg.band),
                },
                err2=float(np.max(np.abs(dense - xm))),
                bound=adcmod.sup_error_bound(kernel, 0, mres.u_inf, m),
                u_inf=mres.u_inf,
                overloaded=mres.overloaded,
            ))


_RUNNERS = {
    "frame-decay": _run_frame_decay,
    "beta-decay": _run_beta_decay,
    "sv-census": _run_sv_census,
    "cs-two-stage": _run_cs_two_stage,
    "cs-compressible": _run_cs_compressible,
    "adc-decay": _run_adc_decay,
}


def run_experiment(cfg: ExperimentConfig, out_path=None, log=False) -> list[ExperimentRecord]:
    """Run a sweep and optionally write its CSV.

    The CSV carries every config field as metadata, one header row, one row
    per record; bytes depend only on the config (including master_seed).
    """
    records: list[ExperimentRecord] = []
    _RUNNERS[cfg.kind](cfg, records)
    if log:
        total = sum(rec.runtime_ms for rec in records)
        print(f"{cfg.kind}: {len(records)} records, {total:.1f} ms quantizer+decode",
              file=sys.stderr)
    if out_path is not None:
        metadata = [("format", "experiment-v1")]
        for f in fields(cfg):
            val = getattr(cfg, f.name)
            if f.name == "grid":
                val = " ".join(str(g) for g in val)
            metadata.append((f.name, val))
        header = records[0].header()
        write_table(out_path, metadata, header, [rec.row() for rec in records])
    return records


def singular_value_census(cfg: ExperimentConfig, out_path=None) -> list[ExperimentRecord]:
    """Alias for ``run_experiment`` that insists on the census kind."""
    if cfg.kind != "sv-census":
        raise ConfigError(f"singular_value_census needs kind sv-census, got {cfg.kind!r}")
    return run_experiment(cfg, out_path)


def census_pass_rate(records_or_path) -> float:
    """Fraction of census trials whose smallest singular value met the threshold."""
    if isinstance(records_or_path, (str,)) or hasattr(records_or_path, "__fspath__"):
        meta, header, rows = read_table(records_or_path)
        if header is None or "passed" not in header:
            raise ConfigError("census table lacks a passed column")
        idx = header.index("passed")
        flags = [row[idx] == "true" for row in rows]
    else:
        flags = [bool(rec.params.get("passed")) for rec in records_or_path]
    if not flags:
        raise ConfigError("no census records")
    return sum(flags) / len(flags)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    points: tuple


def fit_slope(path, x_col: str, y_col: str, log_x: bool = True, log_y: bool = True,
              where: dict | None = None) -> FitResult:
    """Least-squares line through per-grid-point medians of a result CSV.

    Rows flagged overloaded and rows with empty cells in either column are
    dropped; ``where`` keeps only rows whose named columns hold the given
    text (for example ``{"scheme": "sd"}``).  Axes default to log10; set
    ``log_x=False`` for grids swept on a linear axis (block lengths).
    """
    meta, header, rows = read_table(path)
    if header is None:
        raise ConfigError(f"{path} has no header row")
    for col in (x_col, y_col):
        if col not in header:
            raise ConfigError(f"{path} lacks column {col!r}")
    xi, yi = header.index(x_col), header.index(y_col)
    oi = header.index("overloaded") if "overloaded" in header else None
    filters = []
    for col, want in (where or {}).items():
        if col not in header:
            raise ConfigError(f"{path} lacks filter column {col!r}")
        filters.append((header.index(col), str(want)))
    groups: dict[float, list[float]] = {}
    for row in rows:
        if oi is not None and row[oi] == "true":
            continue
        if any(row[ci] != want for ci, want in filters):
            continue
        xs, ys = row[xi], row[yi]
        if xs == "" or ys == "":
            continue
        groups.setdefault(float(xs), []).append(float(ys))
    if len(groups) < 2:
        raise ConfigError(f"need at least 2 grid points to fit, got {len(groups)}")
    pts = sorted((x, float(np.median(vals))) for x, vals in groups.items())
    xv = np.array([p[0] for p in pts])
    yv = np.array([p[1] for p in pts])
    if log_x:
        if np.any(xv <= 0):
            raise ConfigError("log x axis needs positive grid values")
        xv = np.log10(xv)
    if log_y:
        if np.any(yv <= 0):
            raise ConfigError("log y axis needs positive medians")
        yv = np.log10(yv)
    slope, intercept = np.polyfit(xv, yv, 1)
    resid = yv - (slope * xv + intercept)
    total = float(np.sum((yv - np.mean(yv)) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / total if total > 0 else 1.0
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        points=tuple((float(a), float(b)) for a, b in pts),
    )


def adc_spectrum_table(band: int, oversampling: int, seed: int, out_path=None,
                       delta: float = 0.5, rolloff: float = 0.25):
    """Error spectra of one signal under msq and first and second order shaping.

    Returns (metadata, header, rows) and optionally writes the CSV.  Columns
    are the centered mode index and the error spectrum magnitude per scheme,
    plus the signal spectrum.  All three quantizers share one alphabet sized
    for the second-order budget.
    """
    m = adcmod.sample_count(band, oversampling)
    levels = _sd_levels(2)
    budget = levels - (2 ** 2 - 1)
    sup_target = adcmod.SUP_SAFETY * budget * delta
    alphabet = Alphabet(levels, delta)
    rng = np.random.default_rng(splitmix64(seed, 0))
    signal = adcmod.random_bandlimited(band, sup_target, rng)
    y = adcmod.sample(signal, oversampling)

    streams = {"msq": msq_quantize(y, alphabet).u}
    for r in (1, 2):
        qres = greedy_quantize(y, TransferOperator.sigma_delta(r, m), alphabet)
        streams[f"sd{r}"] = adcmod.surrogate_error_stream(qres, r)

    spec_sig = adcmod.noise_spectrum(y)
    spec_msq = adcmod.noise_spectrum(streams["msq"])
    spec_sd1 = adcmod.noise_spectrum(streams["sd1"])
    spec_sd2 = adcmod.noise_spectrum(streams["sd2"])
    header = ["freq_index", "magnitude_msq", "magnitude_sd1", "magnitude_sd2",
              "signal_magnitude"]
    rows = []
    for i in range(m):
        rows.append([i - m // 2, spec_msq[i], spec_sd1[i], spec_sd2[i], spec_sig[i]])
    metadata = [
        ("format", "spectrum-v1"),
        ("band", band),
        ("oversampling", oversampling),
        ("m", m),
        ("seed", seed),
        ("delta", delta),
        ("levels", levels),
        ("rolloff", rolloff),
    ]
    if out_path is not None:
        write_table(out_path, metadata, header, rows)
    return metadata, header, rows
