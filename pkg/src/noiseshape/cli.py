"""Command line interface.

Exit codes: 0 success, 2 invalid parameters or configuration, 3 numerical
failure (rank deficiency, overload where a certificate was required,
non-convergence).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

import numpy as np

from .adc import sample_count
from .compressive import DecoderSpec, gen_compressible, gen_sparse, one_stage_condensed_reconstruct, two_stage_reconstruct
from .csvio import read_frame_csv, read_table, write_dual_csv, write_frame_csv, write_table
from .duals import beta_condensation, canonical_dual_frame, hinv_dual, reconstruct, v_dual
from .errors import ConfigError, NumericalError
from .frames import generate_frame
from .harness import (
    EXPERIMENT_KINDS,
    ExperimentConfig,
    adc_spectrum_table,
    default_config,
    fit_slope,
    run_experiment,
    splitmix64,
)
from .noise_shaping import Alphabet, TransferOperator, greedy_quantize, msq_quantize

__all__ = ["main"]


def _build_transfer(args, m: int) -> TransferOperator:
    if args.transfer == "sd":
        return TransferOperator.sigma_delta(args.r, m)
    if args.transfer == "beta":
        return TransferOperator.beta_block(args.beta, args.p, m)
    if args.transfer == "msq":
        raise ConfigError("msq has no transfer; quantize handles it directly")
    raise ConfigError(f"unknown transfer {args.transfer!r}")


def _cmd_frame_gen(args) -> int:
    params = {}
    if args.r is not None:
        params["r"] = args.r
    frame = generate_frame(args.kind, args.m, args.k, seed=args.seed, **params)
    write_frame_csv(args.out, frame)
    print(f"wrote {args.kind} frame {frame.m}x{frame.k} to {args.out}")
    return 0


def _cmd_quantize(args) -> int:
    frame = read_frame_csv(args.frame)
    if args.x is not None:
        x = np.array([float(tok) for tok in args.x.split(",")])
    else:
        rng = np.random.default_rng(splitmix64(args.signal_seed, 0))
        x = rng.standard_normal(frame.k)
        x /= np.linalg.norm(x)
    y = frame.analyze(x)
    alphabet = Alphabet(args.levels, args.delta)
    if args.transfer == "msq":
        qres = msq_quantize(y, alphabet)
        tag = "msq"
    else:
        transfer = _build_transfer(args, frame.m)
        qres = greedy_quantize(y, transfer, alphabet)
        tag = transfer.tag
    metadata = [
        ("format", "quant-v1"),
        ("frame", args.frame),
        ("transfer", args.transfer),
        ("tag", tag),
        ("levels", args.levels),
        ("delta", args.delta),
        ("x", " ".join(f"{v:.17g}" for v in x)),
        ("u_inf", qres.u_inf),
        ("overloaded", qres.overloaded),
    ]
    rows = [[n, y[n], qres.q[n], qres.u[n]] for n in range(frame.m)]
    write_table(args.out, metadata, ["index", "y", "q", "u"], rows)
    print(f"quantized {frame.m} coefficients, max|u|={qres.u_inf:.6g}, "
          f"overloaded={'true' if qres.overloaded else 'false'}")
    return 0


def _cmd_reconstruct(args) -> int:
    frame = read_frame_csv(args.frame)
    meta, header, rows = read_table(args.quant)
    if header is None or "q" not in header:
        raise ConfigError(f"{args.quant} is not a quantization table")
    qcol = header.index("q")
    q = np.array([float(row[qcol]) for row in rows])
    if args.dual == "canonical":
        dual = canonical_dual_frame(frame)
    elif args.dual == "hinv":
        dual = hinv_dual(frame, _build_transfer(args, frame.m))
    elif args.dual == "vdual":
        dual = v_dual(frame, beta_condensation(args.beta, args.p, frame.m))
    else:
        raise ConfigError(f"unknown dual {args.dual!r}")
    xh = reconstruct(dual, q)
    metadata = [
        ("format", "recon-v1"),
        ("frame", args.frame),
        ("quant", args.quant),
        ("dual", dual.kind),
    ]
    err = None
    if "x" in meta:
        x = np.array([float(tok) for tok in meta["x"].split()])
        if x.shape == xh.shape:
            err = float(np.linalg.norm(x - xh))
            metadata.append(("err2", err))
    write_table(args.out, metadata, ["estimate"], [[v] for v in xh])
    line = f"reconstructed k={xh.shape[0]} via {dual.kind}"
    if err is not None:
        line += f", err2={err:.17g}"
    print(line)
    if args.dual_out:
        write_dual_csv(args.dual_out, dual)
        print(f"wrote dual to {args.dual_out}")
    return 0


def _config_from_args(args) -> ExperimentConfig:
    overrides = {}
    if args.config is not None:
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ConfigError(f"{args.config} must hold a JSON object")
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kind = loaded.pop("kind", args.kind)
        if kind != args.kind:
            raise ConfigError(f"config kind {kind!r} does not match command kind {args.kind!r}")
        if "grid" in loaded:
            loaded["grid"] = tuple(loaded["grid"])
        overrides.update(loaded)
    for name in ("grid", "trials", "master_seed", "frame_kind", "k", "r", "levels",
                 "delta", "beta", "p", "alpha", "ambient", "sparsity", "min_mag",
                 "decoder", "band", "rolloff", "delta_floor", "decay"):
        val = getattr(args, name, None)
        if val is not None:
            overrides[name] = val
    if "grid" in overrides and not isinstance(overrides["grid"], tuple):
        overrides["grid"] = tuple(int(tok) for tok in str(overrides["grid"]).split(","))
    seed = overrides.pop("master_seed", 0)
    return default_config(args.kind, master_seed=seed, **overrides)


def _cmd_experiment(args) -> int:
    cfg = _config_from_args(args)
    records = run_experiment(cfg, out_path=args.out, log=args.log)
    print(f"{cfg.kind}: wrote {len(records)} records to {args.out}")
    return 0


def _cmd_adc_sim(args) -> int:
    adc_spectrum_table(args.band, args.oversampling, args.seed, out_path=args.out,
                       delta=args.delta, rolloff=args.rolloff)
    m = sample_count(args.band, args.oversampling)
    print(f"wrote error spectra for m={m} samples to {args.out}")
    return 0


def _cmd_cs_run(args) -> int:
    rng = np.random.default_rng(splitmix64(args.seed, 0))
    spec = DecoderSpec(args.decoder, args.sparsity)
    if args.mode == "two-stage":
        signal = gen_sparse(args.ambient, args.sparsity, args.min_mag, rng)
        phi = rng.standard_normal((args.m, args.ambient))
        y = phi @ signal.x
        strict = 2 ** args.r - 1
        delta = args.delta or float(np.max(np.abs(y))) / (args.levels - strict)
        transfer = TransferOperator.sigma_delta(args.r, args.m)
        qres = greedy_quantize(y, transfer, Alphabet(args.levels, delta))
        res = two_stage_reconstruct(phi, qres.q, transfer, spec,
                                    u_inf=qres.u_inf, overloaded=qres.overloaded)
        recovered = bool(np.array_equal(res.support, signal.support))
        err_fine = float(np.linalg.norm(signal.x - res.estimate))
        err_coarse = float(np.linalg.norm(signal.x - res.coarse))
        print(f"support_recovered={'true' if recovered else 'false'} "
              f"err_coarse={err_coarse:.17g} err_fine={err_fine:.17g}")
        if res.certificate is not None:
            print(f"certificate_bound={res.certificate.bound:.17g}")
        if args.out:
            write_table(args.out,
                        [("format", "cs-run-v1"), ("mode", args.mode), ("seed", args.seed)],
                        ["support_recovered", "err_coarse", "err_fine", "bound"],
                        [[recovered, err_coarse, err_fine,
                          None if res.certificate is None else res.certificate.bound]])
    else:
        if args.m % args.p != 0:
            raise ConfigError(f"m={args.m} must be a multiple of p={args.p}")
        signal = gen_compressible(args.ambient, args.decay, rng)
        phi = rng.standard_normal((args.m, args.ambient))
        y = phi @ signal.x
        delta = args.delta or float(np.max(np.abs(y))) / (args.levels - args.beta)
        transfer = TransferOperator.beta_block(args.beta, args.p, args.m)
        cond = beta_condensation(args.beta, args.p, args.m)
        qres = greedy_quantize(y, transfer, Alphabet(args.levels, delta))
        res = one_stage_condensed_reconstruct(phi, qres.q, cond, transfer, spec,
                                              u_inf=qres.u_inf)
        err = float(np.linalg.norm(signal.x - res.estimate))
        print(f"err2={err:.17g} noise_budget={res.noise_budget:.17g}")
        if args.out:
            write_table(args.out,
                        [("format", "cs-run-v1"), ("mode", args.mode), ("seed", args.seed)],
                        ["err2", "noise_budget"],
                        [[err, res.noise_budget]])
    return 0


def _cmd_fit(args) -> int:
    where = {}
    for clause in args.where or []:
        if "=" not in clause:
            raise ConfigError(f"--where needs column=value, got {clause!r}")
        col, val = clause.split("=", 1)
        where[col] = val
    res = fit_slope(args.infile, args.x, args.y, log_x=not args.linear_x, where=where)
    print(f"slope={res.slope:.17g} intercept={res.intercept:.17g} r2={res.r_squared:.17g}")
    return 0


def _add_experiment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file with ExperimentConfig fields")
    sub.add_argument("--grid", help="comma separated grid values")
    sub.add_argument("--trials", type=int)
    sub.add_argument("--master-seed", dest="master_seed", type=int)
    sub.add_argument("--frame-kind", dest="frame_kind")
    sub.add_argument("--k", type=int)
    sub.add_argument("--r", type=int)
    sub.add_argument("--levels", type=int)
    sub.add_argument("--delta", type=float)
    sub.add_argument("--beta", type=float)
    sub.add_argument("--p", type=int)
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--ambient", type=int)
    sub.add_argument("--sparsity", type=int)
    sub.add_argument("--min-mag", dest="min_mag", type=float)
    sub.add_argument("--decoder", choices=["omp", "iht"])
    sub.add_argument("--band", type=int)
    sub.add_argument("--rolloff", type=float)
    sub.add_argument("--delta-floor", dest="delta_floor", type=float)
    sub.add_argument("--decay", type=float)
    sub.add_argument("--log", action="store_true", help="log runtime summary to stderr")
    sub.add_argument("--out", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noiseshape",
                                     description="Noise-shaping quantization toolkit")
    top = parser.add_subparsers(dest="command", required=True)

    p_frame = top.add_parser("frame", help="frame utilities")
    frame_sub = p_frame.add_subparsers(dest="frame_command", required=True)
    p_gen = frame_sub.add_parser("gen", help="generate a frame CSV")
    p_gen.add_argument("--kind", required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--k", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--r", type=int, default=None, help="order for sobolev-selfdual")
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_frame_gen)

    p_quant = top.add_parser("quantize", help="quantize frame coefficients")
    p_quant.add_argument("--frame", required=True)
    p_quant.add_argument("--transfer", choices=["sd", "beta", "msq"], default="sd")
    p_quant.add_argument("--r", type=int, default=1)
    p_quant.add_argument("--beta", type=float, default=1.5)
    p_quant.add_argument("--p", type=int, default=1)
    p_quant.add_argument("--levels", type=int, required=True)
    p_quant.add_argument("--delta", type=float, required=True)
    p_quant.add_argument("--x", help="comma separated signal, length k")
    p_quant.add_argument("--signal-seed", dest="signal_seed", type=int, default=0)
    p_quant.add_argument("--out", required=True)
    p_quant.set_defaults(func=_cmd_quantize)

    p_rec = top.add_parser("reconstruct", help="reconstruct from a quantization table")
    p_rec.add_argument("--frame", required=True)
    p_rec.add_argument("--quant", required=True)
    p_rec.add_argument("--dual", choices=["canonical", "hinv", "vdual"], default="hinv")
    p_rec.add_argument("--transfer", choices=["sd", "beta"], default="sd")
    p_rec.add_argument("--r", type=int, default=1)
    p_rec.add_argument("--beta", type=float, default=1.5)
    p_rec.add_argument("--p", type=int, default=1)
    p_rec.add_argument("--dual-out", dest="dual_out", help="also write the dual CSV")
    p_rec.add_argument("--out", required=True)
    p_rec.set_defaults(func=_cmd_reconstruct)

    p_exp = top.add_parser("experiment", help="run a reproducible sweep")
    p_exp.add_argument("kind", choices=list(EXPERIMENT_KINDS))
    _add_experiment_flags(p_exp)
    p_exp.set_defaults(func=_cmd_experiment)

    p_adc = top.add_parser("adc", help="oversampled quantization testbed")
    adc_sub = p_adc.add_subparsers(dest="adc_command", required=True)
    p_sim = adc_sub.add_parser("sim", help="error spectra for one signal")
    p_sim.add_argument("--band", type=int, default=2)
    p_sim.add_argument("--oversampling", type=int, default=32)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--delta", type=float, default=0.5)
    p_sim.add_argument("--rolloff", type=float, default=0.25)
    p_sim.add_argument("--out", required=True)
    p_sim.set_defaults(func=_cmd_adc_sim)

    p_cs = top.add_parser("cs", help="compressed sensing pipelines")
    cs_sub = p_cs.add_subparsers(dest="cs_command", required=True)
    p_run = cs_sub.add_parser("run", help="run one instance")
    p_run.add_argument("--mode", choices=["two-stage", "condensed"], required=True)
    p_run.add_argument("--ambient", type=int, default=256)
    p_run.add_argument("--m", type=int, default=160)
    p_run.add_argument("--sparsity", type=int, default=5)
    p_run.add_argument("--min-mag", dest="min_mag", type=float, default=0.3)
    p_run.add_argument("--decay", type=float, default=2.0)
    p_run.add_argument("--r", type=int, default=2)
    p_run.add_argument("--beta", type=float, default=1.5)
    p_run.add_argument("--p", type=int, default=32)
    p_run.add_argument("--levels", type=int, default=61)
    p_run.add_argument("--delta", type=float, default=0.0)
    p_run.add_argument("--decoder", choices=["omp", "iht"], default="omp")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out")
    p_run.set_defaults(func=_cmd_cs_run)

    p_fit = top.add_parser("fit", help="slope of per-grid-point medians")
    p_fit.add_argument("--in", dest="infile", required=True)
    p_fit.add_argument("--x", required=True)
    p_fit.add_argument("--y", required=True)
    p_fit.add_argument("--linear-x", dest="linear_x", action="store_true",
                       help="keep the x axis linear (block length sweeps)")
    p_fit.add_argument("--where", action="append",
                       help="column=value row filter, repeatable")
    p_fit.set_defaults(func=_cmd_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
