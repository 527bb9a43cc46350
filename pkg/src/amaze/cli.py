"""Command-line entry point (``amaze`` / ``python -m amaze``).

Every failure prints exactly one JSON line on stderr and exits nonzero
(2 for usage errors, 1 otherwise).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import pipeline
from .config import ConfigError, PipelineConfig, load_config
from .mask import MaskMatrix, apply_mask
from .render import render_pgm
from .rng import SeededRng
from .schedule import ScheduleConfig, scale_plan
from .tensor import feature_to_tokens
from .tensorfile import read_tensor_file, write_tensor_file
from .theory import BoundParams, hoeffding_bound, lemma1_deviation, monte_carlo_violation, statistical_slack

log = logging.getLogger("amaze")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True), flush=True)


def _common(p: argparse.ArgumentParser, *, needs_input: bool = True) -> None:
    p.add_argument("--config", help="JSON pipeline configuration")
    p.add_argument("--input", required=needs_input, help="input tensor file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, help="override params_seed and mask_seed")
    p.add_argument("--epoch", type=int, help="override the configured epoch")
    p.add_argument("--method", choices=["threshold", "rfgam"], help="override the configured method")


def _config(args) -> PipelineConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = PipelineConfig(method=args.method or "threshold")
    if args.method:
        cfg = cfg.with_method(args.method)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"config: field seed: must be >= 0, got {args.seed}")
        cfg = cfg.with_seed(args.seed)
    if args.epoch is not None:
        cfg = cfg.with_epoch(args.epoch)
    return cfg


def _features(args) -> np.ndarray:
    return pipeline.select_features(read_tensor_file(args.input))


def _write(args, filename: str, tensors: dict) -> str:
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, filename)
    write_tensor_file(path, tensors)
    log.info("wrote %s", path)
    return path


def cmd_encode(args) -> int:
    cfg = _config(args)
    f = _features(args)
    params = pipeline.resolve_params(cfg, f.shape[1])
    from .adapter import encode_tokens

    _write(args, "tokens.amzt", {"tokens": encode_tokens(feature_to_tokens(f), params)})
    return 0


def cmd_prior(args) -> int:
    cfg = _config(args)
    _, prior, _, _ = pipeline.compute_mask(_features(args), cfg)
    _write(args, "prior.amzt", {"prior": prior.astype(np.float32)})
    return 0


def cmd_mask(args) -> int:
    cfg = _config(args)
    f = _features(args)
    tokens, prior, mask, rf = pipeline.compute_mask(f, cfg)
    result = pipeline.PipelineResult(tokens, prior, mask, f, rf)
    tensors = {"mask": mask.values.astype(np.float32)}
    if rf is not None:
        tensors["intensity"] = rf.field.grid.astype(np.float32)
    _write(args, "mask.amzt", tensors)
    for rec in result.log_records(cfg.method):
        _emit(rec)
    return 0


def cmd_apply(args) -> int:
    f = _features(args)
    stored = read_tensor_file(args.mask)
    if "mask" not in stored:
        raise ValueError(f"apply: {args.mask} has no 'mask' entry")
    values = stored["mask"].astype(np.float64)
    binary = bool(np.all((values == 0.0) | (values == 1.0)))
    _write(args, "masked.amzt", {"masked_features": apply_mask(f, MaskMatrix(values, binary=binary))})
    return 0


def cmd_render(args) -> int:
    tensors = read_tensor_file(args.input)
    entry = args.entry or ("intensity" if "intensity" in tensors else "mask")
    if entry not in tensors:
        raise ValueError(f"render: {args.input} has no {entry!r} entry")
    arr = tensors[entry]
    if not 0 <= args.batch < arr.shape[0]:
        raise ValueError(f"render: batch {args.batch} out of range for {arr.shape[0]} rows")
    row = arr[args.batch]
    if row.ndim == 1:
        if args.shape:
            h, w = (int(s) for s in args.shape.split(","))
        else:
            h = w = int(round(row.size**0.5))
        if h * w != row.size:
            raise ValueError(f"render: cannot lay {row.size} values on a {h}x{w} grid; pass --shape H,W")
        row = row.reshape(h, w)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{entry}_b{args.batch}.pgm")
    render_pgm(row, path)
    log.info("wrote %s", path)
    return 0


def cmd_schedule(args) -> int:
    base = load_config(args.config) if args.config else PipelineConfig(method="threshold", E_total=args.e_total or 10)
    total = args.e_total or base.E_total
    sched = ScheduleConfig(E_total=total, k0=base.k0, scale_rhos=base.scale_rhos, warmup_fraction=base.warmup_fraction)
    epochs = [args.epoch] if args.epoch is not None else range(total + 1)
    for e in epochs:
        plan = scale_plan(sched, e)
        _emit({"epoch": e, "scales": [{"scale": i, "rho": r, "k": k} for i, (r, k) in enumerate(plan)]})
    return 0


def cmd_verify_bound(args) -> int:
    root = SeededRng(args.seed)
    ok = True
    cell = 0
    for n in args.n:
        for eps in args.eps:
            freq = monte_carlo_violation(n, eps, args.trials, root.spawn(cell), args.distribution)
            bound = hoeffding_bound(n, eps)
            slack = statistical_slack(bound, args.trials)
            passed = freq <= bound + slack
            ok &= passed
            _emit({"n": n, "eps": eps, "trials": args.trials, "frequency": freq,
                   "bound": bound, "slack": slack, "pass": passed})
            cell += 1
    if args.tau is not None:
        bp = BoundParams(tau=args.tau, beta=args.beta, L=args.lipschitz, delta_conf=args.delta_conf, N_batch=args.n_batch)
        _emit({"lemma1_deviation": lemma1_deviation(bp), "tau": bp.tau, "beta": bp.beta,
               "L": bp.L, "delta_conf": bp.delta_conf, "N_batch": bp.N_batch})
    return 0 if ok else 1


def cmd_pipeline(args) -> int:
    cfg = _config(args)
    pipeline.run_pipeline(cfg, args.input, args.out, log=print)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amaze", description="Adaptive feature masking engine")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="features -> adapter tokens")
    _common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("prior", help="features -> importance prior")
    _common(p)
    p.set_defaults(func=cmd_prior)

    p = sub.add_parser("mask", help="features -> mask (and intensity for rfgam)")
    _common(p)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("apply", help="multiply features by a stored mask")
    _common(p)
    p.add_argument("--mask", required=True, help="tensor file holding a 'mask' entry")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("render", help="write a tensor entry as a PGM heatmap")
    _common(p)
    p.add_argument("--entry", help="entry name (default: intensity, else mask)")
    p.add_argument("--batch", type=int, default=0)
    p.add_argument("--shape", help="H,W for flat B x N entries")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("schedule", help="print the per-scale (rho, k) plan")
    _common(p, needs_input=False)
    p.add_argument("--e-total", type=int, help="total epochs (overrides config)")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("verify-bound", help="Monte-Carlo check of the Hoeffding bound")
    p.add_argument("--n", type=int, nargs="+", default=[20, 100, 500])
    p.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3])
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--distribution", choices=["bernoulli", "uniform"], default="bernoulli")
    p.add_argument("--tau", type=float, help="also print the deviation bound for these inputs")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--lipschitz", type=float, default=0.0)
    p.add_argument("--delta-conf", type=float, default=0.05)
    p.add_argument("--n-batch", type=int, default=1)
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("pipeline", help="prior, mask and masked features in one file")
    _common(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def _setup_logging() -> None:
    level = os.environ.get("AMAZE_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        level = "error"
    logging.basicConfig(level=levels[level], stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _fail(kind: str, message: str) -> None:
    line = " ".join(str(message).split())
    print(json.dumps({"error": kind, "message": line}), file=sys.stderr, flush=True)


def main(argv=None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        _fail("usage", str(err))
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as err:
        _fail(type(err).__name__, str(err))
        return 1


if __name__ == "__main__":
    sys.exit(main())
