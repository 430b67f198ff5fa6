"""Batch command-line front-end.

One computation per invocation, reports to stdout as text or JSON.  Exit
codes: 0 success, 2 input/validation problems (with a diagnostic naming the
file and violated invariant), 3 refused or failed computations (infinite
verification targets, cost-guard hits, optimizer breakdowns).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .errors import (
    CostGuardError,
    DomainError,
    InputValidationError,
    OptimizerError,
    RefusedComputationError,
)
from .guessing import gain_from_selector
from .leakage import (
    MEASURES,
    alpha_sweep,
    definitional_cross_check,
    maximal_alpha_leakage,
    opportunistic_leakage,
    realizable_leakage,
)
from .optimize import OptimizerConfig
from .prob import Pmf
from .renyi import Order, renyi_divergence, sibson_mi
from .serialize import dumps_report, load_channel, load_joint, load_pmf
from .variational import (
    expectation_ratio_objective,
    indicator_witness,
    point_mass_witness,
    relative_entropy_gap,
    verify_guessing_characterization,
    verify_log_gain_ratio,
)

LN2 = math.log(2.0)
SEED_ENV_VAR = "ALPHALEAK_SEED"


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--nats", action="store_true", help="report nats instead of bits")
    sub.add_argument("--seed", type=int, default=None, help="optimizer RNG seed")
    sub.add_argument("--restarts", type=int, default=None, help="optimizer restarts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphaleak",
        description="Finite-alphabet information measures and leakage reports",
    )
    cmds = parser.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("divergence", help="Renyi divergence between two pmfs")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--order", required=True, help="alpha, 1, or inf")
    _add_common(p)

    p = cmds.add_parser("sibson", help="Sibson mutual information of prior and channel")
    p.add_argument("prior_file")
    p.add_argument("channel_file")
    p.add_argument("--order", required=True, help="alpha, 1, or inf")
    _add_common(p)

    p = cmds.add_parser("leakage", help="leakage measures of a joint distribution")
    p.add_argument("joint_file")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--measure", choices=MEASURES, required=True)
    p.add_argument("--check", action="store_true",
                   help="attach the definitional witness cross-check")
    p.add_argument("--m-schedule", type=_int_list, default=[1, 10, 100, 1000])
    _add_common(p)

    p = cmds.add_parser(
        "verify-guessing",
        help="approach D_inf from below via guessing-gain witnesses over channels",
    )
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--gains", type=_str_list,
                   default=["identity", "square", "indicator:0.5", "alpha-loss:2"])
    p.add_argument("--m-schedule", type=_int_list, default=[1, 10, 100, 1000])
    p.add_argument("--no-search", action="store_true",
                   help="skip the free-form channel optimization")
    _add_common(p)

    p = cmds.add_parser(
        "verify-variational",
        help="exact witnesses for the relative-entropy-gap and expectation-ratio forms",
    )
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--samples", type=int, default=200,
                   help="random witnesses for the upper-bound check")
    _add_common(p)

    p = cmds.add_parser(
        "verify-log-gain",
        help="entropy-ratio convergence of the log-gain witnesses",
    )
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--m-star-schedule", type=_int_list, default=[4, 64, 1024, 16384])
    _add_common(p)

    p = cmds.add_parser("sweep", help="leakage table over a list of orders")
    p.add_argument("joint_file")
    p.add_argument("--alphas", type=_float_list, required=True)
    p.add_argument("--measures", type=_str_list, default=list(MEASURES))
    _add_common(p)

    return parser


def _config(args) -> OptimizerConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VAR, "0"))
    kwargs = {"rng_seed": seed}
    if args.restarts is not None:
        kwargs["restarts"] = args.restarts
    return OptimizerConfig(**kwargs)


def _load_all(specs):
    """Load (loader, path) pairs, collecting every validation failure so a
    single invocation reports all broken inputs at once."""
    values, problems = [], []
    for loader, path in specs:
        try:
            values.append(loader(path))
        except InputValidationError as e:
            problems.append(str(e))
    if problems:
        raise InputValidationError("; ".join(problems))
    return values


def _convert_units(payload, nats: bool):
    """Formatting-time unit toggle: *_bits keys become *_nats keys."""
    if not nats:
        return payload
    if isinstance(payload, dict):
        out = {}
        for key, value in payload.items():
            if key == "bits" or key.endswith("_bits"):
                out[key.replace("bits", "nats")] = _convert_units(value, True)
            else:
                out[key] = _convert_units(value, True)
        return out
    if isinstance(payload, (list, tuple)):
        return [_convert_units(v, True) for v in payload]
    if isinstance(payload, float) and math.isfinite(payload):
        return payload * LN2
    return payload


def _fmt_value(v, nats: bool) -> str:
    unit = "nats" if nats else "bits"
    if isinstance(v, float) and math.isinf(v):
        return f"{'-' if v < 0 else ''}inf {unit}"
    scale = LN2 if nats else 1.0
    return f"{v * scale:.9g} {unit}"


def _emit(payload: dict, lines: list[str], args) -> None:
    if args.format == "json":
        print(dumps_report(_convert_units(payload, args.nats)))
    else:
        for line in lines:
            print(line)


def _cmd_divergence(args) -> int:
    order = Order.parse(args.order)
    p, q = _load_all([(load_pmf, args.p_file), (load_pmf, args.q_file)])
    bits = renyi_divergence(p, q, order)
    order_repr = "inf" if order.is_infinite else order.alpha
    payload = {"measure": "renyi-divergence", "order": order_repr, "bits": bits}
    _emit(payload, [f"D_{order_repr}(p || q) = {_fmt_value(bits, args.nats)}"], args)
    return 0


def _cmd_sibson(args) -> int:
    order = Order.parse(args.order)
    prior, ch = _load_all([(load_pmf, args.prior_file), (load_channel, args.channel_file)])
    bits = sibson_mi(prior, ch, order)
    order_repr = "inf" if order.is_infinite else order.alpha
    payload = {"measure": "sibson", "order": order_repr, "bits": bits}
    _emit(payload, [f"I_{order_repr}(X; Y) = {_fmt_value(bits, args.nats)}"], args)
    return 0


def _cmd_leakage(args) -> int:
    (joint,) = _load_all([(load_joint, args.joint_file)])
    if args.alpha <= 1.0:
        if args.measure in ("opportunistic", "realizable") and args.alpha == 1.0:
            payload = {
                "measure": args.measure,
                "alpha": 1.0,
                "bits": math.inf,
                "closed_form": "diverges as alpha -> 1+ like alpha/(alpha-1)",
                "check": None,
            }
            _emit(payload, [f"{args.measure} leakage diverges as alpha -> 1+ "
                            f"like alpha/(alpha-1)"], args)
            return 0
        raise InputValidationError(f"leakage orders live in (1, inf); got {args.alpha}")
    cfg = _config(args)
    if args.measure == "maximal":
        report = maximal_alpha_leakage(joint, args.alpha, cfg)
    elif args.measure == "opportunistic":
        report = opportunistic_leakage(joint, args.alpha)
    else:
        report = realizable_leakage(joint, args.alpha)
    payload = report.as_dict()
    lines = [f"{args.measure} leakage (alpha={args.alpha:g}) = "
             f"{_fmt_value(report.bits, args.nats)}"]
    if args.check and args.measure in ("opportunistic", "realizable"):
        check = definitional_cross_check(joint, args.alpha, args.measure,
                                         args.m_schedule, cfg)
        payload["check"] = check.as_dict()
        lines.append(f"  definitional witness: {_fmt_value(check.achieved_bits, args.nats)}"
                     f" (gap {_fmt_value(check.gap_bits, args.nats)})")
    _emit(payload, lines, args)
    return 0


def _cmd_verify_guessing(args) -> int:
    p, q = _load_all([(load_pmf, args.p_file), (load_pmf, args.q_file)])
    gains = [gain_from_selector(s) for s in args.gains]
    report = verify_guessing_characterization(
        p, q, gains,
        m_schedule=args.m_schedule,
        cfg=_config(args),
        include_channel_search=not args.no_search,
    )
    lines = [f"target D_inf = {_fmt_value(report.target_bits, args.nats)}"]
    for w in report.witnesses:
        lines.append(f"  {w.gain:>16} {w.kind:>9} m={w.m:<5d} "
                     f"achieved {_fmt_value(w.achieved_bits, args.nats)} "
                     f"(gap {_fmt_value(w.gap_bits, args.nats)})")
    lines.append(f"gain-agnosticism spread = "
                 f"{_fmt_value(report.agnosticism_spread_bits, args.nats)}")
    _emit(report.as_dict(), lines, args)
    return 0


def _cmd_verify_variational(args) -> int:
    p, q = _load_all([(load_pmf, args.p_file), (load_pmf, args.q_file)])
    target = renyi_divergence(p, q, Order.infinity())
    if math.isinf(target):
        raise RefusedComputationError(
            "target divergence is infinite; witness verification is vacuous"
        )
    gap_bits = relative_entropy_gap(p, q, point_mass_witness(p, q))
    ratio_bits = expectation_ratio_objective(p, q, indicator_witness(p, q))
    rng = np.random.default_rng(_config(args).rng_seed)
    best_random = -math.inf
    n = len(p.alphabet)
    idx = p.support_indices()
    for _ in range(max(0, args.samples)):
        r_mass = np.zeros(n)
        r_mass[idx] = rng.dirichlet(np.ones(idx.size))
        best_random = max(best_random, relative_entropy_gap(p, q, Pmf(p.alphabet, r_mass)))
        f = rng.uniform(0.0, 1.0, size=n)
        best_random = max(best_random, expectation_ratio_objective(p, q, f))
    payload = {
        "target_bits": target,
        "witnesses": {
            "relative_entropy_gap_bits": gap_bits,
            "expectation_ratio_bits": ratio_bits,
            "random_best_bits": best_random,
            "random_samples": args.samples,
        },
    }
    lines = [
        f"target D_inf = {_fmt_value(target, args.nats)}",
        f"  point-mass witness     {_fmt_value(gap_bits, args.nats)}",
        f"  indicator witness      {_fmt_value(ratio_bits, args.nats)}",
        f"  best of {args.samples} random    {_fmt_value(best_random, args.nats)}",
    ]
    _emit(payload, lines, args)
    return 0


def _cmd_verify_log_gain(args) -> int:
    p, q = _load_all([(load_pmf, args.p_file), (load_pmf, args.q_file)])
    report = verify_log_gain_ratio(p, q, args.m_star_schedule)
    lines = [f"target ratio 2^D_inf = {report.target_ratio:.9g}"]
    for e in report.entries:
        lines.append(f"  m*={e.m_star:<8d} entropy ratio {e.ratio:.9g} "
                     f"(rel err {e.rel_error:.3e})")
    _emit(report.as_dict(), lines, args)
    return 0


def _cmd_sweep(args) -> int:
    (joint,) = _load_all([(load_joint, args.joint_file)])
    for a in args.alphas:
        if not a > 1.0:
            raise InputValidationError(f"sweep orders live in (1, inf); got {a}")
    reports = alpha_sweep(joint, args.alphas, args.measures, _config(args))
    payload = {"reports": [r.as_dict() for r in reports]}
    lines = [f"{r.measure:>14} alpha={r.alpha:<8g} {_fmt_value(r.bits, args.nats)}"
             for r in reports]
    _emit(payload, lines, args)
    return 0


_HANDLERS = {
    "divergence": _cmd_divergence,
    "sibson": _cmd_sibson,
    "leakage": _cmd_leakage,
    "verify-guessing": _cmd_verify_guessing,
    "verify-variational": _cmd_verify_variational,
    "verify-log-gain": _cmd_verify_log_gain,
    "sweep": _cmd_sweep,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (InputValidationError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (RefusedComputationError, CostGuardError, OptimizerError) as e:
        print(f"refused: {e}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
