"""Command-line entry point: ``revchain <command> FILE ...``.

Exit codes: 0 success, 1 a checked inequality failed (or the chain is not
variance bounding where that is required), 2 bad input.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .chainspec import ChainSpec, ChainSpecError, dumps, load_chain_spec
from .conductance import cheeger_check, kernel_conductance
from .dirichlet import check_gap_ordering, flow_gamma
from .errors import NotVarianceBoundingError
from .hilbert import mean
from .simulate import (
    STATIONARY,
    empirical_asymptotic_variance,
    empirical_vs_exact,
    ergodic_average,
    sample_trajectory,
)
from .spectral import decompose, gaps
from .variance import asymptotic_variance, check_variance_ordering, is_variance_bounding

EXIT_OK, EXIT_VERDICT, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _analyze(args, spec: ChainSpec):
    pair = spec.pair
    dec = decompose(pair)
    g = gaps(dec)
    return {
        "command": "analyze",
        "n": spec.n,
        "pi": pair.pi,
        "pi_inferred": spec.pi_inferred,
        "detailed_balance_violation": pair.db_violation,
        "eigenvalues": dec.eigenvalues,
        "lambda0_max": g.lambda0_max,
        "lambda0_min": g.lambda0_min,
        "rho_right": g.rho_right,
        "rho_left": g.rho_left,
        "lambda_bar": g.lambda_bar,
        "variance_bounding": g.variance_bounding,
    }, True


def _variance(args, spec: ChainSpec):
    pair = spec.pair
    h = spec.function(args.function)
    out = {"command": "variance", "function": args.function}
    if not is_variance_bounding(pair):
        out["variance_bounding"] = False
        return out, False
    rep = asymptotic_variance(pair, h)
    out.update(
        variance_bounding=True,
        value=rep.value,
        h_variance=rep.h_variance,
        spectral_value=rep.spectral_value,
        resolvent_value=rep.resolvent_value,
        upper_bound=rep.upper_bound,
        ill_conditioned=rep.ill_conditioned,
    )
    ok = True
    if args.simulate is not None:
        if args.seed is None:
            raise InputError("--simulate requires an explicit --seed")
        try:
            v = empirical_vs_exact(pair, h, args.simulate, args.seed, args.rel_tol)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        out["simulation"] = {
            "steps": args.simulate,
            "seed": args.seed,
            "empirical": v.empirical,
            "standard_error": v.standard_error,
            "tolerance": v.tolerance,
            "passed": v.passed,
        }
        ok = v.passed
    return out, ok


def _members(s):
    return list(s.members)


def _conductance(args, spec: ChainSpec):
    if args.sampled is not None:
        if args.seed is None:
            raise InputError("--sampled requires an explicit --seed")
        rep = kernel_conductance(spec.pair, mode="sampled", samples=args.sampled, seed=args.seed)
    else:
        try:
            rep = kernel_conductance(spec.pair, mode="exact")
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return {
        "command": "conductance",
        "mode": rep.mode,
        "kappa": rep.kappa,
        "kappa_star": rep.kappa_star,
        "argmin_kappa": _members(rep.argmin_kappa),
        "argmin_kappa_star": _members(rep.argmin_kappa_star),
        "sets_examined": rep.sets_examined,
        "upper_bound_only": rep.upper_bound_only,
    }, True


def _cheeger(args, spec: ChainSpec):
    try:
        v = cheeger_check(spec.pair)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {
        "command": "cheeger",
        "rho_right": v.rho_right,
        "kappa": v.kappa,
        "kappa_star": v.kappa_star,
        "margins": {
            "kappa_star_minus_rho_right": v.gap_below_kappa_star,
            "two_kappa_minus_kappa_star": v.kappa_star_below_twice_kappa,
            "rho_right_minus_half_kappa_star_sq": v.gap_above_kappa_star_sq,
            "rho_right_minus_half_kappa_sq": v.gap_above_kappa_sq,
        },
        "passed": v.passed,
    }, v.passed


def _compare(args, spec: ChainSpec):
    other = load_chain_spec(args.other)
    p1, p2 = spec.pair, other.pair
    h = spec.function(args.function)
    try:
        cert = flow_gamma(p1, p2)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    gv = check_gap_ordering(p1, p2, cert)
    vv = check_variance_ordering(p1, p2, h, cert)
    ok = gv.passed and vv.passed
    return {
        "command": "compare",
        "function": args.function,
        "gamma": cert.gamma,
        "witness": list(cert.witness) if cert.witness else None,
        "gap_ordering": {
            "rho_right_1": gv.rho1,
            "gamma_times_rho_right_2": gv.gamma_rho2,
            "margin": gv.margin,
            "passed": gv.passed,
        },
        "variance_ordering": {
            "var_1": vv.var1,
            "var_2": vv.var2,
            "lhs": vv.lhs,
            "rhs": vv.rhs,
            "margin": vv.margin,
            "peskun": vv.peskun,
            "passed": vv.passed,
        },
        "passed": ok,
    }, ok


def _simulate(args, spec: ChainSpec):
    pair = spec.pair
    h = spec.function(args.function)
    init = STATIONARY if args.initial is None else args.initial
    try:
        traj = sample_trajectory(pair, args.steps, args.seed, init)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {
        "command": "simulate",
        "function": args.function,
        "steps": args.steps,
        "seed": args.seed,
        "initial_law": init,
        "ergodic_average": ergodic_average(traj, h),
        "stationary_mean": mean(pair.pi, h),
    }
    ok = True
    if args.steps >= 100:
        bm = empirical_asymptotic_variance(traj, h)
        out["batch_means"] = {
            "estimate": bm.estimate,
            "standard_error": bm.standard_error,
            "batch_count": bm.batch_count,
            "batch_length": bm.batch_length,
        }
    if is_variance_bounding(pair):
        out["exact_variance"] = asymptotic_variance(pair, h).value
        if args.steps >= 10_000 and init == STATIONARY:
            v = empirical_vs_exact(pair, h, args.steps, args.seed, args.rel_tol)
            out["cross_check"] = {"tolerance": v.tolerance, "passed": v.passed}
            ok = v.passed
    return out, ok


def _render_text(obj, prefix="") -> list[str]:
    lines = []
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            lines.extend(_render_text(v, key + "."))
        elif isinstance(v, np.ndarray) or isinstance(v, (list, tuple)):
            vals = v.tolist() if isinstance(v, np.ndarray) else v
            lines.append(f"{key}: " + " ".join(_scalar_text(x) for x in vals))
        else:
            lines.append(f"{key}: {_scalar_text(v)}")
    return lines


def _scalar_text(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x).lower() if x is not None else "-"
    if isinstance(x, float):
        return "inf" if math.isinf(x) else format(x, ".10g")
    return str(x)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="chain description (JSON)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="revchain", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="eigenvalues, spectral gaps, variance bounding")
    a.set_defaults(run=_analyze)

    v = sub.add_parser("variance", parents=[common], help="exact asymptotic variance of a named function")
    v.add_argument("--function", required=True)
    v.add_argument("--simulate", type=int, metavar="N", help="also estimate by batch means over N steps")
    v.add_argument("--seed", type=int)
    v.add_argument("--rel-tol", type=float, default=0.1)
    v.set_defaults(run=_variance)

    c = sub.add_parser("conductance", parents=[common], help="kernel conductance kappa and kappa*")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="enumerate all subsets (default)")
    g.add_argument("--sampled", type=int, metavar="N", help="N random subsets; upper bounds only")
    c.add_argument("--seed", type=int)
    c.set_defaults(run=_conductance)

    ch = sub.add_parser("cheeger", parents=[common], help="verify both Cheeger bounds")
    ch.set_defaults(run=_cheeger)

    cmp_ = sub.add_parser("compare", parents=[common], help="flow-ratio ordering of two kernels")
    cmp_.add_argument("other", help="second chain file (same pi)")
    cmp_.add_argument("--function", required=True)
    cmp_.set_defaults(run=_compare)

    s = sub.add_parser("simulate", parents=[common], help="seeded trajectory and batch-means estimate")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--function", required=True)
    s.add_argument("--initial", type=int, help="fixed initial state (default: draw from pi)")
    s.add_argument("--rel-tol", type=float, default=0.1)
    s.set_defaults(run=_simulate)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        spec = load_chain_spec(args.file)
        report, ok = args.run(args, spec)
    except (ChainSpecError, InputError) as exc:
        print(f"revchain: error: {exc}", file=stderr)
        return EXIT_INPUT
    except NotVarianceBoundingError as exc:
        print(f"revchain: {exc}", file=stderr)
        return EXIT_VERDICT
    if args.format == "json":
        stdout.write(dumps(report))
    else:
        stdout.write("\n".join(_render_text(report)) + "\n")
    if not ok:
        print(f"revchain: {args.command}: check failed", file=stderr)
    return EXIT_OK if ok else EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
