"""Sweep random reversible kernels and report the tightest observed margins.

    python3 scripts/property_sweep.py --pairs 1000 --seed 0 --n-max 12
"""
import argparse
import time
from dataclasses import dataclass

import numpy as np

from revchain.conductance import cheeger_check, kernel_conductance
from revchain.dirichlet import check_gap_ordering, dirichlet_flow_form, dirichlet_operator_form, flow_gamma
from revchain.generate import random_pair, random_pair_couple
from revchain.hilbert import center
from revchain.variance import asymptotic_variance, check_variance_ordering


@dataclass
class SweepConfig:
    pairs: int = 500
    seed: int = 0
    n_min: int = 3
    n_max: int = 10


def sweep(cfg: SweepConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    worst = {
        "dirichlet_form_gap": 0.0,
        "variance_bound_slack": np.inf,
        "cheeger_margin": np.inf,
        "gap_ordering_margin": np.inf,
        "variance_ordering_margin": np.inf,
    }
    for _ in range(cfg.pairs):
        pair = random_pair(rng, cfg.n_min, cfg.n_max)
        f = rng.standard_normal(pair.n)
        worst["dirichlet_form_gap"] = max(
            worst["dirichlet_form_gap"], abs(dirichlet_operator_form(pair, f) - dirichlet_flow_form(pair, f))
        )
        rep = asymptotic_variance(pair, f)
        worst["variance_bound_slack"] = min(worst["variance_bound_slack"], rep.upper_bound - rep.value)
        worst["cheeger_margin"] = min(worst["cheeger_margin"], min(cheeger_check(pair, kernel_conductance(pair)).margins))

        p1, p2 = random_pair_couple(rng, cfg.n_min, cfg.n_max)
        cert = flow_gamma(p1, p2)
        h = center(p1.pi, rng.standard_normal(p1.n))
        worst["gap_ordering_margin"] = min(worst["gap_ordering_margin"], check_gap_ordering(p1, p2, cert).margin)
        vv = check_variance_ordering(p1, p2, h, cert)
        worst["variance_ordering_margin"] = min(worst["variance_ordering_margin"], vv.margin)
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=SweepConfig.pairs)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--n-min", type=int, default=SweepConfig.n_min)
    ap.add_argument("--n-max", type=int, default=SweepConfig.n_max)
    a = ap.parse_args()
    cfg = SweepConfig(a.pairs, a.seed, a.n_min, a.n_max)
    t0 = time.perf_counter()
    worst = sweep(cfg)
    print(f"{cfg.pairs} pairs, n in [{cfg.n_min}, {cfg.n_max}], seed {cfg.seed}: {time.perf_counter() - t0:.1f}s")
    for k, v in worst.items():
        print(f"  {k:26s} {v: .3e}")


if __name__ == "__main__":
    main()
