"""Search diagonal weights certifying the Goodwin reaction-diffusion system in weighted L1."""

import argparse
import math

from syncert.certify import search_weight, sup_measure
from syncert.measures import NormSpec
from syncert.models import DiffusionSpec, goodwin, sample_domain


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d1", type=float, default=0.3)
    ap.add_argument("--z-max", type=float, default=50.0)
    ap.add_argument("--k", type=int, default=7)
    ap.add_argument("--budget", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    model = goodwin()
    D = DiffusionSpec((args.d1, 0.0, 0.0))
    samples = sample_domain(model, "grid", k=args.k, box=[(0, 800), (0, 800), (0, args.z_max)])
    lam = math.pi ** 2
    for q in [(1, 1, 1), (1, 12, 11)]:
        c = sup_measure(model, NormSpec(1, q), lam, D, samples).c
        print(f"Q = diag{q}: c = {c:.6g}")
    q, cert = search_weight(model, 1, lam, D, samples, budget=args.budget, seed=args.seed)
    print("searched Q = diag(" + ", ".join(f"{v:.4g}" for v in q) + f"): c = {cert.c:.6g} ({cert.verdict})")


if __name__ == "__main__":
    main()
