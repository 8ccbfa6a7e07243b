"""Convergence of the discretized diffusion shift to pi^2 and its effect on the
biochemical certificate.

The mesh with N interior points and spacing 1/(N+1) gives the Neumann shift
4 (N+1)^2 sin^2(pi / 2N). Its distance to pi^2 shrinks like 1/N. The variant
4 (N+1)^2 sin^2(pi / 2(N+1)) (first Dirichlet eigenvalue) converges like 1/N^2
and is printed for comparison.
"""

import argparse
import math

from syncert.certify import sup_measure
from syncert.measures import NormSpec
from syncert.models import DiffusionSpec, biochemical, sample_domain


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80, 160])
    args = ap.parse_args()

    model = biochemical()
    norm = NormSpec(1, (1, 2))
    D = DiffusionSpec((0.001, 0.1))
    samples = sample_domain(model, "grid", k=11, box=[(0, 20), (0, 0.1)])
    c_inf = sup_measure(model, norm, math.pi ** 2, D, samples).c
    print(f"c_inf = {c_inf:.10f}")
    print(f"{'N':>5} {'shift':>12} {'|c_N - c_inf|':>14} {'N * gap':>9} {'alt gap':>12} {'N^2 * alt':>10}")
    for N in args.sizes:
        shift = 4 * (N + 1) ** 2 * math.sin(math.pi / (2 * N)) ** 2
        alt = 4 * (N + 1) ** 2 * math.sin(math.pi / (2 * (N + 1))) ** 2
        gap = abs(sup_measure(model, norm, shift, D, samples).c - c_inf)
        gap_alt = abs(sup_measure(model, norm, alt, D, samples).c - c_inf)
        print(f"{N:>5} {shift:>12.6f} {gap:>14.6e} {N * gap:>9.4f} {gap_alt:>12.4e} {N * N * gap_alt:>10.4f}")


if __name__ == "__main__":
    main()
