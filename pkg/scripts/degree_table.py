"""Tabulate the one-variable degree: computed z(beta) degree next to the digit formula.

    python scripts/degree_table.py --p 3 --e 1 --beta-max 60
"""
import argparse
import sys

from specpoly.analysis import sheats_degree
from specpoly.digits import length_l
from specpoly.field import field_create
from specpoly.polyring import DEFAULT_BUDGET, degree_in_t0
from specpoly.special import phi_degree, z_direct


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--e", type=int, default=1)
    ap.add_argument("--beta-max", type=int, default=60)
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    args = ap.parse_args(argv)
    ctx = field_create(args.p, args.e)
    q = ctx.q

    print(f"{'beta':>6} {'l(beta)':>8} {'formula':>8} {'computed':>9}")
    mismatches = 0
    for beta in range(1, args.beta_max + 1):
        want = sheats_degree(beta, ctx)
        if q ** (phi_degree((beta,), ctx) + 2) > args.budget:
            got = "-"
        else:
            got = degree_in_t0(z_direct((beta,), ctx, budget=args.budget).poly)
            mismatches += got != want
        print(f"{beta:>6} {length_l(beta, q):>8} {want:>8} {got:>9}")
    print(f"q={q}: {mismatches} mismatches", file=sys.stderr)
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
