"""Specialize Dirichlet-type characters and report where a zero at t0 = 1 appears.

    python scripts/dirichlet_zeros.py --p 3 --m 2 --beta-max 4
"""
import argparse
import itertools
import sys
from collections import Counter

from specpoly.analysis import DirichletSpec, dirichlet_specialize
from specpoly.field import FqElem, field_create
from specpoly.polyring import degree_in_t0, multiplicity_at_t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--e", type=int, default=1)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--beta-max", type=int, default=4)
    args = ap.parse_args(argv)
    ctx = field_create(args.p, args.e)
    ext = field_create(args.p, args.e * args.m)
    q = ctx.q

    tally = Counter()
    for code in range(1, ext.q):
        lam = FqElem.from_code(code, ext)
        for k, beta in itertools.product(range(1, args.beta_max + 1), range(args.beta_max + 1)):
            res = dirichlet_specialize(DirichletSpec((lam,), (k,), beta), ctx, ext)
            predicted = (k + beta) % (q - 1) == 0
            mult = multiplicity_at_t0(res.poly, 1) if res.poly.terms else None
            tally[(predicted, mult)] += 1
            print(f"lambda={code:<3} k={k} beta={beta} degree={degree_in_t0(res.poly)} "
                  f"phi={res.phi} zero_at_1={mult}")
    for (predicted, mult), n in sorted(tally.items(), key=str):
        print(f"predicted={predicted} multiplicity={mult}: {n}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
