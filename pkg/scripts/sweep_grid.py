"""Sweep exponent tuples over several fields and write one CSV row per tuple.

    python scripts/sweep_grid.py --q 2,3,4,5 --s-max 3 --beta-max 5 -o grid.csv
"""
import argparse
import sys
import time

from specpoly.analysis import beta_grid, grid_row, rows_to_csv
from specpoly.field import field_create
from specpoly.polyring import DEFAULT_BUDGET


def field_from_q(q):
    for p in range(2, q + 1):
        e, n = 0, q
        while n % p == 0:
            n //= p
            e += 1
        if e and n == 1:
            return field_create(p, e)
    raise SystemExit(f"{q} is not a prime power")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", default="2,3,4,5")
    ap.add_argument("--s-max", type=int, default=3)
    ap.add_argument("--beta-max", type=int, default=5)
    ap.add_argument("--method", default="via_ones", choices=["direct", "via_ones"])
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args(argv)

    rows = []
    for q in (int(x) for x in args.q.split(",")):
        ctx = field_from_q(q)
        start = time.time()
        batch = [grid_row(b, ctx, args.method, args.budget) for b in beta_grid(args.s_max, args.beta_max)]
        bad = [r for r in batch if r.status not in ("ok", "over-budget")]
        print(f"q={q}: {len(batch)} tuples, {len(bad)} problems, {time.time() - start:.1f}s", file=sys.stderr)
        rows.extend(batch)
    text = rows_to_csv(rows)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 1 if any(r.status not in ("ok", "over-budget") for r in rows) else 0


if __name__ == "__main__":
    sys.exit(main())
