"""Slow, independent reference implementations used only by the tests."""
import itertools
from functools import lru_cache

from specpoly.polyring import MultiPoly, chi_eval, monic_enumerate


def naive_z(betas, ctx, d_max):
    """Sum of t0^d * prod chi_i(a)^beta_i over A+(d), using MultiPoly arithmetic only."""
    n = len(betas) + 1
    total = MultiPoly.zero(ctx, n)
    for d in range(d_max + 1):
        t0d = MultiPoly.var(ctx, n, 0, d) if d else MultiPoly.one(ctx, n)
        for a in monic_enumerate(d, ctx):
            term = t0d
            for i, b in enumerate(betas, start=1):
                term = term * chi_eval(a, i, n).pow_naive(b)
            total = total + term
    return total


def literal_ones(s, ctx):
    """The recursion over index tuples in {0,1}^s, memoized by the number of survivors."""
    q = ctx.q

    @lru_cache(maxsize=None)
    def by_size(k):
        # z(1,...,1,t0) with k ones, in k+1 variables
        n = k + 1
        total = MultiPoly.one(ctx, n)
        t0 = MultiPoly.var(ctx, n, 0)
        for idx in itertools.product((0, 1), repeat=k):
            r = sum(idx)
            if r == 0 or r % (q - 1):
                continue
            survivors = [j for j in range(k) if idx[j] == 0]
            mono = MultiPoly.one(ctx, n)
            for j in survivors:
                mono = mono * MultiPoly.var(ctx, n, j + 1)
            inner = by_size(len(survivors)).embed_vars(n, [0] + [j + 1 for j in survivors])
            total = total - t0 * mono * inner
        return total

    return by_size(s)
