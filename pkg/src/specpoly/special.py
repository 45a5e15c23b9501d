"""The special polynomials z(beta_1, ..., beta_s, t0) over F_q.

Two independent routes:

``z_direct``
    literal summation over the monic polynomials of each degree d.
``via_ones``
    the recursion for z(1, ..., 1, t0), followed by the digit-block
    substitution that collapses l(beta_1) + ... + l(beta_s) variables onto
    t_i^(q^j).

z(1, ..., 1, t0) is symmetric in t1..ts, so it is stored by monomial orbits:
a key (d, lam) with lam a non-increasing exponent tuple stands for the sum of
all distinct monomials t0^d * t^sigma(lam).  The recursion acts on orbits
directly.  The substitution never expands the symmetric polynomial: each
orbit's exponent multiset is split among the target variables one at a time,
weighted by the number of arrangements inside each digit block, and states
reaching the same partial exponent are merged.
"""
from __future__ import annotations

import functools
import hashlib
import json
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Sequence

from . import _kernel
from .digits import digits_base_q, length_l, min_digit_length
from .field import FieldCtx
from .polyring import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    MultiPoly,
    Var,
    check_budget,
    degree_in_t0,
    substitute,
)

METHODS = ("direct", "via_ones")


class TheoremViolation(AssertionError):
    """A proved identity failed; this always means an implementation bug."""


def normalize_betas(betas: Sequence[int]) -> tuple[tuple[int, ...], list[int]]:
    """Drop zero exponents.

    Returns the positive exponents and, for each, its variable index in the
    ambient ring (t_i carries betas[i-1]).
    """
    betas = tuple(int(b) for b in betas)
    if any(b < 0 for b in betas):
        raise ValueError(f"exponents must be non-negative: {betas}")
    pos = [i + 1 for i, b in enumerate(betas) if b]
    return tuple(b for b in betas if b), pos


def phi_degree(betas: Sequence[int], ctx: FieldCtx) -> int:
    """min_i floor((l(p^i b_1) + ... + l(p^i b_s)) / (q - 1)), zeros dropped."""
    betas, _ = normalize_betas(betas)
    if not betas:
        return 0
    return min_digit_length(betas, ctx.p, ctx.e) // (ctx.q - 1)


def phi_degree_unreduced(betas: Sequence[int], ctx: FieldCtx, imax: int) -> int:
    """Same minimum taken over every i <= imax (no periodicity shortcut)."""
    betas, _ = normalize_betas(betas)
    if not betas:
        return 0
    return min(
        sum(length_l(ctx.p**i * b, ctx.q) for b in betas) // (ctx.q - 1) for i in range(imax + 1)
    )


@dataclass
class SpecialPoly:
    poly: MultiPoly
    provenance: str
    betas: tuple[int, ...]
    ctx: FieldCtx
    phi: int = field(default=0)

    @property
    def degree(self):
        return degree_in_t0(self.poly)

    def to_json(self) -> dict:
        d = self.poly.to_json()
        d["betas"] = list(self.betas)
        d["provenance"] = self.provenance
        return d


# --- direct summation ---------------------------------------------------------

def first_over_budget(ctx: FieldCtx, d_max: int, budget: int) -> int | None:
    for d in range(d_max + 1):
        if ctx.q**d > budget:
            return d
    return None


def z_direct(
    betas: Sequence[int],
    ctx: FieldCtx,
    d_max: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SpecialPoly:
    """sum_{d <= d_max} t0^d sum_{a in A+(d)} prod_i chi_i(a)^beta_i.

    The t0^d coefficients for phi < d <= d_max must vanish; a nonzero one
    raises ``TheoremViolation``.  The result is truncated at degree phi.
    """
    betas = tuple(int(b) for b in betas)
    surv, pos = normalize_betas(betas)
    nvars = len(betas) + 1
    phi = phi_degree(surv, ctx)
    d_max = phi + 2 if d_max is None else d_max
    bad = first_over_budget(ctx, d_max, budget)
    if bad is not None:
        check_budget(ctx, bad, budget)
    terms: dict[tuple, int] = {}
    for d in range(d_max + 1):
        coeff = _kernel.direct_coefficient(surv, d, ctx)
        if d > phi and coeff:
            raise TheoremViolation(
                f"z{betas} over F_{ctx.q}: coefficient of t0^{d} is nonzero although phi = {phi}"
            )
        for exp, c in coeff.items():
            full = [0] * nvars
            full[0] = d
            for i, a in zip(pos, exp):
                full[i] = a
            terms[tuple(full)] = c
    P = MultiPoly(ctx, nvars, terms).truncate_t0(phi)
    return SpecialPoly(P, "direct", betas, ctx, phi)


# --- the recursion for z(1, ..., 1, t0) -------------------------------------------

@functools.lru_cache(maxsize=None)
def ones_orbits(s: int, p: int, q: int) -> dict[tuple[int, tuple[int, ...]], int]:
    """z(1,...,1,t0) with s ones, as {(d, lam): coefficient in [0, p)}.

    The subset-sum of the recursion over index tuples with k ones equals, orbit
    by orbit, the orbit of (lam + 1) padded with k zeros: the k dropped
    variables are exactly the zero positions of each resulting monomial.
    """
    if s == 0:
        return {(0, ()): 1}
    out = {(0, (0,) * s): 1}
    for k in range(q - 1, s + 1, q - 1):
        for (d, lam), c in ones_orbits(s - k, p, q).items():
            key = (d + 1, tuple(x + 1 for x in lam) + (0,) * k)
            # keys for different (k, lam) never collide: k is the number of zeros
            out[key] = (out.get(key, 0) - c) % p
    return {k: v for k, v in out.items() if v}


def ones_degree(s: int, ctx: FieldCtx) -> int:
    """t0-degree of z(1,...,1,t0), read off the orbit form without expanding it."""
    orbits = ones_orbits(s, ctx.p, ctx.q)
    return max(d for d, _ in orbits)


class ExpansionTooLarge(BudgetExceeded):
    def __init__(self, s: int, count: int, budget: int):
        self.d, self.count, self.budget = s, count, budget
        RuntimeError.__init__(
            self, f"z(1^{s}) has {count} terms, over the expansion limit of {budget}; use ones_degree"
        )


def _distinct_permutations(lam):
    counts = Counter(lam)
    values = sorted(counts)
    n = len(lam)
    cur = [0] * n

    def rec(i):
        if i == n:
            yield tuple(cur)
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                cur[i] = v
                yield from rec(i + 1)
                counts[v] += 1

    yield from rec(0)


def orbit_size(lam) -> int:
    n = len(lam)
    size = 1
    for m in Counter(lam).values():
        size *= comb(n, m)
        n -= m
    return size


def z_recursive_ones(s: int, ctx: FieldCtx, max_terms: int = 2_000_000) -> SpecialPoly:
    """z(1,...,1,t0) in s+1 variables, expanded from its orbit form."""
    orbits = ones_orbits(s, ctx.p, ctx.q)
    total = sum(orbit_size(lam) for _, lam in orbits)
    if total > max_terms:
        raise ExpansionTooLarge(s, total, max_terms)
    terms = {}
    for (d, lam), c in orbits.items():
        code = ctx.from_int(c)
        for perm in _distinct_permutations(lam):
            terms[(d,) + perm] = code
    P = MultiPoly(ctx, s + 1, terms)
    return SpecialPoly(P, "recursive", (1,) * s, ctx, s // (ctx.q - 1))


# --- digit blocks and the collapse substitution -----------------------------------

def digit_blocks(betas: Sequence[int], q: int) -> list[tuple[int, int, int]]:
    """(target variable, power q^j, block size) for each nonzero digit, in order.

    The blocks partition l(beta_1) + ... + l(beta_s) fresh variables.
    """
    blocks = []
    for i, b in enumerate(betas, start=1):
        for j, digit in enumerate(digits_base_q(b, q)):
            if digit:
                blocks.append((i, q**j, digit))
    return blocks


def collapse_map(betas: Sequence[int], q: int) -> dict[int, Var]:
    """Substitution t_k -> t_i^(q^j) sending z(1,...,1,t0) to z(betas, t0)."""
    mapping = {}
    k = 1
    for i, power, size in digit_blocks(betas, q):
        for _ in range(size):
            mapping[k] = Var(i, power)
            k += 1
    return mapping


def _sub_counts(rem, total):
    """All count vectors m <= rem (componentwise) with sum(m) == total."""
    if not rem:
        if total == 0:
            yield ()
        return
    rest = sum(rem[1:])
    for n in range(max(0, total - rest), min(total, rem[0]) + 1):
        for tail in _sub_counts(rem[1:], total - n):
            yield (n,) + tail


@functools.lru_cache(maxsize=1 << 16)
def _splits_of(rem, total):
    """[(part, rem - part)] for every part produced by ``_sub_counts``."""
    return [(part, tuple(r - n for r, n in zip(rem, part))) for part in _sub_counts(rem, total)]


@functools.lru_cache(maxsize=1 << 18)
def _block_fill(counts, blocks, p):
    """Distribute a multiset (``counts[v]`` copies of value v) over blocks.

    ``blocks`` is a tuple of (power, size) for one target variable.  Returns
    {exponent: weight mod p}; each block contributes power * (sum of its
    values) and weighs the number of distinct orderings of its sub-multiset.
    """
    if not blocks:
        return {0: 1} if not any(counts) else {}
    (power, size), rest = blocks[0], blocks[1:]
    out: dict = defaultdict(int)
    for part in _sub_counts(counts, size):
        w = 1
        left = size
        for n in part:
            w = w * comb(left, n)
            left -= n
        w %= p
        if not w:
            continue
        shift = power * sum(v * n for v, n in enumerate(part))
        remaining = tuple(c - n for c, n in zip(counts, part))
        for exp, w2 in _block_fill(remaining, rest, p).items():
            key = exp + shift
            out[key] = (out[key] + w * w2) % p
    return {k: v for k, v in out.items() if v}


def specialize_ones(betas: Sequence[int], ctx: FieldCtx) -> MultiPoly:
    """Apply ``collapse_map(betas)`` to z(1,...,1,t0) in orbit form.  Betas positive.

    The orbit sum over all L variables splits as a sum over sub-multisets
    handed to the variables collapsing onto t_1, then t_2, and so on.  States
    (d, remaining multiset, exponents so far) are merged across orbits.
    """
    betas = tuple(betas)
    q, p = ctx.q, ctx.p
    L = sum(length_l(b, q) for b in betas)
    orbits = ones_orbits(L, p, q)
    top = max(d for d, _ in orbits)
    per_var = [
        tuple((power, size) for i, power, size in digit_blocks(betas, q) if i == k)
        for k in range(1, len(betas) + 1)
    ]
    states: dict = defaultdict(int)
    for (d, lam), c in orbits.items():
        counts = [0] * (top + 1)
        for v in lam:
            counts[v] += 1
        states[(d, tuple(counts), ())] += c
    fill = functools.lru_cache(maxsize=None)(lambda i, counts: _block_fill(counts, per_var[i], p))
    last = len(per_var) - 1
    for i, blocks in enumerate(per_var):
        size = sum(b for _, b in blocks)
        new: dict = defaultdict(int)
        for (d, rem, exps), c in states.items():
            # the last variable takes whatever is left
            splits = [(rem, (0,) * len(rem))] if i == last else _splits_of(rem, size)
            for part, left in splits:
                for exp, w in fill(i, part).items():
                    key = (d, left, exps + (exp,))
                    new[key] = (new[key] + c * w) % p
        states = {k: v for k, v in new.items() if v}
    terms = {(d,) + exps: ctx.from_int(c) for (d, _, exps), c in states.items()}
    return MultiPoly(ctx, len(betas) + 1, terms)


def z_via_ones(betas: Sequence[int], ctx: FieldCtx) -> SpecialPoly:
    betas = tuple(int(b) for b in betas)
    surv, pos = normalize_betas(betas)
    P = specialize_ones(surv, ctx)
    P = P.embed_vars(len(betas) + 1, [0] + pos)
    return SpecialPoly(P, "recursive", betas, ctx, phi_degree(surv, ctx))


def z_general(
    betas: Sequence[int],
    ctx: FieldCtx,
    method: str = "via_ones",
    budget: int = DEFAULT_BUDGET,
    d_max: int | None = None,
) -> SpecialPoly:
    if method == "direct":
        return z_direct(betas, ctx, d_max=d_max, budget=budget)
    if method == "via_ones":
        return z_via_ones(betas, ctx)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


# --- Frobenius twist -------------------------------------------------------------

@dataclass
class TwistCheck:
    ok: bool
    lhs: MultiPoly
    rhs: MultiPoly


def frobenius_twist_check(
    betas: Sequence[int], i: int, ctx: FieldCtx, method: str = "direct", budget: int = DEFAULT_BUDGET
) -> TwistCheck:
    """Compare z(betas, t0)^(p^i) with z(p^i betas, t0^(p^i))."""
    f = ctx.p**i
    z = z_general(betas, ctx, method, budget=budget).poly
    lhs = z**f
    twisted = z_general([f * b for b in betas], ctx, method, budget=budget).poly
    rhs = substitute(twisted, {0: Var(0, f)})
    return TwistCheck(lhs == rhs, lhs, rhs)


# --- the single-variable witness ----------------------------------------------------

@dataclass
class Witness:
    ms: list[int]
    B: int
    mapping: dict[int, Var]


def witness_specialization(betas: Sequence[int], ctx: FieldCtx) -> Witness:
    """Least m_1 < ... < m_{s-1} placing the betas in disjoint base-q digit ranges.

    q^(m_j) > q^(m_{j-1}) p^(e-1) beta_j for each j, so p^i beta_1 +
    p^i q^(m_1) beta_2 + ... never carries for i < e.  Substituting
    t_j -> t_1^(q^(m_{j-1})) turns z(betas, t0) into z(B, t0).
    """
    betas = tuple(int(b) for b in betas)
    if not betas or any(b < 1 for b in betas):
        raise ValueError(f"witness needs positive exponents, got {betas}")
    q, p, e = ctx.q, ctx.p, ctx.e
    ms = [0]
    for b in betas[:-1]:
        bound = q ** ms[-1] * p ** (e - 1) * b
        m = ms[-1] + 1
        while q**m <= bound:
            m += 1
        ms.append(m)
    B = sum(q**m * b for m, b in zip(ms, betas))
    for i in range(e):
        lhs = length_l(p**i * B, q)
        rhs = sum(length_l(p**i * b, q) for b in betas)
        if lhs != rhs:
            raise TheoremViolation(f"witness B={B} for {betas} carries at i={i}: {lhs} != {rhs}")
    mapping = {j + 1: Var(1, q**m) for j, m in enumerate(ms)}
    return Witness(ms[1:], B, mapping)


# --- disk cache -----------------------------------------------------------------------

CACHE_ENV = "SPECPOLY_CACHE"


def cache_key(ctx: FieldCtx, betas: Sequence[int], method: str) -> str:
    blob = json.dumps({"p": ctx.p, "e": ctx.e, "betas": list(betas), "method": method}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def cached_z(
    betas: Sequence[int],
    ctx: FieldCtx,
    method: str,
    cache_dir: str | os.PathLike | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SpecialPoly:
    """``z_general`` through a content-addressed JSON cache (None = no cache)."""
    if cache_dir is None:
        return z_general(betas, ctx, method, budget=budget)
    path = Path(cache_dir) / f"{cache_key(ctx, betas, method)}.json"
    if path.exists():
        data = json.loads(path.read_text())
        P = MultiPoly.from_json(data)
        return SpecialPoly(P, data["provenance"], tuple(data["betas"]), ctx, phi_degree(betas, ctx))
    sp = z_general(betas, ctx, method, budget=budget)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(sp.to_json(), sort_keys=True))
    tmp.replace(path)
    return sp
