"""Sparse polynomials over F_q in t0, t1, ..., ts and monic polynomials in theta.

Variable 0 is always t0.  Coefficients are stored as field codes (see
``specpoly.field``); a ``MultiPoly`` never stores a zero coefficient.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .field import FieldCtx, FqElem, field_embed, field_from_json

NEG_INF = float("-inf")
DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """An enumeration over A+(d) would exceed the configured budget."""

    def __init__(self, d: int, count: int, budget: int):
        self.d, self.count, self.budget = d, count, budget
        super().__init__(
            f"enumerating A+({d}) needs q^{d} = {count} polynomials, over the budget of {budget}"
            " (raise it with --budget)"
        )


def check_budget(ctx: FieldCtx, d: int, budget: int = DEFAULT_BUDGET):
    if ctx.q**d > budget:
        raise BudgetExceeded(d, ctx.q**d, budget)


def grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[tuple, int] | None = None):
        self.ctx = ctx
        self.nvars = nvars
        self.terms: dict[tuple, int] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
                if c:
                    self.terms[tuple(exp)] = c

    @classmethod
    def _raw(cls, ctx, nvars, terms):
        # terms already canonical: tuple keys, no zero values
        P = cls.__new__(cls)
        P.ctx, P.nvars, P.terms = ctx, nvars, terms
        return P

    @classmethod
    def zero(cls, ctx, nvars):
        return cls._raw(ctx, nvars, {})

    @classmethod
    def const(cls, ctx, nvars, c=1):
        if isinstance(c, FqElem):
            c = c.code
        elif isinstance(c, int):
            c = ctx.from_int(c)
        return cls._raw(ctx, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, ctx, nvars):
        return cls.const(ctx, nvars, 1)

    @classmethod
    def var(cls, ctx, nvars, i, power=1):
        exp = [0] * nvars
        exp[i] = power
        return cls._raw(ctx, nvars, {tuple(exp): ctx.one})

    # -- basic protocol --

    def _check(self, other):
        if other.ctx != self.ctx or other.nvars != self.nvars:
            raise ValueError(
                f"ring mismatch: (F_{self.ctx.q}, {self.nvars} vars) vs (F_{other.ctx.q}, {other.nvars} vars)"
            )

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, FqElem)):
            return MultiPoly.const(self.ctx, self.nvars, other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"MultiPoly({pretty(self)}, q={self.ctx.q}, nvars={self.nvars})"

    def copy(self):
        return MultiPoly._raw(self.ctx, self.nvars, dict(self.terms))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    # -- arithmetic --

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        add = self.ctx.add
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = add(out.get(exp, 0), c)
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.ctx, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ctx.neg
        return MultiPoly._raw(self.ctx, self.nvars, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "MultiPoly":
        """Multiply by the field element with code c."""
        if not c:
            return MultiPoly.zero(self.ctx, self.nvars)
        mul = self.ctx.mul
        return MultiPoly._raw(self.ctx, self.nvars, {e: mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        add, mul = self.ctx.add, self.ctx.mul
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = add(out.get(exp, 0), mul(c1, c2))
        return MultiPoly._raw(self.ctx, self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def frobenius(self, k: int = 1) -> "MultiPoly":
        """P^(p^k): coefficients raised to p^k, exponents scaled by p^k."""
        f = self.ctx.p**k
        pw = self.ctx.pow
        return MultiPoly._raw(
            self.ctx, self.nvars,
            {tuple(a * f for a in e): pw(c, f) for e, c in self.terms.items()},
        )

    def pow_naive(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.one(self.ctx, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __pow__(self, n: int) -> "MultiPoly":
        # peel off p-power factors with the Frobenius; exact in characteristic p
        p, k = self.ctx.p, 0
        while n and n % p == 0:
            n //= p
            k += 1
        P = self.pow_naive(n)
        return P.frobenius(k) if k else P

    # -- queries --

    def degree_in_t0(self):
        return degree_in_t0(self)

    def t0_coefficients(self) -> dict[int, "MultiPoly"]:
        """Map d -> coefficient of t0^d (as a polynomial with t0 exponent 0)."""
        out: dict[int, dict] = defaultdict(dict)
        for exp, c in self.terms.items():
            out[exp[0]][(0,) + exp[1:]] = c
        return {d: MultiPoly._raw(self.ctx, self.nvars, t) for d, t in sorted(out.items())}

    def truncate_t0(self, dmax: int) -> "MultiPoly":
        return MultiPoly._raw(
            self.ctx, self.nvars, {e: c for e, c in self.terms.items() if e[0] <= dmax}
        )

    def eval_t0(self, c) -> "MultiPoly":
        """Set t0 = c; the result keeps the ambient variables."""
        if isinstance(c, FqElem):
            c = c.code
        elif isinstance(c, int):
            c = self.ctx.from_int(c)
        return substitute(self, {0: Const(c)})

    def used_vars(self) -> set[int]:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    def project(self, keep: list[int]) -> "MultiPoly":
        """Drop unused variables, keeping ``keep`` in that order."""
        dropped = set(range(self.nvars)) - set(keep)
        if dropped & self.used_vars():
            raise ValueError(f"variables {sorted(dropped & self.used_vars())} are in use")
        return MultiPoly._raw(
            self.ctx, len(keep), {tuple(e[i] for i in keep): c for e, c in self.terms.items()}
        )

    def embed_vars(self, nvars: int, positions: list[int]) -> "MultiPoly":
        """Move variable i to ``positions[i]`` in a ring with ``nvars`` variables."""
        out = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, a in enumerate(e):
                new[positions[i]] += a
            out[tuple(new)] = c
        return MultiPoly._raw(self.ctx, nvars, out)

    def prime_coefficients(self) -> bool:
        return all(self.ctx.prime_value(c) is not None for c in self.terms.values())

    # -- serialization --

    def to_json(self) -> dict:
        d = self.ctx.to_json()
        d["num_vars"] = self.nvars
        d["terms"] = [
            {"exp": list(e), "coeff": list(self.ctx.vec(c))} for e, c in self.sorted_terms()
        ]
        return d

    @classmethod
    def from_json(cls, data: dict) -> "MultiPoly":
        ctx = field_from_json(data)
        terms = {tuple(t["exp"]): ctx.code(t["coeff"]) for t in data["terms"]}
        return cls(ctx, data["num_vars"], terms)


def poly_arith(op: str, *operands):
    if op == "add":
        return operands[0] + operands[1]
    if op == "mul":
        return operands[0] * operands[1]
    if op == "pow":
        return operands[0] ** operands[1]
    raise ValueError(f"unknown polynomial operation {op!r}")


def degree_in_t0(P: MultiPoly):
    """Largest t0 exponent, or NEG_INF for the zero polynomial."""
    if not P.terms:
        return NEG_INF
    return max(e[0] for e in P.terms)


# --- pretty printing ---------------------------------------------------

def format_coeff(ctx: FieldCtx, c: int) -> str:
    v = ctx.prime_value(c)
    if v is not None:
        return str(v)
    parts = []
    for i, a in enumerate(ctx.vec(c)):
        if a:
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                parts.append(str(a))
            else:
                parts.append(mono if a == 1 else f"{a}*{mono}")
    return "(" + " + ".join(parts) + ")"


def pretty(P: MultiPoly, names: list[str] | None = None) -> str:
    if not P.terms:
        return "0"
    names = names or [f"t{i}" for i in range(P.nvars)]
    out = []
    for exp, c in P.sorted_terms():
        mono = [n if a == 1 else f"{n}^{a}" for n, a in zip(names, exp) if a]
        cs = format_coeff(P.ctx, c)
        if not mono:
            out.append(cs)
        elif c == P.ctx.one:
            out.append("*".join(mono))
        else:
            out.append("*".join([cs] + mono))
    return " + ".join(out)


# --- monic polynomials in theta -------------------------------------------

@dataclass(frozen=True)
class MonicUPoly:
    """Monic polynomial over F_q in theta; ``coeffs`` are codes, low degree first."""

    coeffs: tuple[int, ...]
    ctx: FieldCtx

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] != self.ctx.one:
            raise ValueError(f"not monic: {self.coeffs}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def elems(self) -> list[FqElem]:
        return [FqElem.from_code(c, self.ctx) for c in self.coeffs]

    def __call__(self, x: int, ctx: FieldCtx | None = None) -> int:
        """Evaluate at the code x of ``ctx`` (an extension of self.ctx)."""
        ctx = ctx or self.ctx
        emb = field_embed(self.ctx, ctx) if ctx != self.ctx else None
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), emb.code(c) if emb else c)
        return acc

    def __mul__(self, other: "MonicUPoly") -> "MonicUPoly":
        ctx = self.ctx
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
        return MonicUPoly(tuple(out), ctx)


def block_range(total: int, block: int, nblocks: int) -> range:
    """The ``block``-th of ``nblocks`` balanced contiguous pieces of range(total)."""
    if not 0 <= block < nblocks:
        raise ValueError(f"block {block} out of range for {nblocks} blocks")
    base, extra = divmod(total, nblocks)
    start = block * base + min(block, extra)
    return range(start, start + base + (block < extra))


def monic_enumerate(
    d: int, ctx: FieldCtx, budget: int = DEFAULT_BUDGET, block: int = 0, nblocks: int = 1
) -> Iterator[MonicUPoly]:
    """A+(d) in a fixed order: the constant coefficient varies fastest."""
    check_budget(ctx, d, budget)
    q, one = ctx.q, ctx.one
    for n in block_range(q**d, block, nblocks):
        low = []
        for _ in range(d):
            n, r = divmod(n, q)
            low.append(r)
        yield MonicUPoly(tuple(low) + (one,), ctx)


def chi_eval(a: MonicUPoly, var_index: int, nvars: int) -> MultiPoly:
    """The image of a under theta -> t_{var_index}."""
    if not 1 <= var_index < nvars:
        raise ValueError(f"variable index {var_index} not in 1..{nvars - 1}")
    terms = {}
    for k, c in enumerate(a.coeffs):
        if c:
            exp = [0] * nvars
            exp[var_index] = k
            terms[tuple(exp)] = c
    return MultiPoly._raw(a.ctx, nvars, terms)


# --- substitution ------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    """Substitution target: ``t_index ** power``."""

    index: int
    power: int = 1

    def __post_init__(self):
        if self.power < 1:
            raise ValueError(f"substitution power must be positive, got {self.power}")


@dataclass(frozen=True)
class Const:
    """Substitution target: a field element, as a code of ``ctx`` (None = source field)."""

    value: int
    ctx: FieldCtx | None = None

    @classmethod
    def of(cls, x: FqElem) -> "Const":
        return cls(x.code, x.ctx)


Target = Union[Var, Const]


def substitute(P: MultiPoly, mapping: Mapping[int, Target], nvars: int | None = None) -> MultiPoly:
    """Ring homomorphism sending t_i to ``mapping[i]`` (unmapped variables are fixed).

    If some constant lives in an extension field, every coefficient is first
    pushed through the canonical embedding into that field.
    """
    nvars = P.nvars if nvars is None else nvars
    src = P.ctx
    targets: list[Target] = []
    dst = src
    for i in range(P.nvars):
        t = mapping.get(i, Var(i))
        if isinstance(t, FqElem):
            t = Const.of(t)
        if isinstance(t, Var):
            if not 0 <= t.index < nvars:
                raise ValueError(f"target variable t{t.index} outside a ring with {nvars} variables")
        elif isinstance(t, Const):
            if t.ctx is not None and t.ctx != src:
                if dst not in (src, t.ctx):
                    raise ValueError("constants from two different extension fields")
                dst = t.ctx
        else:
            raise TypeError(f"bad substitution target {t!r} for t{i}")
        targets.append(t)
    for i in mapping:
        if not 0 <= i < P.nvars:
            raise ValueError(f"substitution for t{i} but the ring has {P.nvars} variables")

    emb = field_embed(src, dst) if dst != src else None
    consts = {}
    for i, t in enumerate(targets):
        if isinstance(t, Const):
            v = t.value
            if emb is not None and (t.ctx is None or t.ctx == src):
                v = emb.code(v)
            consts[i] = v

    add, mul, pw = dst.add, dst.mul, dst.pow
    powcache: dict[tuple, int] = {}
    out: dict[tuple, int] = {}
    for exp, c in P.terms.items():
        c = emb.code(c) if emb else c
        new = [0] * nvars
        for i, a in enumerate(exp):
            if not a:
                continue
            t = targets[i]
            if isinstance(t, Var):
                new[t.index] += t.power * a
            else:
                key = (i, a)
                if key not in powcache:
                    powcache[key] = pw(consts[i], a)
                c = mul(c, powcache[key])
        if c:
            key = tuple(new)
            s = add(out.get(key, 0), c)
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return MultiPoly._raw(dst, nvars, out)


# --- root multiplicity in t0 -------------------------------------------------

def _dense_t0(P: MultiPoly) -> list[dict]:
    coeffs: list[dict] = [dict() for _ in range(int(degree_in_t0(P)) + 1)]
    for exp, c in P.terms.items():
        coeffs[exp[0]][exp[1:]] = c
    return coeffs


def _divide_linear(coeffs: list[dict], c: int, ctx: FieldCtx):
    """Divide sum_k coeffs[k] t0^k by (t0 - c); return (quotient, remainder)."""
    add, mul = ctx.add, ctx.mul
    n = len(coeffs) - 1
    quotient: list[dict] = [dict() for _ in range(n)]
    carry: dict = {}
    for k in range(n, -1, -1):
        # b_{k-1} = a_k + c * b_k
        cur = dict(coeffs[k])
        for m, v in carry.items():
            s = add(cur.get(m, 0), mul(c, v))
            if s:
                cur[m] = s
            else:
                cur.pop(m, None)
        if k == 0:
            return quotient, cur
        quotient[k - 1] = cur
        carry = cur
    raise AssertionError("unreachable")


def multiplicity_at_t0(P: MultiPoly, c) -> int:
    """Largest m with (t0 - c)^m dividing P in F_q[t1..ts][t0]."""
    if not P.terms:
        raise ValueError("multiplicity of a root of the zero polynomial is undefined")
    ctx = P.ctx
    if isinstance(c, FqElem):
        c = c.code
    elif isinstance(c, int):
        c = ctx.from_int(c)
    coeffs = _dense_t0(P)
    m = 0
    while len(coeffs) > 1:
        quotient, rem = _divide_linear(coeffs, c, ctx)
        if rem:
            break
        coeffs = quotient
        m += 1
    return m
