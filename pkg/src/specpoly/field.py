"""Finite fields F_q, q = p^e, as F_p[x]/(f) with a deterministic modulus.

Elements are handled in two forms:

* ``FqElem`` -- public value type holding the F_p coordinate vector
  (low degree first) and its ``FieldCtx``.
* integer codes -- the position of an element in the canonical ordering
  (coordinate vectors compared as tuples, low index first).  Polynomial
  code works on codes because they hash and compare cheaply.

The zero element has code 0 and the identity has code ``p**(e-1)`` (its
coordinate vector is ``(1, 0, ..., 0)``).
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Sequence

DEFAULT_MAX_ORDER = 2**16
TABLE_MAX_ORDER = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# --- F_p[x] helpers on low-first coefficient lists ----------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    """Remainder of a modulo the monic polynomial m over F_p."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm])


def _monic_polys(p, deg):
    # lexicographic in the low-first coefficient vector
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    f = _trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] % p == 0:
        return False
    for d in range(1, n // 2 + 1):
        for g in _monic_polys(p, d):
            if not _polymod(f, g, p):
                return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    for f in _monic_polys(p, e):
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


# --- the field context ---------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    p: int
    e: int
    modulus: tuple[int, ...]
    q: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.e)

    # codes <-> coordinate vectors

    def vec(self, code: int) -> tuple[int, ...]:
        out = [0] * self.e
        for i in range(self.e - 1, -1, -1):
            code, out[i] = divmod(code, self.p)
        return tuple(out)

    def code(self, vec: Sequence[int]) -> int:
        vec = list(vec) + [0] * (self.e - len(vec))
        if len(vec) > self.e:
            raise FieldError(f"vector {vec} longer than e={self.e}")
        c = 0
        for x in vec:
            c = c * self.p + x % self.p
        return c

    @property
    def one(self) -> int:
        return self.p ** (self.e - 1)

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def from_int(self, n: int) -> int:
        """Code of the image of the integer n in the prime subfield."""
        return (n % self.p) * self.one

    def prime_value(self, code: int) -> int | None:
        """The integer in [0, p) if ``code`` lies in F_p, else None."""
        if code % self.one == 0:
            return code // self.one
        return None

    def elements(self) -> range:
        """All codes, in canonical order."""
        return range(self.q)

    def elem(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            return value
        if isinstance(value, int):
            return FqElem(self.vec(self.from_int(value)), self)
        return FqElem(tuple(int(v) % self.p for v in value) + (0,) * (self.e - len(value)), self)

    # generic arithmetic on codes (polynomial arithmetic mod the modulus)

    def _add_generic(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.code([x + y for x, y in zip(self.vec(a), self.vec(b))])

    def _mul_generic(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        va, vb = self.vec(a), self.vec(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] += x * y
        return self.code(_polymod(prod, self.modulus, self.p))

    # fast path

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        t = _tables(self)
        if t is not None:
            return t[0][a][b]
        return self._add_generic(a, b)

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        t = _tables(self)
        if t is not None:
            return t[1][a][b]
        return self._mul_generic(a, b)

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self.code([-x for x in self.vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int, times: int = 1) -> int:
        """a -> a^(p^times)."""
        return self.pow(a, self.p ** (times % self.e))

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, modulus={list(self.modulus)})"


@functools.lru_cache(maxsize=None)
def _tables(ctx: FieldCtx):
    if ctx.q > TABLE_MAX_ORDER:
        return None
    els = range(ctx.q)
    add = [[ctx._add_generic(a, b) for b in els] for a in els]
    mul = [[ctx._mul_generic(a, b) for b in els] for a in els]
    return add, mul


def field_create(p: int, e: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    """The field with p^e elements, modulus the least monic irreducible."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree e={e} must be >= 1")
    if p**e > max_order:
        raise FieldError(f"field order {p}^{e} = {p**e} exceeds bound {max_order}")
    return _field_create(p, e)


@functools.lru_cache(maxsize=None)
def _field_create(p, e):
    return FieldCtx(p, e, least_irreducible(p, e))


def field_from_json(d: dict) -> FieldCtx:
    ctx = field_create(d["p"], d["e"])
    if list(ctx.modulus) != list(d["modulus"]):
        raise FieldError(f"modulus {d['modulus']} is not the canonical one {list(ctx.modulus)}")
    return ctx


# --- element value type ----------------------------------------------------

@dataclass(frozen=True)
class FqElem:
    coeffs: tuple[int, ...]
    ctx: FieldCtx

    @classmethod
    def from_code(cls, code: int, ctx: FieldCtx) -> "FqElem":
        return cls(ctx.vec(code), ctx)

    @property
    def code(self) -> int:
        return self.ctx.code(self.coeffs)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.ctx != self.ctx:
                raise FieldError(f"context mismatch: {self.ctx} vs {other.ctx}")
            return other.code
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def _wrap(self, code):
        return FqElem.from_code(code, self.ctx)

    def __add__(self, other):
        return self._wrap(self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return self._wrap(self.ctx.sub(self._other(other), self.code))

    def __mul__(self, other):
        return self._wrap(self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.code))

    def __pow__(self, n: int):
        return self._wrap(self.ctx.pow(self.code, n))

    def inverse(self) -> "FqElem":
        return self._wrap(self.ctx.inv(self.code))

    def __truediv__(self, other):
        return self * self._wrap(self._other(other)).inverse()

    def __bool__(self):
        return any(self.coeffs)

    def __lt__(self, other: "FqElem"):
        return self.coeffs < other.coeffs

    def __repr__(self):
        return f"FqElem({list(self.coeffs)}, q={self.ctx.q})"


def field_arith(op: str, *operands):
    """Dispatch helper: ``field_arith("mul", a, b)``, ``field_arith("pow", a, 5)``."""
    a = operands[0]
    if op == "add":
        return a + operands[1]
    if op == "mul":
        return a * operands[1]
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** operands[1]
    raise FieldError(f"unknown field operation {op!r}")


# --- embeddings ----------------------------------------------------------

class Embedding:
    """Field homomorphism F_q -> F_{q^m} given by the image of the generator."""

    def __init__(self, src: FieldCtx, dst: FieldCtx, root: int):
        self.src = src
        self.dst = dst
        self.root = root
        powers = [dst.one]
        for _ in range(src.e - 1):
            powers.append(dst.mul(powers[-1], root))
        self._powers = powers
        self._cache: dict[int, int] = {}

    def __call__(self, a):
        if isinstance(a, FqElem):
            return FqElem.from_code(self.code(a.code), self.dst)
        return self.code(a)

    def code(self, a: int) -> int:
        try:
            return self._cache[a]
        except KeyError:
            pass
        acc = 0
        for c, pw in zip(self.src.vec(a), self._powers):
            if c:
                acc = self.dst.add(acc, self.dst.mul(self.dst.from_int(c), pw))
        self._cache[a] = acc
        return acc

    def __repr__(self):
        return f"Embedding(F_{self.src.q} -> F_{self.dst.q}, gen -> {self.dst.vec(self.root)})"


def _eval_in(dst: FieldCtx, poly: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = dst.add(dst.mul(acc, x), dst.from_int(c))
    return acc


@functools.lru_cache(maxsize=None)
def field_embed(src: FieldCtx, dst: FieldCtx) -> Embedding:
    if src.p != dst.p or dst.e % src.e:
        raise FieldError(f"cannot embed F_{src.q} into F_{dst.q}")
    if src == dst:
        # generator maps to itself
        return Embedding(src, dst, dst.code([0, 1]) if dst.e > 1 else 0)
    # canonical code order is the canonical element order
    for x in dst.elements():
        if _eval_in(dst, src.modulus, x) == 0:
            return Embedding(src, dst, x)
    raise RuntimeError(f"modulus of F_{src.q} has no root in F_{dst.q}")
