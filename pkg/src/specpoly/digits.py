"""Base-q digits, the digit-sum length l(n), carry-free sums and digit permutations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


def _check_base(q: int):
    if q < 2:
        raise ValueError(f"base must be >= 2, got {q}")


def digits_base_q(n: int, q: int) -> list[int]:
    """Low-order-first base-q digits of n; ``[]`` for 0."""
    _check_base(q)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return out


def from_digits(digits: Iterable[int], q: int) -> int:
    n = 0
    for d in reversed(list(digits)):
        n = n * q + d
    return n


def length_l(n: int, q: int) -> int:
    """Sum of the base-q digits of n."""
    _check_base(q)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    total = 0
    while n:
        n, r = divmod(n, q)
        total += r
    return total


def carry_free(j: int, k: int, q: int) -> bool:
    """True when adding j and k in base q never carries.

    In that case l(j + k) = l(j) + l(k), which is checked here.
    """
    _check_base(q)
    ok = True
    a, b = j, k
    while a and b:
        a, ra = divmod(a, q)
        b, rb = divmod(b, q)
        if ra + rb >= q:
            ok = False
            break
    if ok:
        assert length_l(j + k, q) == length_l(j, q) + length_l(k, q)
    return ok


def min_digit_length(betas: Iterable[int], p: int, e: int) -> int:
    """min over i in [0, e) of sum_j l(p^i beta_j), base q = p^e.

    l(q n) = l(n), so the sequence i -> sum_j l(p^i beta_j) has period e and
    the minimum over all i >= 0 is attained for some i < e.
    """
    q = p**e
    betas = list(betas)
    return min(sum(length_l(p**i * b, q) for b in betas) for i in range(e))


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class DigitPerm:
    """A permutation of digit positions moving finitely many of them.

    ``pairs`` lists (position, image); the positions and the images must be
    the same set.  Unlisted positions are fixed.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        src = [a for a, _ in pairs]
        dst = [b for _, b in pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise PermutationError(f"repeated position in {list(pairs)}")
        if set(src) != set(dst):
            raise PermutationError(
                f"{list(pairs)} is not a permutation of its positions {sorted(set(src))}"
            )
        if any(a < 0 for a in src):
            raise PermutationError("digit positions must be non-negative")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def identity(cls) -> "DigitPerm":
        return cls(())

    @classmethod
    def from_mapping(cls, mapping: dict[int, int]) -> "DigitPerm":
        return cls(tuple(mapping.items()))

    @classmethod
    def parse(cls, text: str) -> "DigitPerm":
        """Parse ``"0:2,2:0"``; an empty string or ``"id"`` is the identity."""
        text = text.strip()
        if text in ("", "id"):
            return cls.identity()
        pairs = []
        for item in text.split(","):
            try:
                a, b = item.split(":")
                pairs.append((int(a), int(b)))
            except ValueError:
                raise PermutationError(f"bad permutation item {item!r}, expected 'i:j'") from None
        return cls(tuple(pairs))

    def __call__(self, i: int) -> int:
        return self.mapping.get(i, i)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def inverse(self) -> "DigitPerm":
        return DigitPerm(tuple((b, a) for a, b in self.pairs))

    def compose(self, other: "DigitPerm") -> "DigitPerm":
        """self after other."""
        support = {a for a, _ in self.pairs} | {a for a, _ in other.pairs}
        return DigitPerm(tuple((i, self(other(i))) for i in support if self(other(i)) != i))

    def to_json(self) -> list[list[int]]:
        return [[a, b] for a, b in self.pairs]

    @classmethod
    def from_json(cls, data) -> "DigitPerm":
        return cls(tuple((a, b) for a, b in data))

    def __str__(self):
        return ",".join(f"{a}:{b}" for a, b in self.pairs) or "id"


def perm_apply(perm: DigitPerm, n: int, q: int) -> int:
    """sum_i n_i q^rho(i) for n = sum_i n_i q^i."""
    return sum(d * q ** perm(i) for i, d in enumerate(digits_base_q(n, q)) if d)
