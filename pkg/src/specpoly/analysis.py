"""Executable checks of the degree, invariance and trivial-zero theorems.

Every check recomputes the objects involved and raises ``TheoremViolation``
when a proved statement fails, since that can only be an implementation bug.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

from . import _kernel
from .digits import DigitPerm, length_l, perm_apply
from .field import FieldCtx, FqElem, field_embed
from .polyring import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Const,
    MonicUPoly,
    MultiPoly,
    Var,
    degree_in_t0,
    multiplicity_at_t0,
    substitute,
)
from .special import (
    SpecialPoly,
    TheoremViolation,
    first_over_budget,
    normalize_betas,
    phi_degree,
    z_general,
)

DEFAULT_WORK = 5 * 10**7


def predicted_trivial_zero(betas: Sequence[int], q: int) -> bool:
    total = sum(betas)
    return total > 0 and total % (q - 1) == 0


def _degree(P: MultiPoly):
    d = degree_in_t0(P)
    return None if d == float("-inf") else int(d)


# --- trivial zeros -------------------------------------------------------------

@dataclass
class ZeroReport:
    betas: tuple[int, ...]
    q: int
    phi: int
    degree: int | None
    value_at_one: MultiPoly
    multiplicity: int
    predicted_zero: bool
    status: str = "ok"

    def to_json(self) -> dict:
        return {
            "betas": list(self.betas),
            "q": self.q,
            "phi": self.phi,
            "degree": self.degree,
            "multiplicity_at_one": self.multiplicity,
            "predicted_zero": self.predicted_zero,
            "status": self.status,
        }


def trivial_zero_report(
    betas: Sequence[int],
    ctx: FieldCtx,
    method: str = "direct",
    budget: int = DEFAULT_BUDGET,
    z: SpecialPoly | None = None,
) -> ZeroReport:
    """Multiplicity of t0 = 1 as a root of z(betas, t0), against the congruence test."""
    betas = tuple(int(b) for b in betas)
    if z is None:
        z = z_general(betas, ctx, method, budget=budget)
    P = z.poly
    value = P.eval_t0(1)
    mult = multiplicity_at_t0(P, 1)
    predicted = predicted_trivial_zero(betas, ctx.q)
    report = ZeroReport(betas, ctx.q, phi_degree(betas, ctx), _degree(P), value, mult, predicted)
    if (mult >= 1) != bool(value == 0):
        raise TheoremViolation(f"z{betas} over F_{ctx.q}: evaluation and division disagree at t0 = 1")
    if predicted and mult != 1:
        report.status = "violation"
        raise TheoremViolation(
            f"z{betas} over F_{ctx.q}: expected a simple zero at t0 = 1, multiplicity {mult}"
        )
    if not predicted and mult != 0:
        report.status = "violation"
        raise TheoremViolation(f"z{betas} over F_{ctx.q}: unexpected zero at t0 = 1 (multiplicity {mult})")
    return report


# --- degree invariance under digit permutations --------------------------------------

@dataclass
class InvarianceReport:
    betas: tuple[int, ...]
    permuted: tuple[int, ...]
    q: int
    phi_before: int
    phi_after: int
    degree_before: int | None = None
    degree_after: int | None = None
    level: str = "formula-level"
    status: str = "ok"
    polys: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "betas": list(self.betas),
            "permuted": list(self.permuted),
            "q": self.q,
            "phi_before": self.phi_before,
            "phi_after": self.phi_after,
            "degree_before": self.degree_before,
            "degree_after": self.degree_after,
            "level": self.level,
            "status": self.status,
        }


def direct_work(betas: Sequence[int], ctx: FieldCtx, d_max: int) -> int:
    """Rough operation count of ``z_direct``: powers a^beta plus the final contraction."""
    from .digits import digits_base_q

    surv, _ = normalize_betas(betas)
    total = 0
    for d in range(d_max + 1):
        sizes = [_kernel.support_size(b, d, ctx.p) for b in surv]
        half = (len(sizes) + 1) // 2
        left = right = 1
        for s in sizes[:half]:
            left *= s
        for s in sizes[half:]:
            right *= s
        powers = sum(s * (d + 1) * sum(digits_base_q(b, ctx.p)) for s, b in zip(sizes, surv))
        total += ctx.q**d * (left * right + powers * ctx.e**2)
    return total


def within_budget(betas, ctx, budget=DEFAULT_BUDGET, work=DEFAULT_WORK) -> bool:
    d_max = phi_degree(betas, ctx) + 2
    if first_over_budget(ctx, d_max, budget) is not None:
        return False
    return direct_work(betas, ctx, d_max) <= work


def degree_invariance_check(
    betas: Sequence[int],
    perms: Sequence[DigitPerm],
    ctx: FieldCtx,
    budget: int = DEFAULT_BUDGET,
    work: int = DEFAULT_WORK,
    compute: bool = True,
) -> InvarianceReport:
    """Compare t0-degrees of z(betas) and z(rho_1(beta_1), ..., rho_s(beta_s))."""
    betas = tuple(int(b) for b in betas)
    if len(perms) != len(betas):
        raise ValueError(f"{len(perms)} permutations for {len(betas)} exponents")
    permuted = tuple(perm_apply(r, b, ctx.q) for r, b in zip(perms, betas))
    rep = InvarianceReport(betas, permuted, ctx.q, phi_degree(betas, ctx), phi_degree(permuted, ctx))
    if rep.phi_before != rep.phi_after:
        rep.status = "violation"
        raise TheoremViolation(f"phi changes under digit permutation: {rep}")
    if compute and within_budget(betas, ctx, budget, work) and within_budget(permuted, ctx, budget, work):
        z1 = z_general(betas, ctx, "direct", budget=budget)
        z2 = z_general(permuted, ctx, "direct", budget=budget)
        rep.degree_before, rep.degree_after = _degree(z1.poly), _degree(z2.poly)
        rep.level = "computed"
        rep.polys = (z1.poly, z2.poly)
        if rep.degree_before != rep.degree_after or rep.degree_before != rep.phi_before:
            rep.status = "violation"
            raise TheoremViolation(f"computed degrees disagree: {rep}")
    return rep


# --- the one-variable degree --------------------------------------------------------

def sheats_degree(beta: int, ctx: FieldCtx) -> int:
    """min over i in [0, e) of floor(l(p^i beta) / (q - 1))."""
    if beta < 1:
        raise ValueError(f"beta must be positive, got {beta}")
    return min(length_l(ctx.p**i * beta, ctx.q) for i in range(ctx.e)) // (ctx.q - 1)


# --- Dirichlet specialization --------------------------------------------------------

@dataclass(frozen=True)
class DirichletSpec:
    """chi(a) = a(lambda_1)^beta_1 ... a(lambda_s)^beta_s and the extra power a^beta."""

    lambdas: tuple[FqElem, ...]
    exponents: tuple[int, ...]
    extra_beta: int = 0

    def __post_init__(self):
        if len(self.lambdas) != len(self.exponents):
            raise ValueError("one exponent per lambda")
        if len({x.ctx for x in self.lambdas}) > 1:
            raise ValueError("all lambdas must lie in one field")

    def ext(self, ctx: FieldCtx) -> FieldCtx:
        return self.lambdas[0].ctx if self.lambdas else ctx

    def character(self, a: MonicUPoly, ext: FieldCtx) -> FqElem:
        value = ext.one
        for lam, k in zip(self.lambdas, self.exponents):
            if lam.ctx != ext:
                raise ValueError(f"lambda {lam} is not in F_{ext.q}")
            value = ext.mul(value, ext.pow(a(lam.code, ext), k))
        return FqElem.from_code(value, ext)


def _dirichlet_direct(spec: DirichletSpec, ctx: FieldCtx, ext: FieldCtx, phi: int, budget: int) -> MultiPoly:
    d_max = phi + 2
    bad = first_over_budget(ctx, d_max, budget)
    if bad is not None:
        raise BudgetExceeded(bad, ctx.q**bad, budget)
    lambdas = [x.code for x in spec.lambdas]
    terms = {}
    for d in range(d_max + 1):
        coeff = _kernel.dirichlet_coefficient(lambdas, spec.exponents, spec.extra_beta, d, ctx, ext)
        if d > phi and coeff:
            raise TheoremViolation(f"Dirichlet sum {spec} has a t0^{d} term beyond phi = {phi}")
        for (k,), c in coeff.items():
            terms[(d, k)] = c
    return MultiPoly(ext, 2, terms)


def _dirichlet_substitute(spec: DirichletSpec, ctx: FieldCtx, ext: FieldCtx) -> MultiPoly:
    s = len(spec.lambdas)
    z = z_general(tuple(spec.exponents) + (spec.extra_beta,), ctx, "via_ones").poly
    mapping = {i + 1: Const(lam.code, ext) for i, lam in enumerate(spec.lambdas)}
    mapping[s + 1] = Var(1)
    P = substitute(z, mapping, nvars=2)
    if P.ctx != ext:
        emb = field_embed(P.ctx, ext)
        P = MultiPoly(ext, 2, {k: emb.code(c) for k, c in P.terms.items()})
    return P


def dirichlet_specialize(
    spec: DirichletSpec,
    ctx: FieldCtx,
    ext: FieldCtx | None = None,
    method: str = "both",
    budget: int = DEFAULT_BUDGET,
) -> SpecialPoly:
    """z(chi, beta, t0) over F_{q^m}[theta]; theta is variable 1 of the result.

    ``method`` is "direct" (sum a^beta chi(a) over A+(d)), "substitute"
    (specialize z(beta_1, ..., beta_s, beta, t0)) or "both", which checks they
    agree.
    """
    ext = ext or spec.ext(ctx)
    field_embed(ctx, ext)
    for lam in spec.lambdas:
        if lam.ctx != ext:
            raise ValueError(f"lambda {lam} is not in F_{ext.q}")
    full = tuple(spec.exponents) + (spec.extra_beta,)
    phi = phi_degree(full, ctx)
    if method == "direct":
        P = _dirichlet_direct(spec, ctx, ext, phi, budget)
    elif method == "substitute":
        P = _dirichlet_substitute(spec, ctx, ext)
    elif method == "both":
        P = _dirichlet_direct(spec, ctx, ext, phi, budget)
        Q = _dirichlet_substitute(spec, ctx, ext)
        if P != Q:
            raise TheoremViolation(f"Dirichlet paths disagree for {spec}")
    else:
        raise ValueError(f"unknown method {method!r}")
    if degree_in_t0(P) > phi:
        raise TheoremViolation(f"specialization raised the t0-degree above phi = {phi}")
    if predicted_trivial_zero(full, ctx.q) and P.eval_t0(1):
        raise TheoremViolation(f"{spec}: no zero at t0 = 1 although the exponent sum is divisible by q - 1")
    return SpecialPoly(P, "specialized", full, ext, phi)


# --- grids -------------------------------------------------------------------------

@dataclass
class GridRow:
    q: int
    betas: tuple[int, ...]
    phi: int
    degree: int | None
    multiplicity_at_one: int
    predicted_zero: bool
    status: str

    def to_json(self) -> dict:
        return {
            "betas": list(self.betas),
            "q": self.q,
            "phi": self.phi,
            "degree": self.degree,
            "multiplicity_at_one": self.multiplicity_at_one,
            "predicted_zero": self.predicted_zero,
            "status": self.status,
        }


def grid_row(betas, ctx: FieldCtx, method="via_ones", budget=DEFAULT_BUDGET) -> GridRow:
    try:
        rep = trivial_zero_report(betas, ctx, method=method, budget=budget)
        status = "ok" if rep.degree == rep.phi else "degree-mismatch"
        return GridRow(ctx.q, rep.betas, rep.phi, rep.degree, rep.multiplicity, rep.predicted_zero, status)
    except BudgetExceeded:
        return GridRow(ctx.q, tuple(betas), phi_degree(betas, ctx), None, -1,
                       predicted_trivial_zero(betas, ctx.q), "over-budget")
    except TheoremViolation:
        return GridRow(ctx.q, tuple(betas), phi_degree(betas, ctx), None, -1,
                       predicted_trivial_zero(betas, ctx.q), "violation")


CSV_FIELDS = ["q", "betas", "phi", "degree", "multiplicity_at_one", "predicted_zero", "status"]


def rows_to_csv(rows: Sequence[GridRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([
            r.q, " ".join(map(str, r.betas)), r.phi,
            "" if r.degree is None else r.degree, r.multiplicity_at_one,
            int(r.predicted_zero), r.status,
        ])
    return buf.getvalue()


# --- the theorem grid behind ``verify`` ------------------------------------------------

@dataclass
class CheckResult:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str):
        self.failures.append(msg)

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        extra = f", {self.skipped} over budget" if self.skipped else ""
        return f"{tag} {self.name}: {self.cases} cases{extra}, {len(self.failures)} failures"

    def to_json(self) -> dict:
        return {"name": self.name, "cases": self.cases, "skipped": self.skipped,
                "ok": self.ok, "failures": self.failures[:20]}


@dataclass
class VerifyConfig:
    s_max: int = 3
    beta_max: int = 4
    ones_max: int = 8
    single_max: int = 40
    digit_len: int = 4
    perm_positions: int = 6
    invariance_cases: int = 50
    twist_max: int | None = None
    dirichlet_max: int = 3
    budget: int = DEFAULT_BUDGET
    seed: int = 0


def beta_grid(s_max: int, beta_max: int):
    """Non-decreasing tuples: z of a reordered tuple is z with its variables reordered."""
    import itertools

    for s in range(1, s_max + 1):
        yield from itertools.combinations_with_replacement(range(1, beta_max + 1), s)


def _guard(res: CheckResult, label, fn):
    try:
        fn()
    except BudgetExceeded:
        res.skipped += 1
        res.cases -= 1
    except TheoremViolation as exc:
        res.fail(f"{label}: {exc}")
    res.cases += 1


def verify_field(ctx: FieldCtx, cfg: VerifyConfig = VerifyConfig()) -> list[CheckResult]:
    """Run every theorem check over one field; one CheckResult per statement."""
    import random

    from .digits import carry_free
    from .special import frobenius_twist_check, witness_specialization, z_direct, z_recursive_ones
    from .polyring import substitute as _subst

    q, p, e = ctx.q, ctx.p, ctx.e
    names = ["oracle", "degree", "zeros", "single", "digits", "invariance", "twist", "witness", "tripwire"]
    if q > 2:
        names.append("dirichlet")
    R = {n: CheckResult(f"{n} q={q}") for n in names}
    rng = random.Random(cfg.seed * 1000 + q)

    for betas in beta_grid(cfg.s_max, cfg.beta_max):
        if not within_budget(betas, ctx, cfg.budget):
            for n in ("oracle", "degree", "zeros", "twist", "witness", "tripwire"):
                R[n].skipped += 1
            continue
        box = {}

        def direct():
            box["z"] = z_direct(betas, ctx, budget=cfg.budget)

        _guard(R["tripwire"], betas, direct)
        if "z" not in box:
            continue
        zd = box["z"]

        def oracle():
            if zd.poly != z_general(betas, ctx, "via_ones").poly:
                raise TheoremViolation("direct and via_ones disagree")

        def degree():
            if _degree(zd.poly) != zd.phi:
                raise TheoremViolation(f"degree {_degree(zd.poly)} != phi {zd.phi}")

        def twist():
            top = 2 * e if cfg.twist_max is None else cfg.twist_max
            for i in range(top + 1):
                if not frobenius_twist_check(betas, i, ctx, method="via_ones").ok:
                    raise TheoremViolation(f"twist fails at i = {i}")

        def witness():
            w = witness_specialization(betas, ctx)
            single = z_general((w.B,), ctx, "via_ones").poly
            if _subst(zd.poly, w.mapping, nvars=2) != single:
                raise TheoremViolation(f"witness B = {w.B} does not specialize correctly")

        _guard(R["oracle"], betas, oracle)
        _guard(R["degree"], betas, degree)
        _guard(R["zeros"], betas, lambda: trivial_zero_report(betas, ctx, z=zd))
        _guard(R["twist"], betas, twist)
        _guard(R["witness"], betas, witness)

    for s in range(cfg.ones_max + 1):
        def ones():
            z = z_recursive_ones(s, ctx)
            if _degree(z.poly) != s // (q - 1):
                raise TheoremViolation(f"z(1^{s}) has degree {_degree(z.poly)}")

        _guard(R["degree"], f"ones {s}", ones)

    for beta in range(1, cfg.single_max + 1):
        def single():
            z = z_general((beta,), ctx, "direct", budget=cfg.budget)
            if _degree(z.poly) != sheats_degree(beta, ctx):
                raise TheoremViolation(f"beta = {beta}: degree {_degree(z.poly)}")

        _guard(R["single"], beta, single)

    top = q**cfg.digit_len
    perms = [_random_perm(rng, cfg.perm_positions) for _ in range(8)]
    for k in range(top):
        for j in range(0, top, max(1, top // 16)):
            R["digits"].cases += 1
            try:
                carry_free(k, j, q)
            except AssertionError as exc:
                R["digits"].fail(f"carry-free ({k}, {j}): {exc}")
        for rho in perms:
            img = perm_apply(rho, k, q)
            for i in range(2 * e):
                R["digits"].cases += 1
                if length_l(p**i * k, q) != length_l(p**i * img, q):
                    R["digits"].fail(f"l(p^{i} {k}) != l(p^{i} {img}) for {rho}")

    for _ in range(cfg.invariance_cases):
        s = rng.randint(1, cfg.s_max)
        betas = tuple(rng.randint(1, q**3) for _ in range(s))
        rhos = [_random_perm(rng, cfg.perm_positions) for _ in range(s)]
        _guard(R["invariance"], betas, lambda: degree_invariance_check(betas, rhos, ctx, cfg.budget))

    if q > 2:
        for spec, ext in dirichlet_cases(ctx, cfg.dirichlet_max):
            _guard(R["dirichlet"], spec, lambda: dirichlet_specialize(spec, ctx, ext, "both", cfg.budget))
    return list(R.values())


def _random_perm(rng, positions: int) -> DigitPerm:
    image = list(range(positions))
    rng.shuffle(image)
    return DigitPerm.from_mapping(dict(enumerate(image)))


def dirichlet_cases(ctx: FieldCtx, beta_max: int, m_max: int = 2, s_max: int = 2):
    """(spec, extension) pairs with lambdas drawn from a fixed generating set."""
    import itertools

    for m in range(1, m_max + 1):
        ext = field_create_ext(ctx, m)
        # x, x + 1 and the least primitive-looking codes keep the grid small and varied
        pool = sorted({1 % ext.q, ext.one, ext.add(1, ext.one) if ext.q > ctx.p else 2 % ext.q} - {0})
        lams = [FqElem.from_code(c, ext) for c in pool]
        for s in range(s_max + 1):
            for chosen in itertools.product(lams, repeat=s):
                for exps in itertools.product(range(1, beta_max + 1), repeat=s):
                    for beta in range(beta_max + 1):
                        yield DirichletSpec(tuple(chosen), tuple(exps), beta), ext


def field_create_ext(ctx: FieldCtx, m: int) -> FieldCtx:
    from .field import field_create

    return field_create(ctx.p, ctx.e * m)
