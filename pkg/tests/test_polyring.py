import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specpoly.field import FqElem, field_create
from specpoly.polyring import (
    NEG_INF,
    BudgetExceeded,
    Const,
    MonicUPoly,
    MultiPoly,
    Var,
    block_range,
    chi_eval,
    degree_in_t0,
    monic_enumerate,
    multiplicity_at_t0,
    poly_arith,
    pretty,
    substitute,
)
from specpoly.special import z_direct

from oracle import naive_z

F2, F3, F4, F5, F9 = (field_create(*pe) for pe in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)])


def t(ctx, n, i, k=1):
    return MultiPoly.var(ctx, n, i, k)


def polys(ctx, nvars=3, max_exp=3, max_terms=5):
    exp = st.tuples(*[st.integers(0, max_exp)] * nvars)
    return st.dictionaries(exp, st.integers(0, ctx.q - 1), max_size=max_terms).map(
        lambda d: MultiPoly(ctx, nvars, d)
    )


# --- enumeration -----------------------------------------------------------------

def test_degree_zero_is_one():
    assert [a.coeffs for a in monic_enumerate(0, F3)] == [(F3.one,)]


def test_q2_degree_one():
    assert {a.coeffs for a in monic_enumerate(1, F2)} == {(0, 1), (1, 1)}


@pytest.mark.parametrize("ctx", [F2, F3, F4, F5])
def test_counts_and_distinctness(ctx):
    for d in range(4):
        polys_d = [a.coeffs for a in monic_enumerate(d, ctx)]
        assert len(polys_d) == ctx.q**d == len(set(polys_d))
    union = {a.coeffs for d in range(4) for a in monic_enumerate(d, ctx)}
    assert len(union) == (ctx.q**4 - 1) // (ctx.q - 1)


def test_constant_varies_fastest():
    first = [a.coeffs for a in monic_enumerate(2, F3)][:4]
    assert first == [(0, 0, 1), (1, 0, 1), (2, 0, 1), (0, 1, 1)]


@given(st.integers(0, 500), st.integers(1, 17))
def test_blocks_partition(total, nblocks):
    pieces = [block_range(total, b, nblocks) for b in range(nblocks)]
    assert [i for r in pieces for i in r] == list(range(total))
    sizes = [len(r) for r in pieces]
    assert max(sizes) - min(sizes) <= 1


def test_blocks_concatenate_to_full_enumeration():
    full = [a.coeffs for a in monic_enumerate(3, F3)]
    parts = [a.coeffs for b in range(4) for a in monic_enumerate(3, F3, block=b, nblocks=4)]
    assert parts == full


def test_budget_refusal_states_q_power():
    with pytest.raises(BudgetExceeded, match=r"q\^24 = 16777216"):
        list(monic_enumerate(24, F2))


def test_monic_check():
    with pytest.raises(ValueError):
        MonicUPoly((1, 0), F3)


# --- chi -------------------------------------------------------------------------

def test_chi_examples():
    n = 3
    assert chi_eval(MonicUPoly((1,), F3), 1, n) == MultiPoly.one(F3, n)
    assert chi_eval(MonicUPoly((0, 1), F3), 2, n) == t(F3, n, 2)
    assert chi_eval(MonicUPoly((1, 0, 1), F3), 1, n) == t(F3, n, 1, 2) + 1


def test_chi_is_multiplicative():
    n = 2
    for a in monic_enumerate(2, F4):
        for b in monic_enumerate(1, F4):
            assert chi_eval(a * b, 1, n) == chi_eval(a, 1, n) * chi_eval(b, 1, n)


def test_chi_index_range():
    with pytest.raises(ValueError):
        chi_eval(MonicUPoly((1,), F3), 0, 2)
    with pytest.raises(ValueError):
        chi_eval(MonicUPoly((1,), F3), 2, 2)


# --- arithmetic ------------------------------------------------------------------

def test_arith_examples():
    P = t(F3, 2, 1) * 2 + 1
    assert (P + (-P)).terms == {}
    x = t(F2, 2, 1) + 1
    assert poly_arith("mul", x, x) == t(F2, 2, 1, 2) + 1
    assert poly_arith("pow", P, 0) == MultiPoly.one(F3, 2)


def test_ring_mismatch():
    with pytest.raises(ValueError):
        MultiPoly.one(F3, 2) + MultiPoly.one(F3, 3)
    with pytest.raises(ValueError):
        MultiPoly.one(F3, 2) + MultiPoly.one(F9, 2)


@pytest.mark.parametrize("ctx", [F2, F3, F4, F9])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_ring_axioms(ctx, data):
    P, Q, R = (data.draw(polys(ctx)) for _ in range(3))
    assert P * (Q + R) == P * Q + P * R
    assert (P * Q) * R == P * (Q * R)
    assert P * Q == Q * P
    assert P - P == MultiPoly.zero(ctx, 3)


@pytest.mark.parametrize("ctx", [F2, F3, F4, F9])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_freshmans_dream(ctx, data):
    P = data.draw(polys(ctx, max_exp=2, max_terms=4))
    n = data.draw(st.integers(0, 2 * ctx.p + 1))
    assert P**n == P.pow_naive(n)
    # P^p: coefficients to the p-th power, exponents scaled by p
    expect = {tuple(ctx.p * a for a in e): ctx.pow(c, ctx.p) for e, c in P.terms.items()}
    assert (P ** ctx.p).terms == expect


def test_degree_in_t0_examples():
    assert degree_in_t0(MultiPoly.zero(F3, 2)) == NEG_INF
    assert degree_in_t0(1 - t(F3, 2, 0)) == 1
    assert degree_in_t0(t(F3, 2, 1, 5)) == 0


def test_pretty_is_grlex():
    P = t(F3, 2, 0) * 2 + 1 + t(F3, 2, 1, 2)
    assert pretty(P) == "1 + 2*t0 + t1^2"
    assert pretty(MultiPoly.zero(F3, 2)) == "0"


def test_json_round_trip():
    P = t(F9, 3, 1, 2) * FqElem.from_code(4, F9) + t(F9, 3, 0) + 2
    data = json.loads(json.dumps(P.to_json()))
    assert data["p"] == 3 and data["e"] == 2 and data["num_vars"] == 3
    assert [term["exp"] for term in data["terms"]] == [[0, 0, 0], [1, 0, 0], [0, 2, 0]]
    assert MultiPoly.from_json(data) == P


# --- substitution ----------------------------------------------------------------

def test_identity_substitution():
    P = t(F3, 3, 1) * t(F3, 3, 2, 2) + t(F3, 3, 0) + 2
    assert substitute(P, {}) == P
    assert substitute(P, {i: Var(i) for i in range(3)}) == P


def test_merge_t2_into_t1_gives_z2():
    z11 = z_direct((1, 1), F2).poly
    merged = substitute(z11, {2: Var(1)}, nvars=2)
    assert merged == z_direct((2,), F2).poly


def test_constant_into_extension():
    # t1 -> g with g the generator of F_9 = F_3[x]/(x^2 + 1): t1^2 + 1 vanishes
    P = t(F3, 2, 1, 2) + 1
    g = FqElem.from_code(1, F9)
    assert g * g == FqElem.from_code(F9.from_int(2), F9)
    out = substitute(P, {1: Const.of(g)})
    assert out.ctx == F9 and out.terms == {}


@pytest.mark.parametrize("ctx", [F3, F4])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_substitute_is_homomorphism(ctx, data):
    P, Q = data.draw(polys(ctx)), data.draw(polys(ctx))
    targets = st.one_of(
        st.builds(Var, st.integers(0, 2), st.integers(1, 3)),
        st.builds(Const, st.integers(0, ctx.q - 1)),
    )
    mapping = data.draw(st.dictionaries(st.integers(0, 2), targets, max_size=3))
    S = lambda X: substitute(X, mapping)
    assert S(P * Q) == S(P) * S(Q)
    assert S(P + Q) == S(P) + S(Q)


@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_specialization_never_raises_t0_degree(data):
    P = data.draw(polys(F5))
    mapping = data.draw(st.dictionaries(st.integers(1, 2), st.builds(Const, st.integers(0, 4)), max_size=2))
    assert degree_in_t0(substitute(P, mapping)) <= degree_in_t0(P)


def test_bad_substitutions():
    P = MultiPoly.one(F3, 2)
    with pytest.raises(ValueError):
        substitute(P, {5: Var(0)})
    with pytest.raises(ValueError):
        substitute(P, {1: Var(3)})
    with pytest.raises(ValueError):
        Var(1, 0)
    with pytest.raises(TypeError):
        substitute(P, {1: "t2"})


# --- multiplicity ----------------------------------------------------------------

def test_multiplicity_examples():
    one_minus = 1 - t(F3, 2, 0)
    assert multiplicity_at_t0(one_minus, 1) == 1
    assert multiplicity_at_t0(one_minus * one_minus, 1) == 2
    assert multiplicity_at_t0(MultiPoly.one(F3, 2), 1) == 0
    with pytest.raises(ValueError):
        multiplicity_at_t0(MultiPoly.zero(F3, 2), 1)


@pytest.mark.parametrize("ctx", [F2, F3, F5, F4])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_multiplicity_against_known_factorization(ctx, data):
    # (t0 - c)^m * R with R(c) != 0; m may exceed p, where derivatives would fail
    c = data.draw(st.integers(0, ctx.q - 1))
    m = data.draw(st.integers(0, 2 * ctx.p + 1))
    ce = FqElem.from_code(c, ctx)
    R = data.draw(polys(ctx, nvars=2, max_exp=3))
    if not R.eval_t0(ce):
        R = R + 1
    P = (t(ctx, 2, 0) - ce) ** m * R
    assert multiplicity_at_t0(P, ce) == m
    assert (multiplicity_at_t0(P, ce) >= 1) == (not P.eval_t0(ce))


# --- the kernel against the naive sum ----------------------------------------------

@pytest.mark.parametrize(
    "ctx, betas",
    [(F2, (1,)), (F2, (3, 1)), (F3, (2, 1)), (F3, (4,)), (F4, (1, 2)), (F4, (5,)), (F5, (1, 3)), (F9, (2,))],
)
def test_direct_kernel_matches_naive_sum(ctx, betas):
    zd = z_direct(betas, ctx)
    assert zd.poly == naive_z(betas, ctx, zd.phi)
