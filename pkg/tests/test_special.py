import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specpoly.digits import length_l
from specpoly.field import field_create
from specpoly.polyring import BudgetExceeded, MultiPoly, Var, degree_in_t0, pretty, substitute
from specpoly.special import (
    TheoremViolation,
    cache_key,
    cached_z,
    collapse_map,
    frobenius_twist_check,
    normalize_betas,
    ones_degree,
    phi_degree,
    phi_degree_unreduced,
    specialize_ones,
    witness_specialization,
    z_direct,
    z_general,
    z_recursive_ones,
    z_via_ones,
)

from oracle import literal_ones, naive_z

F2, F3, F4, F5, F8, F9 = (field_create(*pe) for pe in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)])
FIELDS = [F2, F3, F4, F5]


# --- spec examples -----------------------------------------------------------------

def test_empty_tuple_is_one():
    for ctx in FIELDS:
        for method in ("direct", "via_ones"):
            z = z_general((), ctx, method)
            assert z.poly == MultiPoly.one(ctx, 1)
    assert z_recursive_ones(0, F3).poly == MultiPoly.one(F3, 1)


def test_q2_single_one():
    assert pretty(z_direct((1,), F2).poly) == "1 + t0"


def test_q3_pair_of_ones_is_one_minus_t0():
    for method in ("direct", "via_ones"):
        assert pretty(z_general((1, 1), F3, method).poly) == "1 + 2*t0"


def test_q2_beta_two():
    # z(2, t0) = 1 + t0; its twist z(2, t0^2) = (1 + t0)^2 is 1 + t0^2
    z = z_general((2,), F2, "via_ones").poly
    assert z == z_direct((2,), F2).poly == naive_z((2,), F2, 4)
    assert pretty(z) == "1 + t0"
    assert pretty(substitute(z, {0: Var(0, 2)})) == "1 + t0^2"


@pytest.mark.parametrize("ctx", [F3, F4, F5, F8, F9])
def test_ones_below_q_minus_1_is_one(ctx):
    for s in range(1, ctx.q - 1):
        assert z_recursive_ones(s, ctx).poly == MultiPoly.one(ctx, s + 1)
    z = z_recursive_ones(ctx.q - 1, ctx).poly
    assert z.t0_coefficients()[1] == MultiPoly.const(ctx, ctx.q, -1)
    assert degree_in_t0(z) == 1


def test_single_digit_block():
    # beta = q^k: one variable sent to t1^(q^k)
    for ctx in (F2, F3, F4):
        for k in range(3):
            beta = ctx.q**k
            expect = substitute(z_recursive_ones(1, ctx).poly, {1: Var(1, beta)})
            assert z_via_ones((beta,), ctx).poly == expect


def test_phi_examples():
    assert phi_degree((5,), F3) == 1
    assert phi_degree((3,), F4) == 1
    assert phi_degree((), F3) == 0
    for ctx in FIELDS:
        for s in range(10):
            assert phi_degree((1,) * s, ctx) == s // (ctx.q - 1)


@pytest.mark.parametrize("ctx", [F4, F8, F9, F2, F3])
@given(st.lists(st.integers(1, 2000), min_size=1, max_size=4))
def test_phi_period_reduction(ctx, betas):
    assert phi_degree(betas, ctx) == phi_degree_unreduced(betas, ctx, 3 * ctx.e)


def test_normalization_drops_zeros():
    assert normalize_betas((0, 3, 0, 2)) == ((3, 2), [2, 4])
    z = z_direct((0, 2, 0), F3).poly
    assert z.nvars == 4
    assert z == z_direct((2,), F3).poly.embed_vars(4, [0, 2])
    assert z == z_via_ones((0, 2, 0), F3).poly


# --- the recursion -------------------------------------------------------------------

@pytest.mark.parametrize("ctx", FIELDS + [F9])
def test_ones_against_literal_recursion(ctx):
    for s in range(7):
        assert z_recursive_ones(s, ctx).poly == literal_ones(s, ctx)


@pytest.mark.parametrize("ctx", [F2, F3, F4])
def test_ones_against_naive_sum(ctx):
    for s in range(5):
        phi = s // (ctx.q - 1)
        assert z_recursive_ones(s, ctx).poly == naive_z((1,) * s, ctx, phi)


@pytest.mark.parametrize("ctx", FIELDS)
def test_ones_degree(ctx):
    for s in range(13):
        assert ones_degree(s, ctx) == s // (ctx.q - 1)
    for s in range(8):
        z = z_recursive_ones(s, ctx)
        assert degree_in_t0(z.poly) == ones_degree(s, ctx)
        assert z.poly.terms[(0,) * (s + 1)] == ctx.one


def test_ones_symmetric():
    z = z_recursive_ones(4, F3).poly
    for perm in itertools.permutations(range(1, 5)):
        assert z.embed_vars(5, [0, *perm]) == z


def test_recursive_ones_refuses_huge_expansion():
    with pytest.raises(BudgetExceeded):
        z_recursive_ones(16, F2, max_terms=1000)


@pytest.mark.parametrize("ctx, betas", [(F2, (3, 2)), (F3, (4, 1)), (F4, (6,)), (F5, (7, 2))])
def test_orbit_substitution_matches_generic_substitute(ctx, betas):
    L = sum(length_l(b, ctx.q) for b in betas)
    expanded = z_recursive_ones(L, ctx).poly
    generic = substitute(expanded, collapse_map(betas, ctx.q), nvars=len(betas) + 1)
    assert specialize_ones(betas, ctx) == generic


# --- the two routes agree --------------------------------------------------------------

@pytest.mark.parametrize("ctx", FIELDS + [F9, F8])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_direct_equals_via_ones(ctx, data):
    betas = data.draw(st.lists(st.integers(0, 7), max_size=3))
    zd = z_direct(betas, ctx)
    zv = z_via_ones(betas, ctx)
    assert zd.poly == zv.poly
    assert zd.provenance == "direct" and zv.provenance == "recursive"


@pytest.mark.parametrize("ctx", [F2, F3, F4])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_reordering_permutes_variables(ctx, data):
    betas = data.draw(st.lists(st.integers(1, 6), min_size=2, max_size=4))
    perm = data.draw(st.permutations(range(len(betas))))
    reordered = [betas[i] for i in perm]
    z = z_via_ones(betas, ctx).poly
    # variable i+1 of z plays the role of position perm.index(i) in the reordered tuple
    moved = z.embed_vars(len(betas) + 1, [0] + [perm.index(i) + 1 for i in range(len(betas))])
    assert moved == z_direct(reordered, ctx).poly


def test_constant_term_is_one():
    for ctx in FIELDS:
        for betas in [(1,), (2, 3), (4, 4, 1)]:
            assert z_via_ones(betas, ctx).poly.terms[(0,) * (len(betas) + 1)] == ctx.one


# --- the direct route's guards ------------------------------------------------------------

def test_budget_names_failing_degree():
    with pytest.raises(BudgetExceeded) as info:
        z_direct((1,), F2, d_max=30)
    assert info.value.d == 24


def test_tripwire_fires_on_corrupted_kernel(monkeypatch):
    from specpoly import _kernel

    real = _kernel.direct_coefficient

    def corrupt(betas, d, ctx):
        out = real(betas, d, ctx)
        if d == 2:
            out = dict(out)
            out[(0,) * len(betas)] = ctx.one
        return out

    monkeypatch.setattr(_kernel, "direct_coefficient", corrupt)
    with pytest.raises(TheoremViolation):
        z_direct((1,), F2)


def test_unknown_method():
    with pytest.raises(ValueError):
        z_general((1,), F2, "guess")


# --- Frobenius twist --------------------------------------------------------------------

def test_twist_examples():
    assert frobenius_twist_check((1,), 0, F2).ok
    chk = frobenius_twist_check((1,), 1, F2)
    assert chk.ok and pretty(chk.lhs) == "1 + t0^2"
    chk = frobenius_twist_check((1, 1), 1, F3)
    assert chk.ok and pretty(chk.lhs) == "1 + 2*t0^3"


@pytest.mark.parametrize("ctx", [F2, F3, F4, F9])
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_twist_both_methods(ctx, data):
    betas = data.draw(st.lists(st.integers(1, 4), min_size=1, max_size=2))
    i = data.draw(st.integers(0, 2 * ctx.e))
    assert frobenius_twist_check(betas, i, ctx, method="via_ones").ok
    if i <= ctx.e:
        assert frobenius_twist_check(betas, i, ctx, method="direct").ok


# --- the witness ------------------------------------------------------------------------

def test_witness_examples():
    w = witness_specialization((7,), F3)
    assert w.ms == [] and w.B == 7 and w.mapping == {1: Var(1, 1)}
    w = witness_specialization((1, 1), F2)
    assert w.ms == [1] and w.B == 3
    w = witness_specialization((2, 2), F3)
    assert w.ms == [1] and w.B == 8 and length_l(8, 3) == 4


@pytest.mark.parametrize("ctx", [F2, F3, F4, F9])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_witness_specializes(ctx, data):
    betas = data.draw(st.lists(st.integers(1, 6), min_size=1, max_size=3))
    w = witness_specialization(betas, ctx)
    z = z_via_ones(betas, ctx).poly
    assert substitute(z, w.mapping, nvars=2) == z_direct((w.B,), ctx).poly
    best = min(length_l(ctx.p**i * w.B, ctx.q) for i in range(ctx.e))
    assert phi_degree(betas, ctx) == best // (ctx.q - 1)


def test_witness_rejects_zero():
    with pytest.raises(ValueError):
        witness_specialization((1, 0), F3)


# --- cache ------------------------------------------------------------------------------

def test_cache_hit_is_bit_identical(tmp_path):
    first = cached_z((3, 2), F4, "via_ones", tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].name == cache_key(F4, (3, 2), "via_ones") + ".json"
    blob = files[0].read_bytes()
    second = cached_z((3, 2), F4, "via_ones", tmp_path)
    assert second.poly == first.poly and second.provenance == "recursive"
    assert json.dumps(second.to_json(), sort_keys=True).encode() == blob
    assert cache_key(F4, (3, 2), "direct") != cache_key(F4, (3, 2), "via_ones")
