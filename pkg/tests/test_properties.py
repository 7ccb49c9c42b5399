"""Cross-module invariants on randomly generated hyperbolic classes, at small
counts; the heavy randomized sweep lives in the acceptance module."""

import random

import pytest

from conftest import field
from heckeforms import (
    NonClosingOrbitError,
    NonHyperbolicError,
    PeriodicCF,
    RootChoiceError,
    Surd,
    act,
    alpha_of,
    classify,
    discriminant,
    equivalent,
    evaluate_periodic,
    form_from_json,
    form_of,
    form_to_json,
    hecke_conjugate,
    is_reduced_form,
    is_reduced_number,
    leading_ones,
    mobius_apply,
    negate,
    parse_form,
    phi_apply,
    phi_orbit,
    proj_equal,
    reduce,
    reduced_cycle,
    render_form,
    simple_set,
    simple_to_reduced,
    stabilizer_generators,
    surd_compare,
    surd_equal_key,
    surd_sign,
    u_zero,
    word_to_matrix,
)


def hyperbolic_samples(ctx, rng, want, max_len=6, max_digit=4):
    """(word, fixed point) pairs for randomly drawn admissible periods."""
    out = []
    while len(out) < want:
        w = tuple(rng.randint(1, max_digit) for _ in range(rng.randint(1, max_len)))
        try:
            a = evaluate_periodic(ctx, PeriodicCF((), w))
        except (NonHyperbolicError, RootChoiceError):
            continue
        out.append((w, a))
    return out


@pytest.mark.parametrize("p", [3, 4, 5, 6, 7])
def test_simple_count_matches_exponents(p):
    ctx = field(p)
    rng = random.Random(70 + p)
    for w, a in hyperbolic_samples(ctx, rng, 5):
        cycle = reduced_cycle(form_of(a))
        if any(alpha_of(q).is_rational() for q in cycle.forms):
            continue  # rational shifts may leave the simple range
        count = sum(r - 1 for r in cycle.exponents)
        values = simple_set(cycle)
        assert len(values) == count, \
            f"p={p} word={w}: {len(values)} simple values for exponents {cycle.exponents}"


def test_cycle_rotation_invariance():
    ctx = field(5)
    base = reduced_cycle(parse_form(ctx, "[3L+4, -11L-3, L+2]"))
    n = len(base)
    for j in range(n):
        rotated = reduced_cycle(base.forms[j])
        assert rotated.forms == base.forms[j:] + base.forms[:j], f"start {j}"
        assert rotated.exponents == base.exponents[j:] + base.exponents[:j]
        assert rotated.cf_period_length == base.cf_period_length


@pytest.mark.parametrize("p", [4, 6])
def test_cycle_rotation_invariance_random(p):
    ctx = field(p)
    rng = random.Random(80 + p)
    for w, a in hyperbolic_samples(ctx, rng, 3):
        base = reduced_cycle(form_of(a))
        if len(base) != base.cf_period_length:
            continue  # early closure: rotations live on the shorter walk
        j = rng.randrange(len(base))
        rotated = reduced_cycle(base.forms[j])
        assert rotated.forms == base.forms[j:] + base.forms[:j], f"p={p} word={w}"


def test_equivalence_is_an_equivalence_on_the_cycle():
    ctx = field(5)
    q0 = parse_form(ctx, "[-3L-2, 27L+15, -51L-32]")
    cycle = reduced_cycle(parse_form(ctx, "[3L+4, -11L-3, L+2]"))
    members = (q0,) + cycle.forms
    for q in members:
        assert equivalent(q, q)
    for q1 in members:
        for q2 in members:
            verdict, witness = equivalent(q1, q2, with_witness=True)
            assert verdict
            assert act(q1, witness) == q2
            assert equivalent(q2, q1)


@pytest.mark.parametrize("p", [4, 5])
def test_stabilizer_fixes_both_roots(p):
    ctx = field(p)
    rng = random.Random(90 + p)
    for w, a in hyperbolic_samples(ctx, rng, 4):
        m, m_inv = stabilizer_generators(a)
        assert classify(m) == "hyperbolic"
        assert mobius_apply(m.raw(), a) == a
        assert mobius_apply(m_inv.raw(), a) == a
        if not a.is_rational():
            conj = hecke_conjugate(a)
            assert mobius_apply(m.raw(), conj) == conj
        # purely periodic point: the stabilizer is the period word itself
        assert proj_equal(m, word_to_matrix(ctx, w)), f"p={p} word={w}"
        t = m.a + m.d
        assert discriminant(form_of(a)) == t * t - 4


@pytest.mark.parametrize("p", [4, 5, 7])
def test_branch_boundaries_map_to_zero(p):
    ctx = field(p)
    zero = Surd.from_elem(ctx.zero)
    for k in range(2, p + 1):
        y, br = phi_apply(u_zero(ctx, k))
        assert br == p - k + 1, f"k={k}: branch {br}"
        assert y == zero, f"k={k}"
    with pytest.raises(NonClosingOrbitError):
        phi_orbit(u_zero(ctx, 2), max_steps=50)


@pytest.mark.parametrize("p", [3, 5, 6])
def test_form_number_round_trip_random(p):
    ctx = field(p)
    rng = random.Random(100 + p)
    for w, a in hyperbolic_samples(ctx, rng, 3):
        q = form_of(a)
        assert alpha_of(q) == a, f"p={p} word={w}"
        v = word_to_matrix(ctx, tuple(rng.randint(1, 4) for _ in range(2)))
        moved = act(q, v)
        assert discriminant(moved) == discriminant(q)
        assert equivalent(moved, q)


@pytest.mark.parametrize("p", [3, 5])
def test_reduce_lands_on_reduced(p):
    ctx = field(p)
    rng = random.Random(110 + p)
    for w, a in hyperbolic_samples(ctx, rng, 3):
        v = word_to_matrix(ctx, tuple(rng.randint(1, 4) for _ in range(3)))
        start = act(form_of(a), v)
        trace = reduce(start)
        assert is_reduced_form(trace.terminal), f"p={p} word={w}"
        assert is_reduced_number(alpha_of(trace.terminal)) is not None
        # replaying the recorded steps recovers the terminal form
        cur = start
        for frm, mat, _r in trace.steps:
            assert frm == cur
            cur = act(cur, mat)
        assert cur == trace.terminal


@pytest.mark.parametrize("p", [4, 6])
def test_simple_orbit_closure_matches_simple_set(p):
    ctx = field(p)
    rng = random.Random(120 + p)
    for w, a in hyperbolic_samples(ctx, rng, 2):
        cycle = reduced_cycle(form_of(a))
        values = simple_set(cycle)
        keys = {surd_equal_key(v) for v in values}
        for v in values:
            orbit = phi_orbit(v)
            assert len(orbit) == len(values), f"p={p} word={w}"
            assert {surd_equal_key(x) for x in orbit.values} == keys
            shifted, n = simple_to_reduced(v)
            assert n >= 1
            assert is_reduced_number(shifted) is not None


@pytest.mark.parametrize("p", [3, 5, 8])
def test_purely_periodic_reduced_count(p):
    ctx = field(p)
    rng = random.Random(130 + p)
    for w, a in hyperbolic_samples(ctx, rng, 4):
        k = is_reduced_number(a)
        assert k == leading_ones(w), f"p={p} word={w}: k={k}"
        assert surd_sign(a) > 0
        if not a.is_rational():
            conj = hecke_conjugate(a)
            assert surd_sign(conj) > 0
            assert surd_compare(a, conj) > 0


@pytest.mark.parametrize("p", [5, 7])
def test_form_serialization_round_trip(p):
    ctx = field(p)
    rng = random.Random(140 + p)
    for w, a in hyperbolic_samples(ctx, rng, 3):
        for q in reduced_cycle(form_of(a)).forms:
            assert parse_form(ctx, render_form(q)) == q
            assert form_from_json(ctx, form_to_json(q)) == q
            assert parse_form(ctx, render_form(negate(q))) == negate(q)
