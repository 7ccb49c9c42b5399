"""Exact arithmetic in Q(lambda_p): canonical form, order, parsing."""

import math
import random
from fractions import Fraction

import pytest
import sympy

from conftest import field
from heckeforms import (
    ConsistencyError,
    ParseError,
    RingElem,
    UsageError,
    build_field,
    elem_from_json,
    elem_to_json,
    parse_elem,
    render_elem,
    sqrt_in_field,
)

# Minimal polynomials of 2cos(pi/p), constant term first.  The p=5, 12, 40
# rows were frozen from sympy.minimal_polynomial(2*cos(pi/p)) run separately;
# small p are cross-checked live below.
FROZEN_PSI = {
    3: (-1, 1),
    4: (-2, 0, 1),
    5: (-1, -1, 1),
    6: (-3, 0, 1),
    7: (1, -2, -1, 1),
    8: (2, 0, -4, 0, 1),
    12: (1, 0, -4, 0, 1),
    40: (1, 0, -48, 0, 316, 0, -664, 0, 659, 0, -352, 0, 104, 0, -16, 0, 1),
}


@pytest.mark.parametrize("p,psi", sorted(FROZEN_PSI.items()))
def test_min_poly_frozen(p, psi):
    ctx = field(p)
    assert ctx.min_poly == psi, f"p={p}: got {ctx.min_poly}"
    assert ctx.degree == len(psi) - 1


@pytest.mark.parametrize("p", range(3, 11))
def test_min_poly_matches_sympy(p):
    ctx = field(p)
    x = sympy.Symbol("x")
    ref = sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / p), x)
    ref_coeffs = tuple(int(c) for c in reversed(sympy.Poly(ref, x).all_coeffs()))
    assert ctx.min_poly == ref_coeffs, f"p={p}"


def test_lambda_satisfies_min_poly():
    for p in (3, 4, 5, 6, 7, 12):
        ctx = field(p)
        lam = ctx.lambda_elem
        acc = ctx.zero
        power = ctx.one
        for c in ctx.min_poly:
            acc = acc + power * c
            power = power * lam
        assert acc.is_zero(), f"Psi_{p}(lambda) != 0"


def test_lambda_small_cases():
    assert field(3).lambda_elem == field(3).one  # lambda_3 = 1
    lam4 = field(4).lambda_elem
    assert (lam4 * lam4).as_fraction() == 2  # lambda_4 = sqrt(2)
    lam5 = field(5).lambda_elem
    assert lam5 * lam5 == lam5 + 1  # golden ratio
    lam6 = field(6).lambda_elem
    assert (lam6 * lam6).as_fraction() == 3  # sqrt(3)


def test_context_validation():
    with pytest.raises(UsageError):
        build_field(2)
    with pytest.raises(UsageError):
        build_field(41)  # beyond default max_p
    with pytest.raises(UsageError):
        build_field("5")
    assert build_field(41, max_p=60).p == 41


def test_canonical_form():
    ctx = field(5)
    a = RingElem(ctx, [2, 4], 6)  # (2 + 4L)/6 -> (1 + 2L)/3
    assert a.coeffs == (1, 2) and a.denom == 3
    b = RingElem(ctx, [-1, -2], -3)  # negative denominators normalize away
    assert b == a
    c = RingElem(ctx, [0, 0, 1])  # L^2 reduces to L + 1
    assert c == ctx.lambda_elem + 1
    with pytest.raises(ZeroDivisionError):
        RingElem(ctx, [1], 0)


def _random_elem(ctx, rng, span=40):
    coeffs = [rng.randint(-span, span) for _ in range(ctx.degree)]
    return RingElem(ctx, coeffs, rng.randint(1, 12))


@pytest.mark.parametrize("p", [3, 5, 7, 12])
def test_ring_axioms_random(p):
    ctx = field(p)
    rng = random.Random(1000 + p)
    for _ in range(60):
        a, b, c = (_random_elem(ctx, rng) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == ctx.zero
        assert a + 0 == a and a * 1 == a
        if not a.is_zero():
            assert a * a.invert() == ctx.one


def test_invert_zero():
    with pytest.raises(ZeroDivisionError):
        field(5).zero.invert()


def _high_prec_value(a, bits=220):
    """Fraction of a 220-bit mpmath evaluation; error ~2^-210, far below any
    nonzero value these small integer combinations can take."""
    import mpmath
    from mpmath.libmp import to_rational

    with mpmath.workprec(bits):
        lam = 2 * mpmath.cos(mpmath.pi / a.ctx.p)
        acc = mpmath.mpf(0)
        for c in reversed(a.coeffs):
            acc = acc * lam + c
        acc = acc / a.denom
        n, d = to_rational(acc._mpf_)
    return Fraction(int(n), int(d))


@pytest.mark.parametrize("p", [4, 5, 7])
def test_sign_matches_high_precision(p):
    ctx = field(p)
    rng = random.Random(2000 + p)
    for _ in range(50):
        a = _random_elem(ctx, rng, span=9)
        val = _high_prec_value(a)
        if a.is_zero():
            assert a.sign() == 0
            continue
        assert abs(val) > Fraction(1, 10**40), f"reference value suspiciously small: {a!r}"
        assert a.sign() == (1 if val > 0 else -1), f"p={p} elem={a!r} approx={float(val)}"


@pytest.mark.parametrize("p", [3, 5, 7])
def test_floor_random(p):
    ctx = field(p)
    rng = random.Random(3000 + p)
    for _ in range(60):
        a = _random_elem(ctx, rng, span=15)
        if a.is_rational():
            assert a.floor() == a.as_fraction().numerator // a.as_fraction().denominator
            continue
        val = _high_prec_value(a)
        assert abs(val - round(val)) > Fraction(1, 10**40), f"too close to call: {a!r}"
        assert a.floor() == math.floor(val), f"p={p} elem={a!r}"


def test_compare_chain():
    ctx = field(5)
    lam = ctx.lambda_elem
    one = ctx.one
    # 1 < lambda_5 < 2 < lambda^2
    assert one.compare(lam) < 0
    assert lam.compare(ctx.elem(2)) < 0
    assert (lam * lam).compare(ctx.elem(2)) > 0
    assert lam.compare(lam) == 0


def test_enclosure_contains_value():
    ctx = field(7)
    a = parse_elem(ctx, "2L^2-L-1")
    lo, hi = a.enclosure(128)
    val = _high_prec_value(a)  # within 2^-210 of the true value
    assert lo <= val <= hi
    assert hi - lo < Fraction(1, 2**100)


def test_sqrt_in_field():
    ctx = field(5)
    lam = ctx.lambda_elem
    rng = random.Random(77)
    for _ in range(25):
        a = _random_elem(ctx, rng, span=8)
        if a.is_zero():
            continue
        r = sqrt_in_field(a * a)
        assert r is not None and r * r == a * a
        assert r.sign() > 0
    # lambda^2 + 4 = lambda + 5 is not a square in Q(lambda_5)
    assert sqrt_in_field(lam * lam + 4) is None
    assert sqrt_in_field(-ctx.one) is None
    assert sqrt_in_field(ctx.zero).is_zero()
    # pure rational side at p=3
    ctx3 = field(3)
    assert sqrt_in_field(ctx3.elem(49)).as_fraction() == 7
    assert sqrt_in_field(ctx3.elem(5)) is None
    assert sqrt_in_field(ctx3.elem(Fraction(9, 4))).as_fraction() == Fraction(3, 2)


def test_mixed_context_rejected():
    a = field(5).lambda_elem
    b = field(7).lambda_elem
    with pytest.raises(UsageError):
        a + b


@pytest.mark.parametrize("text,coeffs,denom", [
    ("3L+4", (4, 3), 1),
    ("-3L-2", (-2, -3), 1),
    ("0", (0, 0), 1),
    ("L", (0, 1), 1),
    ("(1/2)L^2-1", (-1, 1), 2),  # L^2 = L + 1 at p=5, so (L+1)/2 - 1
    ("(1/3)", (1, 0), 3),
    ("L^2", (1, 1), 1),
    ("2 - L + 3L", (2, 2), 1),
])
def test_parse_elem(text, coeffs, denom):
    e = parse_elem(field(5), text)
    assert (e.coeffs, e.denom) == (coeffs, denom), f"{text!r} -> {e!r}"


def test_parse_elem_errors():
    ctx = field(5)
    for bad in ("", "L +", "3x+4", "++1", "4 5"):
        with pytest.raises(ParseError):
            parse_elem(ctx, bad)
    with pytest.raises(ParseError):
        parse_elem(ctx, 12)


@pytest.mark.parametrize("p", [3, 5, 8])
def test_render_parse_round_trip(p):
    ctx = field(p)
    rng = random.Random(4000 + p)
    for _ in range(80):
        a = _random_elem(ctx, rng)
        assert parse_elem(ctx, render_elem(a)) == a, render_elem(a)


def test_render_frozen():
    ctx = field(5)
    assert render_elem(parse_elem(ctx, "3L+4")) == "3L+4"
    assert render_elem(parse_elem(ctx, "-3L-2")) == "-3L-2"
    assert render_elem(ctx.zero) == "0"
    assert render_elem(ctx.elem(Fraction(-1, 2))) == "-(1/2)"
    assert render_elem(parse_elem(ctx, "(1/2)L - (3/4)")) == "(1/2)L-(3/4)"
    ctx8 = field(8)
    assert render_elem(parse_elem(ctx8, "L^3 - 2L + 1")) == "L^3-2L+1"


@pytest.mark.parametrize("p", [3, 5, 12])
def test_json_round_trip(p):
    ctx = field(p)
    rng = random.Random(5000 + p)
    for _ in range(40):
        a = _random_elem(ctx, rng)
        assert elem_from_json(ctx, elem_to_json(a)) == a


def test_json_errors():
    ctx = field(5)
    with pytest.raises(ParseError):
        elem_from_json(ctx, {"coeffs": [1, 2]})
    with pytest.raises(ParseError):
        elem_from_json(ctx, {"coeffs": [1], "denom": 0})
