"""Exact arithmetic in Q(lambda_p), where lambda_p = 2cos(pi/p).

Elements are integer coefficient vectors in the power basis 1, lambda, ...,
lambda^(d-1) over a single positive denominator, reduced modulo the minimal
polynomial Psi_p of lambda_p (d = phi(2p)/2).  All order relations refer to
the distinguished real embedding lambda -> 2cos(pi/p): an exact zero test on
the canonical form first, then certified interval evaluation (dyadic
enclosures of 2cos(pi/p), exact Fraction interval Horner) refined until zero
is excluded.
"""

import itertools
import math
import re
from fractions import Fraction
from functools import reduce as _fold
from math import gcd, isqrt

import mpmath
import sympy
from mpmath.libmp import to_rational

from .errors import ConsistencyError, ParseError, UsageError

DEFAULT_MAX_P = 40
_SIGN_BITS_CAP = 1 << 22


def _psi_poly(p):
    """Minimal polynomial of 2cos(pi/p): fold the palindromic 2p-th cyclotomic
    polynomial into x = z + 1/z using the integer basis V_k = z^k + z^-k."""
    z = sympy.Symbol("z")
    coeffs = [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(2 * p, z), z).all_coeffs()]
    coeffs.reverse()  # constant term first
    if coeffs != coeffs[::-1] or (len(coeffs) - 1) % 2 != 0:
        raise ConsistencyError("cyclotomic polynomial for 2p=%d is not an even palindrome" % (2 * p))
    d = (len(coeffs) - 1) // 2
    out = [0] * (d + 1)
    out[0] = coeffs[d]
    vk_prev, vk = [2], [0, 1]  # V_0, V_1
    for k in range(1, d + 1):
        a = coeffs[d - k]
        if a:
            for i, c in enumerate(vk):
                out[i] += a * c
        if k < d:
            nxt = [0] + vk  # x * V_k
            for i, c in enumerate(vk_prev):
                nxt[i] -= c
            vk_prev, vk = vk, nxt
    if out[d] != 1:
        raise ConsistencyError("folded minimal polynomial is not monic")
    return tuple(out)


def _reduce_vec(vec, psi):
    """Reduce an integer coefficient vector modulo the monic polynomial psi."""
    d = len(psi) - 1
    vec = list(vec)
    for k in range(len(vec) - 1, d - 1, -1):
        carry = vec[k]
        if carry:
            vec[k] = 0
            for i in range(d):
                vec[k - d + i] -= carry * psi[i]
    return vec[:d]


def _horner_interval(vec, denom, lam_lo, lam_hi):
    """Certified Fraction interval for (sum vec[i]*lambda^i) / denom."""
    lo = hi = Fraction(vec[-1])
    for c in reversed(vec[:-1]):
        p1, p2, p3, p4 = lo * lam_lo, lo * lam_hi, hi * lam_lo, hi * lam_hi
        lo = min(p1, p2, p3, p4) + c
        hi = max(p1, p2, p3, p4) + c
    if denom != 1:
        lo, hi = lo / denom, hi / denom
    return lo, hi


class FieldContext:
    """Shared, immutable arithmetic context for one Q(lambda_p)."""

    def __init__(self, p, max_p=DEFAULT_MAX_P, start_bits=64):
        if not isinstance(p, int) or isinstance(p, bool):
            raise UsageError("p must be an integer, got %r" % (p,))
        if p < 3:
            raise UsageError("p must be >= 3, got %d" % p)
        if p > max_p:
            raise UsageError("p=%d exceeds the supported bound max_p=%d" % (p, max_p))
        if start_bits < 8:
            raise UsageError("precision must be at least 8 bits")
        self.p = p
        self.start_bits = start_bits
        self.min_poly = _psi_poly(p)
        self.degree = len(self.min_poly) - 1
        self.embedding_ks = tuple(k for k in range(1, p + 1) if gcd(k, 2 * p) == 1)
        if len(self.embedding_ks) != self.degree:
            raise ConsistencyError("embedding count %d != degree %d" % (len(self.embedding_ks), self.degree))
        self.lambda_float = 2.0 * math.cos(math.pi / p)
        self._iv = mpmath.ctx_iv.MPIntervalContext()
        self._encl = {}
        self._sqrt_cache = {}
        self.zero = RingElem(self, [0])
        self.one = RingElem(self, [1])
        self.lambda_elem = RingElem(self, [0, 1] if self.degree > 1 else [1])
        self._c_cache = [self.zero, self.one]  # c_0, c_1 for the group layer
        self.embedding_seed = self.lambda_enclosure(start_bits)

    def conj_enclosure(self, k, bits):
        """Certified dyadic enclosure of the conjugate embedding 2cos(k*pi/p)."""
        key = (k, bits)
        pair = self._encl.get(key)
        if pair is None:
            ivc = self._iv
            ivc.prec = bits + 8
            x = 2 * ivc.cos(ivc.pi * k / self.p)
            lo, hi = x._mpi_
            ln, ld = to_rational(lo)
            hn, hd = to_rational(hi)
            pair = (Fraction(int(ln), int(ld)), Fraction(int(hn), int(hd)))
            self._encl[key] = pair
        return pair

    def lambda_enclosure(self, bits):
        return self.conj_enclosure(1, bits)

    def elem(self, value):
        """Coerce an int or Fraction into a RingElem of this context."""
        if isinstance(value, RingElem):
            return value
        if isinstance(value, Fraction):
            return RingElem(self, [value.numerator], value.denominator)
        return RingElem(self, [value])

    def from_fractions(self, fracs):
        """RingElem from a coefficient vector of Fractions."""
        fracs = [Fraction(f) for f in fracs]
        den = _fold(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fracs), 1)
        return RingElem(self, [int(f * den) for f in fracs], den)

    def __repr__(self):
        return "FieldContext(p=%d)" % self.p


class RingElem:
    """One element of Q(lambda_p) in canonical form: integer coefficients with
    joint content 1 against a positive denominator."""

    __slots__ = ("ctx", "coeffs", "denom", "_sign")

    def __init__(self, ctx, coeffs, denom=1):
        if denom == 0:
            raise ZeroDivisionError("zero denominator")
        vec = list(coeffs)
        if len(vec) > ctx.degree:
            vec = _reduce_vec(vec, ctx.min_poly)
        elif len(vec) < ctx.degree:
            vec = vec + [0] * (ctx.degree - len(vec))
        if denom < 0:
            denom = -denom
            vec = [-c for c in vec]
        g = _fold(gcd, vec, denom)
        if g > 1:
            denom //= g
            vec = [c // g for c in vec]
        self.ctx = ctx
        self.coeffs = tuple(vec)
        self.denom = denom
        self._sign = None

    # -- ring structure -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.ctx is not self.ctx and other.ctx.p != self.ctx.p:
                raise UsageError("mixed field contexts (p=%d vs p=%d)" % (self.ctx.p, other.ctx.p))
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ctx.elem(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.denom, other.denom
        if a == b:
            return RingElem(self.ctx, [x + y for x, y in zip(self.coeffs, other.coeffs)], a)
        return RingElem(self.ctx, [x * b + y * a for x, y in zip(self.coeffs, other.coeffs)], a * b)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ctx, [-c for c in self.coeffs], self.denom)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self.ctx.degree
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        conv[i + j] += x * y
        return RingElem(self.ctx, conv, self.denom * other.denom)

    __rmul__ = __mul__

    def invert(self):
        """Multiplicative inverse via extended Euclid modulo the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(lambda_p)")
        if self.is_rational():
            return RingElem(self.ctx, [self.denom], self.coeffs[0])
        r0 = [Fraction(c) for c in self.ctx.min_poly]
        r1 = [Fraction(c, self.denom) for c in self.coeffs]
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1 or r1[0] == 0:
            raise ConsistencyError("gcd with the minimal polynomial degenerated")
        return self.ctx.from_fractions([c / r1[0] for c in s1])

    # -- predicates and order -------------------------------------------

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("element is irrational")
        return Fraction(self.coeffs[0], self.denom)

    def sign(self):
        """Exact sign under the distinguished embedding."""
        if self._sign is None:
            self._sign = self._computed_sign()
        return self._sign

    def _computed_sign(self):
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coeffs[0] > 0 else -1
        bits = self.ctx.start_bits
        while True:
            llo, lhi = self.ctx.lambda_enclosure(bits)
            lo, hi = _horner_interval(self.coeffs, 1, llo, lhi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if bits > _SIGN_BITS_CAP:
                raise ConsistencyError("sign refinement did not converge for %r" % (self,))
            bits *= 2

    def enclosure(self, bits):
        """Certified Fraction interval containing the element's value."""
        llo, lhi = self.ctx.lambda_enclosure(bits)
        return _horner_interval(self.coeffs, self.denom, llo, lhi)

    def approx(self):
        """Float estimate (not certified); for candidate selection only."""
        x = self.ctx.lambda_float
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc / self.denom

    def floor(self):
        """Largest integer <= the element, exact."""
        if self.is_rational():
            return self.coeffs[0] // self.denom
        # An irrational value is never an integer (power-basis independence),
        # so interval refinement alone terminates.
        bits = self.ctx.start_bits
        while True:
            lo, hi = self.enclosure(bits)
            fl, fh = math.floor(lo), math.floor(hi)
            if fl == fh:
                return int(fl)
            if bits > _SIGN_BITS_CAP:
                raise ConsistencyError("floor refinement did not converge for %r" % (self,))
            bits *= 2

    def compare(self, other):
        return (self - other).sign()

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, RingElem) else other
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.coeffs == other.coeffs and self.denom == other.denom

    def __hash__(self):
        return hash((self.coeffs, self.denom))

    def __repr__(self):
        return "RingElem(p=%d, %s)" % (self.ctx.p, render_elem(self))


# -- polynomial helpers over Fraction lists (lowest degree first) --------


def _poly_divmod(num, den):
    num = list(num)
    dn = len(den) - 1
    q = [Fraction(0)] * max(1, len(num) - dn)
    lead = den[-1]
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k] / lead
        if c:
            q[k - dn] = c
            for i, dc in enumerate(den):
                num[k - dn + i] -= c * dc
    rem = num[:dn]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return q, rem


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    for i, c in enumerate(b):
        a[i] -= c
    return a


# -- square roots in Q(lambda_p) ----------------------------------------


def sqrt_in_field(a):
    """Return x with x*x == a and x > 0 if such an x exists in Q(lambda_p),
    else None.  Complete for p=3; for larger p a bounded reconstruct-and-verify
    heuristic (a missed root only surfaces later as a periodicity failure)."""
    ctx = a.ctx
    s = a.sign()
    if s < 0:
        return None
    if s == 0:
        return ctx.zero
    if ctx.degree == 1:
        n, m = a.coeffs[0], a.denom
        t = isqrt(n * m)
        return RingElem(ctx, [t], m) if t * t == n * m else None
    key = (a.coeffs, a.denom)
    if key in ctx._sqrt_cache:
        return ctx._sqrt_cache[key]
    root = _sqrt_search(a)
    ctx._sqrt_cache[key] = root
    return root


def _conj_sign(a, k):
    """Certified sign of the conjugate embedding of a nonzero element."""
    bits = a.ctx.start_bits
    while True:
        llo, lhi = a.ctx.conj_enclosure(k, bits)
        lo, hi = _horner_interval(a.coeffs, 1, llo, lhi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if bits > _SIGN_BITS_CAP:
            raise ConsistencyError("conjugate sign refinement did not converge")
        bits *= 2


def _sqrt_search(a):
    ctx = a.ctx
    d = ctx.degree
    for k in ctx.embedding_ks:
        if _conj_sign(a, k) < 0:
            return None  # certified: no real square root in any embedding order
    # Every conjugate is positive; reconstruct candidate coefficient vectors
    # from +/- sqrt of the conjugate values and verify exactly.
    old_dps = mpmath.mp.dps
    try:
        mpmath.mp.dps = 60
        roots = [2 * mpmath.cos(mpmath.pi * k / ctx.p) for k in ctx.embedding_ks]
        vals = []
        for r in roots:
            acc = mpmath.mpf(0)
            for c in reversed(a.coeffs):
                acc = acc * r + c
            vals.append(acc / a.denom)
        sqrts = [mpmath.sqrt(v) for v in vals]
        vmat = mpmath.matrix([[r ** i for i in range(d)] for r in roots])
        free = min(d, 8)
        for signs in itertools.product((1, -1), repeat=free):
            rhs = mpmath.matrix([sq * (signs[i] if i < free else 1) for i, sq in enumerate(sqrts)])
            try:
                sol = mpmath.lu_solve(vmat, rhs)
            except ZeroDivisionError:
                return None
            fracs = [Fraction(float(x)).limit_denominator(10 ** 6) for x in sol]
            cand = ctx.from_fractions(fracs)
            if cand * cand == a:
                return cand if cand.sign() > 0 else -cand
    finally:
        mpmath.mp.dps = old_dps
    return None


# -- parsing and rendering ----------------------------------------------

_TERM_RE = re.compile(
    r"\s*(?:(?P<sign>[+-])\s*)?"
    r"(?:\(\s*(?P<num>[+-]?\d+)\s*/\s*(?P<den>\d+)\s*\)|(?P<int>\d+))?"
    r"\s*\*?\s*"
    r"(?:(?P<lam>[lL])\s*(?:\^\s*(?P<exp>\d+))?)?"
)


def parse_elem(ctx, text):
    """Parse element text like "3L+4", "(1/2)L^2-1" or "0" into a RingElem."""
    if not isinstance(text, str):
        raise ParseError("element text must be a string")
    pos, first = 0, True
    terms = {}
    n = len(text)
    while pos < n:
        m = _TERM_RE.match(text, pos)
        has_coeff = m.group("num") is not None or m.group("int") is not None
        has_lam = m.group("lam") is not None
        if not (has_coeff or has_lam):
            if text[pos:].strip() == "":
                break
            raise ParseError("expected a term", pos)
        if not first and m.group("sign") is None:
            raise ParseError("expected '+' or '-' between terms", pos)
        if m.group("num") is not None:
            coeff = Fraction(int(m.group("num")), int(m.group("den")))
        elif m.group("int") is not None:
            coeff = Fraction(int(m.group("int")))
        else:
            coeff = Fraction(1)
        if m.group("sign") == "-":
            coeff = -coeff
        exp = 0
        if has_lam:
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
        terms[exp] = terms.get(exp, Fraction(0)) + coeff
        pos, first = m.end(), False
    if first:
        raise ParseError("empty element", 0)
    top = max(terms)
    fracs = [terms.get(e, Fraction(0)) for e in range(top + 1)]
    den = _fold(lambda x, y: x * y // gcd(x, y), (f.denominator for f in fracs), 1)
    return RingElem(ctx, [int(f * den) for f in fracs], den)


def render_elem(e):
    """Canonical text for an element; parse_elem inverts it exactly."""
    parts = []
    for k in range(e.ctx.degree - 1, -1, -1):
        c = e.coeffs[k]
        if not c:
            continue
        f = Fraction(c, e.denom)
        sign = "-" if f < 0 else "+"
        f = abs(f)
        if f.denominator == 1:
            mag = str(f.numerator)
        else:
            mag = "(%d/%d)" % (f.numerator, f.denominator)
        if k == 0:
            body = mag
        else:
            lam = "L" if k == 1 else "L^%d" % k
            body = lam if mag == "1" else mag + lam
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(sign + body)
    return "".join(parts) if parts else "0"


def elem_to_json(e):
    return {"coeffs": list(e.coeffs), "denom": e.denom}


def elem_from_json(ctx, obj):
    try:
        coeffs = [int(c) for c in obj["coeffs"]]
        denom = int(obj["denom"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("element JSON must have integer 'coeffs' and 'denom'")
    if denom == 0:
        raise ParseError("element JSON denominator must be nonzero")
    return RingElem(ctx, coeffs, denom)


# -- operation aliases matching the public surface -----------------------


def build_field(p, max_p=DEFAULT_MAX_P, start_bits=64):
    """Construct the arithmetic context for Q(lambda_p)."""
    return FieldContext(p, max_p=max_p, start_bits=start_bits)


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def neg(a):
    return -a


def mul(a, b):
    return a * b


def invert(a):
    return a.invert()


def sign(a):
    return a.sign()


def compare(a, b):
    return a.compare(b)


def floor(a):
    return a.floor()
