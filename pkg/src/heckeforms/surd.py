"""Real quadratic surds (P + Q*sqrt(D))/R over Q(lambda_p), plus infinity.

Canonical form: P, Q, R are coefficient-integral field elements with joint
content 1 and R's distinguished embedding positive; Q = 0 drops the radicand
(rational point), R = 0 encodes the point at infinity.  Signs and comparisons
are exact: a rational-part sign split first, with the product with the
conjugate deciding mixed-sign cases.
"""

import math
from fractions import Fraction
from functools import reduce as _fold
from math import gcd, isqrt

from .errors import (
    ConsistencyError,
    DomainError,
    IncompatibleRadicandError,
    ParseError,
    SquareRadicandError,
)
from .ring import (
    RingElem,
    _SIGN_BITS_CAP,
    elem_from_json,
    elem_to_json,
    parse_elem,
    render_elem,
    sqrt_in_field,
)


class Surd:
    """One extended point: (P + Q*sqrt(D))/R in canonical form."""

    __slots__ = ("ctx", "P", "Q", "R", "D")

    def __init__(self, ctx, P, Q, R, D):
        if R.is_zero():
            self.ctx = ctx
            self.P, self.Q, self.R = ctx.one, ctx.zero, ctx.zero
            self.D = None
            return
        if Q.is_zero():
            D = None
            Q = ctx.zero
        # Normalize by R so equal values share one component triple: units of
        # Z[lambda_p] would otherwise let content-reduced triples differ.
        if R.is_rational():
            scale = Fraction(R.denom, R.coeffs[0])
            x = P * scale
            y = Q * scale
        else:
            rinv = R.invert()
            x = P * rinv
            y = Q * rinv
        m = x.denom * y.denom // gcd(x.denom, y.denom)
        pv = [c * (m // x.denom) for c in x.coeffs]
        qv = [c * (m // y.denom) for c in y.coeffs]
        g = _fold(gcd, pv + qv, m)
        if g > 1:
            pv = [c // g for c in pv]
            qv = [c // g for c in qv]
            m //= g
        self.ctx = ctx
        self.P = RingElem(ctx, pv)
        self.Q = RingElem(ctx, qv)
        self.R = ctx.elem(m)
        self.D = D

    @classmethod
    def infinite(cls, ctx):
        return cls(ctx, ctx.one, ctx.zero, ctx.zero, None)

    @classmethod
    def from_elem(cls, e):
        return cls(e.ctx, e, e.ctx.zero, e.ctx.one, None)

    def is_infinite(self):
        return self.R.is_zero()

    def is_rational(self):
        """Rational over Q(lambda_p), i.e. no radical part."""
        return self.D is None and not self.is_infinite()

    def value_elem(self):
        if not self.is_rational():
            raise DomainError("value is not in Q(lambda_p)")
        return self.P * self.R.invert()

    def __neg__(self):
        if self.is_infinite():
            return self
        return Surd(self.ctx, -self.P, -self.Q, self.R, self.D)

    def shift(self, k):
        """Translate by k*lambda (the parabolic generator acting k times)."""
        if self.is_infinite():
            return self
        return Surd(self.ctx, self.P + self.ctx.lambda_elem * (k * self.R), self.Q, self.R, self.D)

    def conjugate(self):
        """Flip the sign of the radical: sqrt(D) -> -sqrt(D)."""
        if self.is_infinite():
            return self
        return Surd(self.ctx, self.P, -self.Q, self.R, self.D)

    def approx(self):
        """Float estimate (not certified)."""
        if self.is_infinite():
            return math.inf
        v = self.P.approx()
        if self.D is not None:
            v += self.Q.approx() * math.sqrt(max(self.D.approx(), 0.0))
        return v / self.R.approx()

    def enclosure(self, bits):
        """Certified Fraction interval for the value."""
        if self.is_infinite():
            raise DomainError("no enclosure for infinity")
        plo, phi = self.P.enclosure(bits)
        rlo, rhi = self.R.enclosure(bits)
        if self.D is None:
            nlo, nhi = plo, phi
        else:
            qlo, qhi = self.Q.enclosure(bits)
            dlo, dhi = self.D.enclosure(bits)
            if dlo < 0:
                dlo = Fraction(0)
            slo, shi = _sqrt_interval(dlo, dhi, bits)
            mlo, mhi = _ival_mul(qlo, qhi, slo, shi)
            nlo, nhi = plo + mlo, phi + mhi
        if rlo <= 0:
            return None  # denominator interval not yet sign-definite
        return _ival_div(nlo, nhi, rlo, rhi)

    def __eq__(self, other):
        """Exact value equality (radicands may differ by square factors)."""
        if not isinstance(other, Surd):
            return NotImplemented
        if self.is_infinite() or other.is_infinite():
            return self.is_infinite() and other.is_infinite()
        if self.is_rational() != other.is_rational():
            return False
        cross = self.P * other.R == other.P * self.R
        if self.is_rational():
            return cross
        if not cross or self.Q.sign() != other.Q.sign():
            return False
        a = (self.Q * other.R)
        b = (other.Q * self.R)
        return a * a * self.D == b * b * other.D

    def __hash__(self):
        return hash(surd_equal_key(self))

    def __repr__(self):
        return "Surd(p=%d, %s)" % (self.ctx.p, render_surd(self))


ExtendedPoint = Surd


def _ival_mul(alo, ahi, blo, bhi):
    ps = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return min(ps), max(ps)


def _ival_div(alo, ahi, blo, bhi):
    # requires 0 < blo <= bhi
    ps = (alo / blo, alo / bhi, ahi / blo, ahi / bhi)
    return min(ps), max(ps)


def _sqrt_interval(lo, hi, bits):
    """[slo, shi] with slo <= sqrt(lo), sqrt(hi) <= shi, for 0 <= lo <= hi."""
    scale = 1 << bits
    slo = Fraction(isqrt((lo.numerator * scale * scale) // lo.denominator), scale)
    shi = Fraction(isqrt((hi.numerator * scale * scale) // hi.denominator) + 1, scale)
    return slo, shi


def infinity(ctx):
    return Surd.infinite(ctx)


def make_surd(P, Q, R, D):
    """Validated construction of (P + Q*sqrt(D))/R; D must be a positive
    non-square when the radical part is present."""
    ctx = P.ctx
    if R.is_zero():
        raise DomainError("zero denominator in surd")
    if not Q.is_zero():
        if D is None:
            raise DomainError("radical part present but no radicand given")
        if D.sign() <= 0:
            raise DomainError("radicand must be positive, got %s" % render_elem(D))
        root = sqrt_in_field(D)
        if root is not None:
            raise SquareRadicandError(
                "radicand %s is a square: (%s)^2" % (render_elem(D), render_elem(root)))
    return Surd(ctx, P, Q, R, D)


def _collapse_square(P, Q, R, D):
    """Input-boundary constructor: a square radicand folds into the rational
    part instead of being rejected, so text/JSON can name e.g. sqrt(2) at p=4."""
    ctx = P.ctx
    if Q.is_zero() or D is None:
        return make_surd(P, ctx.zero, R, None)
    if D.sign() > 0:
        root = sqrt_in_field(D)
        if root is not None:
            return make_surd(P + Q * root, ctx.zero, R, None)
    return make_surd(P, Q, R, D)


def hecke_conjugate(s):
    return s.conjugate()


def surd_sign(s):
    """Exact sign of the value under the distinguished embedding."""
    if s.is_infinite():
        raise DomainError("sign of infinity is undefined")
    sp = s.P.sign()
    if s.is_rational():
        return sp
    sq = s.Q.sign()
    if sq == 0:
        return sp
    if sp == 0:
        return sq
    if sp == sq:
        return sp
    norm = (s.P * s.P - s.Q * s.Q * s.D).sign()
    return sp * norm


def _difference(a, b):
    """a - b as a single surd; requires compatible radicands."""
    if a.is_rational():
        d = b.D
    elif b.is_rational():
        d = a.D
    elif a.D == b.D:
        d = a.D
    else:
        raise IncompatibleRadicandError(
            "cannot compare radicands %s and %s" % (render_elem(a.D), render_elem(b.D)))
    return Surd(a.ctx, a.P * b.R - b.P * a.R, a.Q * b.R - b.Q * a.R, a.R * b.R, d)


def surd_sub(a, b):
    """a - b; requires compatible radicands."""
    return _difference(a, b)


def surd_scale(s, e):
    """Multiply a surd by a field element."""
    if s.is_infinite():
        if e.is_zero():
            raise DomainError("0 * infinity is undefined")
        return s
    return Surd(s.ctx, s.P * e, s.Q * e, s.R, s.D)


def surd_mul(a, b):
    """Product of two surds over one shared radicand (or rationals)."""
    if a.is_infinite() or b.is_infinite():
        raise DomainError("product with infinity is undefined")
    if a.is_rational():
        d = b.D
    elif b.is_rational():
        d = a.D
    elif a.D == b.D:
        d = a.D
    else:
        raise IncompatibleRadicandError(
            "cannot multiply radicands %s and %s" % (render_elem(a.D), render_elem(b.D)))
    if d is None:
        return Surd(a.ctx, a.P * b.P, a.ctx.zero, a.R * b.R, None)
    return Surd(
        a.ctx,
        a.P * b.P + a.Q * b.Q * d,
        a.P * b.Q + a.Q * b.P,
        a.R * b.R,
        d,
    )


def surd_compare(a, b):
    """Exact three-way comparison.  Values over different radicands compare
    only when actually equal; otherwise the radicands are incompatible."""
    if a.is_infinite() or b.is_infinite():
        raise DomainError("cannot compare infinity")
    if a == b:
        return 0
    if not (a.is_rational() or b.is_rational() or a.D == b.D):
        raise IncompatibleRadicandError(
            "cannot compare radicands %s and %s" % (render_elem(a.D), render_elem(b.D)))
    return surd_sign(_difference(a, b))


def surd_equal_key(s):
    """Hashable key equal exactly when values are equal."""
    if s.is_infinite():
        return ("inf",)
    rinv = s.R.invert()
    x = s.P * rinv
    if s.is_rational():
        return ("rat", x.coeffs, x.denom)
    y = s.Q * rinv
    t = y * y * s.D
    return ("quad", x.coeffs, x.denom, s.Q.sign(), t.coeffs, t.denom)


def invert_surd(s):
    """1/s as an extended point (1/0 = infinity, 1/infinity = 0)."""
    ctx = s.ctx
    if s.is_infinite():
        return Surd(ctx, ctx.zero, ctx.zero, ctx.one, None)
    if s.is_rational():
        if s.P.is_zero():
            return Surd.infinite(ctx)
        return Surd(ctx, s.R, ctx.zero, s.P, None)
    norm = s.P * s.P - s.Q * s.Q * s.D
    if norm.is_zero():
        raise ConsistencyError("norm vanished for a non-square radicand")
    return Surd(ctx, s.R * s.P, -(s.R * s.Q), norm, s.D)


def floor_div_lambda(s):
    """Exact floor(s / lambda)."""
    ctx = s.ctx
    if s.is_infinite():
        raise DomainError("floor of infinity is undefined")
    if s.is_rational():
        return (s.value_elem() * ctx.lambda_elem.invert()).floor()
    lam = ctx.lambda_elem
    bits = ctx.start_bits
    while True:
        box = s.enclosure(bits)
        llo, lhi = ctx.lambda_enclosure(bits)
        if box is not None and llo > 0:
            qlo, qhi = _ival_div(box[0], box[1], llo, lhi)
            fl, fh = math.floor(qlo), math.floor(qhi)
            if fl == fh:
                return int(fl)
            if fh - fl == 1:
                # decide exactly which side of fh*lambda the value lies on
                return int(fh) if surd_sign(_difference(s, _lambda_mult(ctx, fh))) >= 0 else int(fl)
        if bits > _SIGN_BITS_CAP:
            raise ConsistencyError("floor refinement did not converge for %r" % (s,))
        bits *= 2


def _lambda_mult(ctx, k):
    return Surd(ctx, ctx.lambda_elem * k, ctx.zero, ctx.one, None)


def mobius_apply(m, s):
    """Apply a determinant-one matrix (a b; c d) to an extended point."""
    ctx = s.ctx
    a, b, c, d = m.a, m.b, m.c, m.d
    if s.is_infinite():
        if c.is_zero():
            return Surd.infinite(ctx)
        return Surd(ctx, a, ctx.zero, c, None)
    if s.is_rational():
        num = a * s.P + b * s.R
        den = c * s.P + d * s.R
        if den.is_zero():
            return Surd.infinite(ctx)
        return Surd(ctx, num, ctx.zero, den, None)
    u1 = a * s.P + b * s.R
    u2 = c * s.P + d * s.R
    det = a * d - b * c
    newp = u1 * u2 - a * c * (s.Q * s.Q * s.D)
    newq = s.Q * s.R * det
    newr = u2 * u2 - c * c * (s.Q * s.Q * s.D)
    if newr.is_zero():
        raise ConsistencyError("image denominator vanished for a non-square radicand")
    return Surd(ctx, newp, newq, newr, s.D)


# -- parsing and rendering ----------------------------------------------


def _needs_parens(text):
    return "+" in text or "-" in text


def render_surd(s):
    """Canonical text: "(P + Q*sqrt(D))/R", "P/R", elem text, or "inf"."""
    if s.is_infinite():
        return "inf"
    rpart = None
    if s.R != s.ctx.one:
        rt = render_elem(s.R)
        rpart = "(%s)" % rt if _needs_parens(rt) else rt
    if s.is_rational():
        num = render_elem(s.P)
        if rpart is None:
            return num
        if _needs_parens(num):
            num = "(%s)" % num
        return "%s/%s" % (num, rpart)
    dtext = render_elem(s.D)
    qsign = s.Q.sign()
    mag = s.Q if qsign > 0 else -s.Q
    mtext = render_elem(mag)
    if mtext == "1":
        radical = "sqrt(%s)" % dtext
    elif _needs_parens(mtext):
        radical = "(%s)*sqrt(%s)" % (mtext, dtext)
    else:
        radical = "%s*sqrt(%s)" % (mtext, dtext)
    if s.P.is_zero():
        num = radical if qsign > 0 else "-" + radical
    else:
        num = "%s %s %s" % (render_elem(s.P), "+" if qsign > 0 else "-", radical)
    if rpart is None:
        return num
    return "(%s)/%s" % (num, rpart)


def _match_paren(text, i):
    depth = 0
    for j in range(i, len(text)):
        if text[j] == "(":
            depth += 1
        elif text[j] == ")":
            depth -= 1
            if depth == 0:
                return j
    return -1


def _strip_outer(text, base):
    """Strip one layer of parentheses if they wrap the whole component."""
    t = text.strip()
    off = base + (len(text) - len(text.lstrip()))
    if t.startswith("(") and _match_paren(t, 0) == len(t) - 1:
        return t[1:-1], off + 1
    return t, off


def _parse_elem_at(ctx, text, base):
    try:
        return parse_elem(ctx, text)
    except ParseError as exc:
        pos = base + (exc.position or 0)
        raise ParseError(exc.base_message, pos) from None


def _split_top_slash(text):
    depth = 0
    idx = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", i)
        elif ch == "/" and depth == 0:
            if idx is not None:
                raise ParseError("unexpected second '/'", i)
            idx = i
    if depth != 0:
        raise ParseError("unbalanced '('", len(text) - 1)
    return idx


def _find_sqrt(text):
    depth = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith("sqrt", i):
            j = i + 4
            while j < len(text) and text[j].isspace():
                j += 1
            if j < len(text) and text[j] == "(":
                return i, j
            raise ParseError("expected '(' after sqrt", j)
        i += 1
    return None


def parse_surd(ctx, text):
    """Parse surd text; inverse of render_surd and tolerant of spacing."""
    if not isinstance(text, str):
        raise ParseError("surd text must be a string")
    stripped = text.strip()
    if stripped.lower() in ("inf", "infinity", "oo"):
        return Surd.infinite(ctx)
    if not stripped:
        raise ParseError("empty surd", 0)
    slash = _split_top_slash(text)
    if slash is None:
        num_text, num_base = _strip_outer(text, 0)
        r_elem = ctx.one
    else:
        num_text, num_base = _strip_outer(text[:slash], 0)
        den_text, den_base = _strip_outer(text[slash + 1:], slash + 1)
        r_elem = _parse_elem_at(ctx, den_text, den_base)
    hit = _find_sqrt(num_text)
    if hit is None:
        p_elem = _parse_elem_at(ctx, num_text, num_base)
        return Surd(ctx, p_elem, ctx.zero, r_elem, None)
    start, open_i = hit
    close_i = _match_paren(num_text, open_i)
    if close_i < 0:
        raise ParseError("unbalanced '(' in sqrt", num_base + open_i)
    if num_text[close_i + 1:].strip():
        raise ParseError("the radical term must come last", num_base + close_i + 1)
    d_elem = _parse_elem_at(ctx, num_text[open_i + 1:close_i], num_base + open_i + 1)
    before = num_text[:start].rstrip()
    if before.endswith("*"):
        core = before[:-1].rstrip()
        if core.endswith(")"):
            # parenthesized coefficient: scan back to its opening paren
            depth, k = 0, len(core) - 1
            while k >= 0:
                if core[k] == ")":
                    depth += 1
                elif core[k] == "(":
                    depth -= 1
                    if depth == 0:
                        break
                k -= 1
            if k < 0:
                raise ParseError("unbalanced ')' before '*sqrt'", num_base + len(core) - 1)
            q_text, q_base = core[k + 1:len(core) - 1], num_base + k + 1
            rest = core[:k]
        else:
            k = len(core)
            while k > 0 and (core[k - 1].isalnum() or core[k - 1] in "^"):
                k -= 1
            if k == len(core):
                raise ParseError("expected a coefficient before '*sqrt'", num_base + len(core))
            q_text, q_base = core[k:], num_base + k
            rest = core[:k]
        q_elem = _parse_elem_at(ctx, q_text, q_base)
    else:
        q_elem = ctx.one
        rest = before
    rest = rest.rstrip()
    qsign = 1
    if rest.endswith("+"):
        rest = rest[:-1]
    elif rest.endswith("-"):
        qsign = -1
        rest = rest[:-1]
    elif rest.strip():
        raise ParseError("expected '+' or '-' before the radical term", num_base + len(rest))
    rest = rest.strip()
    p_elem = _parse_elem_at(ctx, rest, num_base) if rest else ctx.zero
    if qsign < 0:
        q_elem = -q_elem
    return _collapse_square(p_elem, q_elem, r_elem, d_elem)


def surd_to_json(s):
    if s.is_infinite():
        return {"inf": True}
    obj = {
        "P": elem_to_json(s.P),
        "Q": elem_to_json(s.Q),
        "R": elem_to_json(s.R),
        "D": elem_to_json(s.D) if s.D is not None else None,
    }
    return obj


def surd_from_json(ctx, obj):
    if not isinstance(obj, dict):
        raise ParseError("surd JSON must be an object")
    if obj.get("inf"):
        return Surd.infinite(ctx)
    try:
        p = elem_from_json(ctx, obj["P"])
        q = elem_from_json(ctx, obj["Q"])
        r = elem_from_json(ctx, obj["R"])
    except KeyError as exc:
        raise ParseError("surd JSON missing key %s" % exc)
    d = elem_from_json(ctx, obj["D"]) if obj.get("D") is not None else None
    if (q.is_zero() or d is None) and r.is_zero():
        return Surd.infinite(ctx)
    return _collapse_square(p, q, r, d)
