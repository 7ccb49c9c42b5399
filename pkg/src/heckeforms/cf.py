"""Negative lambda-continued fractions: r0*L - 1/(r1*L - 1/(...)).

Expansion by the next-integral-multiple algorithm r_j = floor(alpha_j/L) + 1,
alpha_{j+1} = 1/(r_j*L - alpha_j); a value's digit stream is eventually
periodic exactly when it is fixed by a group element, and the period is found
by the first repeated complete quotient (canonical surd components as state
key, value-unique per radicand).
"""

from .errors import (
    ConsistencyError,
    DomainError,
    NonHyperbolicError,
    NonPeriodicError,
    ParseError,
    RootChoiceError,
)
from .group import RawMat, word_product_raw
from .ring import sqrt_in_field
from .surd import Surd, invert_surd, mobius_apply

DEFAULT_MAX_STEPS = 10000


class PeriodicCF:
    """Digits (preperiod; period-bar); empty period means a finite CF."""

    __slots__ = ("preperiod", "period")

    def __init__(self, preperiod, period=()):
        self.preperiod = tuple(int(r) for r in preperiod)
        self.period = tuple(int(r) for r in period)

    def is_finite(self):
        return not self.period

    def digits(self, count):
        """First `count` digits of the full (possibly infinite) stream."""
        out = list(self.preperiod[:count])
        while len(out) < count and self.period:
            out.extend(self.period[:count - len(out)])
        return out

    def __eq__(self, other):
        if not isinstance(other, PeriodicCF):
            return NotImplemented
        return self.preperiod == other.preperiod and self.period == other.period

    def __hash__(self):
        return hash((self.preperiod, self.period))

    def __repr__(self):
        return "PeriodicCF(%s)" % render_cf(self)


class ExpansionTrace:
    """The (complete quotient, digit) pairs produced up to period closure."""

    __slots__ = ("steps",)

    def __init__(self, steps):
        self.steps = tuple(steps)

    def alphas(self):
        return [a for a, _ in self.steps]

    def __len__(self):
        return len(self.steps)


def _state_key(s):
    return (s.P.coeffs, s.P.denom, s.Q.coeffs, s.Q.denom, s.R.coeffs, s.R.denom)


def expand(alpha, max_steps=DEFAULT_MAX_STEPS):
    """Expand a surd into (PeriodicCF, ExpansionTrace)."""
    if alpha.is_infinite():
        raise DomainError("cannot expand infinity")
    from .surd import floor_div_lambda  # local import keeps module init order simple

    seen = {}
    alphas = []
    keys = []
    digits = []
    cur = alpha
    for j in range(max_steps + 1):
        key = _state_key(cur)
        if key in seen:
            j1, j2 = seen[key], j
            # roll the period start backwards while preceding states coincide
            while j1 > 0 and keys[j1 - 1] == keys[j2 - 1]:
                j1 -= 1
                j2 -= 1
            pre = tuple(digits[:j1])
            period = tuple(digits[j1:j2])
            trace = ExpansionTrace(zip(alphas[:j], digits[:j]))
            return PeriodicCF(pre, period), trace
        seen[key] = j
        keys.append(key)
        alphas.append(cur)
        r = floor_div_lambda(cur) + 1
        digits.append(r)
        nxt = -(cur.shift(-r))  # r*lambda - alpha, in (0, lambda] by choice of r
        if nxt.is_rational() and nxt.P.is_zero():
            # unreachable for r = floor+1; kept so a bug cannot divide by zero
            trace = ExpansionTrace(zip(alphas, digits))
            return PeriodicCF(tuple(digits), ()), trace
        cur = invert_surd(nxt)
    raise NonPeriodicError("no period within %d steps" % max_steps)


def evaluate_finite(ctx, word):
    """Value of the finite CF [r0; r1, ..., rk] = (S^{r0}T ... S^{rk}T)(inf)."""
    return mobius_apply(word_product_raw(ctx, word), Surd.infinite(ctx))


def _plus_point(ctx, raw):
    """Plus fixed point (a-d+sqrt(trace^2-4))/(2c) of a literal matrix."""
    t = raw.a + raw.d
    disc = t * t - 4
    if disc.sign() <= 0:
        raise NonHyperbolicError("period word is not hyperbolic (trace %r)" % (t,))
    if raw.c.is_zero():
        raise ConsistencyError("hyperbolic CF word with c = 0")
    diff = raw.a - raw.d
    two_c = raw.c + raw.c
    root = sqrt_in_field(disc)
    if root is not None:
        return Surd(ctx, diff + root, ctx.zero, two_c, None)
    return Surd(ctx, diff, ctx.one, two_c, disc)


def evaluate_periodic(ctx, cf, max_steps=DEFAULT_MAX_STEPS):
    """Value of an eventually periodic CF, certified by re-expansion."""
    if cf.is_finite():
        raise DomainError("periodic evaluation needs a nonempty period")
    w_raw = word_product_raw(ctx, cf.period)
    point = _plus_point(ctx, w_raw)
    if cf.preperiod:
        point = mobius_apply(word_product_raw(ctx, cf.preperiod), point)
    back, _ = expand(point, max_steps)
    if back != cf:
        raise RootChoiceError(
            "re-expansion %s does not reproduce %s" % (render_cf(back), render_cf(cf)))
    return point


def convergents(alpha, count, max_steps=DEFAULT_MAX_STEPS):
    """C_0, ..., C_{count-1}; for finite CFs, as many as exist."""
    if count < 1:
        raise DomainError("need count >= 1")
    cf, _ = expand(alpha, max_steps)
    digits = cf.digits(count)
    ctx = alpha.ctx
    out = []
    lam = ctx.lambda_elem
    m = RawMat(ctx.one, ctx.zero, ctx.zero, ctx.one)
    for r in digits:
        rl = lam * r
        m = RawMat(m.a * rl + m.b, -m.a, m.c * rl + m.d, -m.c)
        if m.c.is_zero():
            out.append(Surd.infinite(ctx))
        else:
            out.append(Surd(ctx, m.a, ctx.zero, m.c, None))
    return out


def cyclic_equal(p1, p2):
    """True iff one digit tuple is a rotation of the other."""
    p1, p2 = tuple(p1), tuple(p2)
    if len(p1) != len(p2):
        return False
    if not p1:
        return True
    return any(p1[i:] + p1[:i] == p2 for i in range(len(p1)))


def reverse_period(period):
    return tuple(reversed(tuple(period)))


class AdmissibilityReport:
    __slots__ = ("ok", "reason")

    def __init__(self, ok, reason=None):
        self.ok = ok
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "AdmissibilityReport(ok=%r, reason=%r)" % (self.ok, self.reason)


def _max_run_of_ones(seq):
    best = run = 0
    for d in seq:
        run = run + 1 if d == 1 else 0
        best = max(best, run)
    return best


def is_admissible(cf, p):
    """Check the digit constraints the expansion algorithm guarantees:
    digits >= 1 beyond position 0, interior runs of ones <= p-3 (cyclically
    over the period), leading run <= p-2, period not all ones."""
    pre, period = cf.preperiod, cf.period
    for i, d in enumerate(pre[1:], start=1):
        if d < 1:
            return AdmissibilityReport(False, "digit %d at position %d is < 1" % (d, i))
    for d in period:
        # every period digit recurs at stream positions >= 1
        if d < 1:
            return AdmissibilityReport(False, "digit %d in the period is < 1" % d)
    if period and all(d == 1 for d in period):
        return AdmissibilityReport(False, "period consists entirely of ones")
    interior = list(pre[1:]) + list(period) * 2
    run = _max_run_of_ones(interior)
    if run > p - 3:
        return AdmissibilityReport(
            False, "interior run of %d ones exceeds p-3 = %d" % (run, p - 3))
    stream = list(pre) + list(period) * 2
    lead = 0
    for d in stream:
        if d != 1:
            break
        lead += 1
    if lead > p - 2:
        return AdmissibilityReport(
            False, "leading run of %d ones exceeds p-2 = %d" % (lead, p - 2))
    return AdmissibilityReport(True)


def is_parabolic_period(period, p):
    """True iff the period is cyclically (2, 1, ..., 1) with p-3 ones."""
    model = (2,) + (1,) * (p - 3)
    return cyclic_equal(tuple(period), model)


def leading_ones(period):
    n = 0
    for d in period:
        if d != 1:
            break
        n += 1
    return n


# -- text and JSON ------------------------------------------------------


def render_cf(cf):
    items = [str(d) for d in cf.preperiod]
    if cf.period:
        items.append("(%s)" % ", ".join(str(d) for d in cf.period))
    if not items:
        return "[]"
    if len(items) == 1:
        return "[%s]" % items[0]
    return "[%s; %s]" % (items[0], ", ".join(items[1:]))


def parse_cf(text):
    """Inverse of render_cf; tolerant of spacing, strict about shape."""
    if not isinstance(text, str):
        raise ParseError("CF text must be a string")
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ParseError("CF must be bracketed like [2; 3, (2, 1, 1, 4)]", 0)
    inner = t[1:-1]
    open_i = inner.find("(")
    period = ()
    if open_i >= 0:
        close_i = inner.find(")", open_i)
        if close_i < 0:
            raise ParseError("unbalanced '(' in CF period", open_i + 1)
        if inner[close_i + 1:].strip():
            raise ParseError("period must be the last CF item", close_i + 2)
        period = _parse_digit_list(inner[open_i + 1:close_i], open_i + 2)
        if not period:
            raise ParseError("empty period parentheses", open_i + 2)
        inner = inner[:open_i]
    pre = _parse_digit_list(inner, 1)
    return PeriodicCF(pre, period)


def _parse_digit_list(text, base):
    out = []
    for piece in text.replace(";", ",").split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            out.append(int(piece))
        except ValueError:
            raise ParseError("bad CF digit %r" % piece, base)
    return tuple(out)


def cf_to_json(cf):
    return {"preperiod": list(cf.preperiod), "period": list(cf.period)}


def cf_from_json(obj):
    try:
        return PeriodicCF([int(x) for x in obj["preperiod"]],
                          [int(x) for x in obj["period"]])
    except (KeyError, TypeError, ValueError):
        raise ParseError("CF JSON must have integer lists 'preperiod' and 'period'")
