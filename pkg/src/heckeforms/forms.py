"""Binary quadratic forms over Z[lambda_p]: the form<->number dictionary,
reduction to cycles, equivalence testing, and the transfer map on simple
numbers with its finite orbits."""

from .cf import DEFAULT_MAX_STEPS, ExpansionTrace, PeriodicCF, cyclic_equal, expand, \
    is_parabolic_period, leading_ones
from .errors import ConsistencyError, DomainError, NonClosingOrbitError, \
    NonHyperbolicError, ParseError, UsageError
from .group import GroupElem, _raw_inv, _raw_mul, classify, gen_T, mat_mul, u_power, \
    u_zero, word_product_raw, word_to_matrix
from .ring import RingElem, elem_from_json, elem_to_json, parse_elem, render_elem, \
    sqrt_in_field
from .surd import Surd, floor_div_lambda, hecke_conjugate, invert_surd, make_surd, \
    mobius_apply, render_surd, surd_compare, surd_equal_key, surd_mul, surd_scale, \
    surd_sign, surd_sub


class QForm:
    """A x^2 + B x y + C y^2 with coefficients in Z[lambda_p]."""

    __slots__ = ("ctx", "A", "B", "C", "_disc")

    def __init__(self, A, B, C):
        for coeff in (A, B, C):
            if not isinstance(coeff, RingElem):
                raise UsageError("form coefficients must be ring elements")
            if coeff.ctx is not A.ctx:
                raise UsageError("form coefficients from different fields")
            if coeff.denom != 1:
                raise UsageError(
                    "form coefficient %s is not integral over lambda" % render_elem(coeff))
        self.ctx = A.ctx
        self.A = A
        self.B = B
        self.C = C
        self._disc = None

    def __eq__(self, other):
        if not isinstance(other, QForm):
            return NotImplemented
        return (self.ctx.p == other.ctx.p and self.A == other.A
                and self.B == other.B and self.C == other.C)

    def __hash__(self):
        return hash((self.ctx.p, self.A, self.B, self.C))

    def __repr__(self):
        return "QForm(p=%d, %s)" % (self.ctx.p, render_form(self))


class ReductionTrace:
    """Steps (form, applied matrix S^r T, exponent r) ending at a reduced form."""

    __slots__ = ("steps", "terminal")

    def __init__(self, steps, terminal):
        self.steps = tuple(steps)
        self.terminal = terminal

    def __len__(self):
        return len(self.steps)

    def exponents(self):
        return tuple(r for _, _, r in self.steps)


class ReducedCycle:
    """Closed walk of reduced forms; exponents may close before the CF period."""

    __slots__ = ("forms", "exponents", "cf_period_length")

    def __init__(self, forms, exponents, cf_period_length):
        self.forms = tuple(forms)
        self.exponents = tuple(exponents)
        self.cf_period_length = cf_period_length

    def __len__(self):
        return len(self.forms)


class SimpleOrbit:
    """Closed transfer-map orbit: values and the branch used at each step."""

    __slots__ = ("values", "branches")

    def __init__(self, values, branches):
        self.values = tuple(values)
        self.branches = tuple(branches)

    def __len__(self):
        return len(self.values)


def discriminant(Q):
    if Q._disc is None:
        Q._disc = Q.B * Q.B - (Q.A * Q.C) * 4
    return Q._disc


def is_indefinite(Q):
    return discriminant(Q).sign() > 0


def negate(Q):
    return QForm(-Q.A, -Q.B, -Q.C)


def act(Q, m):
    """Substitute (x, y) -> (a x + b y, c x + d y); discriminant-preserving."""
    raw = m.raw() if isinstance(m, GroupElem) else m
    a, b, c, d = raw
    A, B, C = Q.A, Q.B, Q.C
    na = A * (a * a) + B * (a * c) + C * (c * c)
    nb = (A * (a * b) + C * (c * d)) * 2 + B * (a * d + b * c)
    nc = A * (b * b) + B * (b * d) + C * (d * d)
    return QForm(na, nb, nc)


def alpha_of(Q):
    """Plus root (-B + sqrt(D)) / (2A) of Q(x, 1) = 0."""
    if Q.A.is_zero():
        raise DomainError("form has A = 0: the plus root degenerates")
    disc = discriminant(Q)
    s = disc.sign()
    if s < 0:
        raise DomainError("form is definite (negative discriminant)")
    if s == 0:
        raise DomainError("form has zero discriminant")
    root = sqrt_in_field(disc)
    two_a = Q.A * 2
    if root is not None:
        return Surd(Q.ctx, root - Q.B, Q.ctx.zero, two_a, None)
    return make_surd(-Q.B, Q.ctx.one, two_a, disc)


def _hyperbolic_expansion(alpha, max_steps):
    """Expansion of a hyperbolic point; rejects cusps and parabolic points."""
    if alpha.is_infinite():
        raise DomainError("infinity is not a hyperbolic point")
    cf, trace = expand(alpha, max_steps)
    if cf.is_finite():
        raise NonHyperbolicError("%s is a cusp (finite lambda-CF)" % render_surd(alpha))
    if is_parabolic_period(cf.period, alpha.ctx.p):
        raise NonHyperbolicError("%s is a parabolic fixed point" % render_surd(alpha))
    return cf, trace


def _stabilizer_raw(ctx, cf):
    """Raw V W V^-1 from the expansion's preperiod and period words."""
    v = word_product_raw(ctx, cf.preperiod)
    w = word_product_raw(ctx, cf.period)
    return v, w, _raw_mul(_raw_mul(v, w), _raw_inv(v))


def _form_from_raw(alpha, raw):
    """[c, d-a, -b] with the matrix sign resolved so the plus root is alpha."""
    if raw.c.is_zero():
        raise ConsistencyError("stabilizer of a finite point has c = 0")
    t = raw.a + raw.d
    if (t * t - 4).sign() <= 0:
        raise ConsistencyError("stabilizer word is not hyperbolic")
    cand = QForm(raw.c, raw.d - raw.a, -raw.b)
    if alpha_of(cand) == alpha:
        return cand
    cand = negate(cand)
    if alpha_of(cand) == alpha:
        return cand
    raise ConsistencyError("stabilizer form does not recover its root")


def stabilizer_generators(alpha, max_steps=DEFAULT_MAX_STEPS):
    """The pair (M, M^-1) = (V W V^-1, V W^-1 V^-1) fixing alpha."""
    cf, _trace = _hyperbolic_expansion(alpha, max_steps)
    _v, _w, m_raw = _stabilizer_raw(alpha.ctx, cf)
    m = GroupElem.from_raw(m_raw)
    if classify(m) != "hyperbolic":
        raise ConsistencyError("stabilizer generator is not hyperbolic")
    if mobius_apply(m_raw, alpha) != alpha:
        raise ConsistencyError("stabilizer generator does not fix %s" % render_surd(alpha))
    return m, m.inv()


def form_of(alpha, max_steps=DEFAULT_MAX_STEPS):
    """The form whose plus root is alpha, built from its stabilizer."""
    cf, _trace = _hyperbolic_expansion(alpha, max_steps)
    m_raw = _stabilizer_raw(alpha.ctx, cf)[2]
    return _form_from_raw(alpha, m_raw)


def _attached(Q, max_steps):
    """Root, expansion and stabilizer-match data for a hyperbolic form."""
    a = alpha_of(Q)
    cf, trace = _hyperbolic_expansion(a, max_steps)
    m_raw = _stabilizer_raw(Q.ctx, cf)[2]
    if _form_from_raw(a, m_raw) != Q:
        raise NonHyperbolicError(
            "form %s is not its root's stabilizer form (scaled copy?)" % render_form(Q))
    return a, cf, trace


def is_hyperbolic_form(Q, max_steps=DEFAULT_MAX_STEPS):
    try:
        _attached(Q, max_steps)
    except DomainError:
        return False
    return True


def _stabilizer_conjugate(alpha, cf):
    """Other fixed point of the stabilizer; Galois flip for irrational values,
    the minus root of V W V^-1 when a square discriminant collapsed alpha."""
    ctx = alpha.ctx
    if not alpha.is_rational():
        return hecke_conjugate(alpha)
    if cf.is_finite():
        return None
    v = word_product_raw(ctx, cf.preperiod)
    w = word_product_raw(ctx, cf.period)
    t = w.a + w.d
    disc = t * t - 4
    if disc.sign() <= 0:
        return None
    root = sqrt_in_field(disc)
    if root is None:
        raise ConsistencyError("rational value with irrational stabilizer root")
    if w.c.is_zero():
        raise ConsistencyError("periodic word with c = 0")
    minus = Surd(ctx, (w.a - w.d) - root, ctx.zero, w.c * 2, None)
    return mobius_apply(v, minus)


def _inequality_k(alpha, conj):
    """The k with 0 < conj < U^{k+2}(0) < alpha < U^{k+1}(0), or None."""
    if surd_sign(conj) <= 0:
        return None
    ctx = alpha.ctx
    hits = []
    for k in range(ctx.p - 2):
        uz = u_zero(ctx, k + 2)
        if surd_compare(conj, uz) >= 0:
            continue
        if surd_compare(alpha, uz) <= 0:
            continue
        if k > 0 and surd_compare(alpha, u_zero(ctx, k + 1)) >= 0:
            continue
        hits.append(k)
    if len(hits) > 1:
        raise ConsistencyError("inequality characterization matched several k: %s" % hits)
    return hits[0] if hits else None


def is_reduced_number(alpha, max_steps=DEFAULT_MAX_STEPS):
    """Number of leading ones in the period when reduced, else None; the
    purely-periodic and inequality characterizations are both computed."""
    if alpha.is_infinite():
        return None
    cf, _trace = expand(alpha, max_steps)
    purely = (not cf.preperiod) and bool(cf.period) \
        and not is_parabolic_period(cf.period, alpha.ctx.p)
    k_cf = leading_ones(cf.period) if purely else None
    conj = _stabilizer_conjugate(alpha, cf)
    k_ineq = _inequality_k(alpha, conj) if conj is not None else None
    if k_cf != k_ineq:
        raise ConsistencyError(
            "reduced characterizations disagree for %s: periodicity gives %r, "
            "inequalities give %r" % (render_surd(alpha), k_cf, k_ineq))
    return k_cf


def is_reduced_form(Q, max_steps=DEFAULT_MAX_STEPS):
    try:
        a, cf, _trace = _attached(Q, max_steps)
    except DomainError:
        return False
    if cf.preperiod:
        return False
    k_cf = leading_ones(cf.period)
    k_ineq = _inequality_k(a, alpha_of(negate(Q)))
    if k_cf != k_ineq:
        raise ConsistencyError(
            "reduced characterizations disagree for %s: periodicity gives %r, "
            "inequalities give %r" % (render_form(Q), k_cf, k_ineq))
    return True


def _check_mirror(Q, alpha, k_expected=None, final=False):
    """The form walk must track the number walk, and the inequality route must
    say "not reduced" before the terminal step and match the CF count at it."""
    if alpha_of(Q) != alpha:
        raise ConsistencyError("form walk diverged from the number walk at %s"
                               % render_surd(alpha))
    k = _inequality_k(alpha, alpha_of(negate(Q)))
    if not final:
        if k is not None:
            raise ConsistencyError("pre-terminal form %s already passes the reduced "
                                   "inequalities" % render_form(Q))
    elif k != k_expected:
        raise ConsistencyError("inequality count %r differs from the %r leading ones"
                               % (k, k_expected))


def _reduce_core(Q, cf, trace):
    ctx = Q.ctx
    steps = []
    cur = Q
    for j, r in enumerate(cf.preperiod):
        _check_mirror(cur, trace.steps[j][0])
        mat = word_to_matrix(ctx, [r])
        steps.append((cur, mat, r))
        cur = act(cur, mat)
    _check_mirror(cur, trace.steps[len(cf.preperiod)][0],
                  k_expected=leading_ones(cf.period), final=True)
    return ReductionTrace(steps, cur)


def reduce(Q, max_steps=DEFAULT_MAX_STEPS):
    """Apply S^r T with r = [alpha_Q/lambda] + 1 until the form is reduced."""
    _a, cf, trace = _attached(Q, max_steps)
    return _reduce_core(Q, cf, trace)


def _cycle_core(Q, cf, trace):
    ctx = Q.ctx
    period = cf.period
    forms = [Q]
    exps = []
    cur = Q
    closed = False
    for i in range(len(period)):
        rotated = period[i:] + period[:i]
        _check_mirror(cur, trace.steps[i][0], k_expected=leading_ones(rotated), final=True)
        r = period[i]
        exps.append(r)
        cur = act(cur, word_to_matrix(ctx, [r]))
        if cur == Q:
            closed = True
            break
        if cur in forms:
            raise ConsistencyError("reduction cycle revisited %s before closing"
                                   % render_form(cur))
        forms.append(cur)
    if not closed:
        raise ConsistencyError("reduction cycle failed to close within the CF period")
    return ReducedCycle(forms, exps, len(period))


def reduced_cycle(Q, max_steps=DEFAULT_MAX_STEPS):
    """Walk S^r T through the whole cycle of a reduced form."""
    _a, cf, trace = _attached(Q, max_steps)
    if cf.preperiod:
        raise DomainError("form is not reduced: its root has preperiod %s"
                          % (list(cf.preperiod),))
    return _cycle_core(Q, cf, trace)


def equivalent(Q1, Q2, max_steps=DEFAULT_MAX_STEPS, with_witness=False):
    """Same class iff cyclically equal periods, equal discriminants and equal
    reduced cycles; all three are computed, the verdict is their conjunction."""
    a1, cf1, tr1 = _attached(Q1, max_steps)
    a2, cf2, tr2 = _attached(Q2, max_steps)
    same_period = cyclic_equal(cf1.period, cf2.period)
    same_disc = discriminant(Q1) == discriminant(Q2)
    red1 = _reduce_core(Q1, cf1, tr1)
    red2 = _reduce_core(Q2, cf2, tr2)
    cyc1 = _cycle_core(red1.terminal, _tail_cf(cf1), _tail_trace(cf1, tr1))
    cyc2 = _cycle_core(red2.terminal, _tail_cf(cf2), _tail_trace(cf2, tr2))
    same_cycle = frozenset(cyc1.forms) == frozenset(cyc2.forms)
    verdict = same_period and same_disc and same_cycle
    if not with_witness:
        return verdict
    if not verdict:
        return verdict, None
    ctx = Q1.ctx
    idx = cyc1.forms.index(red2.terminal)
    witness = word_to_matrix(ctx, cf1.preperiod) \
        * word_to_matrix(ctx, cyc1.exponents[:idx]) \
        * word_to_matrix(ctx, cf2.preperiod).inv()
    if act(Q1, witness) != Q2:
        raise ConsistencyError("assembled witness does not map the first form to the second")
    return verdict, witness


def _tail_cf(cf):
    return PeriodicCF((), cf.period)


def _tail_trace(cf, trace):
    return ExpansionTrace(trace.steps[len(cf.preperiod):])


def is_simple_form(Q):
    """A > 0 > C, exactly."""
    return Q.A.sign() > 0 and Q.C.sign() < 0


def is_simple_number(alpha, max_steps=DEFAULT_MAX_STEPS):
    """conj(alpha) < 0 < alpha, with the stabilizer conjugate for rationals."""
    if alpha.is_infinite():
        return False
    if not alpha.is_rational():
        return surd_sign(alpha) > 0 and surd_sign(hecke_conjugate(alpha)) < 0
    try:
        cf, _trace = expand(alpha, max_steps)
    except DomainError:
        return False
    conj = _stabilizer_conjugate(alpha, cf)
    if conj is None:
        return False
    return surd_sign(alpha) > 0 and surd_sign(conj) < 0


def _conjugate_of(alpha, max_steps):
    if not alpha.is_rational():
        return hecke_conjugate(alpha)
    cf, _trace = expand(alpha, max_steps)
    return _stabilizer_conjugate(alpha, cf)


def simple_to_reduced(alpha, max_steps=DEFAULT_MAX_STEPS):
    """Shift a simple number to a reduced one: (S^n alpha, n), n = -[conj/lambda]."""
    if not is_simple_number(alpha, max_steps):
        raise DomainError("number %s is not simple" % render_surd(alpha))
    conj = _conjugate_of(alpha, max_steps)
    n = -floor_div_lambda(conj)
    shifted = alpha.shift(n)
    if is_reduced_number(shifted, max_steps) is None:
        raise ConsistencyError("S^%d did not carry %s to a reduced number"
                               % (n, render_surd(alpha)))
    return shifted, n


def simple_set(cycle):
    """All S^{-i}(beta), 1 <= i <= [beta/lambda], over the cycle's numbers,
    kept when the simplicity sign test passes."""
    out = []
    for Q in cycle.forms:
        beta = alpha_of(Q)
        beta_conj = alpha_of(negate(Q))
        for i in range(1, floor_div_lambda(beta) + 1):
            val = beta.shift(-i)
            val_conj = beta_conj.shift(-i)
            if surd_sign(val) > 0 and surd_sign(val_conj) < 0:
                out.append(val)
            elif not val.is_rational():
                raise ConsistencyError("shifted reduced number %s failed the "
                                       "simplicity signs" % render_surd(val))
            # rational shifts may leave the simple range; they are dropped
    return out


def phi_apply(x):
    """One step of the (p-1)-branch transfer map on [0, infinity)."""
    ctx = x.ctx
    if x.is_infinite():
        raise DomainError("the transfer map is defined on finite values")
    if surd_sign(x) < 0:
        raise DomainError("the transfer map needs x >= 0, got %s" % render_surd(x))
    p = ctx.p
    branch = None
    for i in range(1, p):
        if surd_compare(x, u_zero(ctx, p - i + 1)) < 0:
            continue
        if i < p - 1 and surd_compare(x, u_zero(ctx, p - i)) >= 0:
            continue
        branch = i
        break
    if branch is None:
        raise ConsistencyError("no branch interval contains %s" % render_surd(x))
    y = mobius_apply(mat_mul(gen_T(ctx), u_power(ctx, branch)).raw(), x)
    if branch == 1:
        den = surd_sub(Surd.from_elem(ctx.one), surd_scale(x, ctx.lambda_elem))
        if surd_mul(x, invert_surd(den)) != y:
            raise ConsistencyError("first-branch formula x/(1 - lambda x) disagrees "
                                   "with the matrix route")
    if branch == p - 1:
        if x.shift(-1) != y:
            raise ConsistencyError("last-branch formula x - lambda disagrees with "
                                   "the matrix route")
    if y.is_infinite() or surd_sign(y) < 0:
        raise ConsistencyError("transfer map left [0, infinity) at %s" % render_surd(x))
    return y, branch


def phi_orbit(x, max_steps=DEFAULT_MAX_STEPS):
    """Iterate the transfer map until the start value recurs."""
    start = surd_equal_key(x)
    seen = {start}
    values = [x]
    branches = []
    cur = x
    for _ in range(max_steps):
        cur, br = phi_apply(cur)
        branches.append(br)
        key = surd_equal_key(cur)
        if key == start:
            return SimpleOrbit(values, branches)
        if key in seen:
            raise NonClosingOrbitError("orbit of %s is eventually periodic but never "
                                       "returns to its start" % render_surd(x))
        seen.add(key)
        values.append(cur)
    raise NonClosingOrbitError("orbit of %s did not close within %d steps"
                               % (render_surd(x), max_steps))


def render_form(Q):
    return "[%s, %s, %s]" % (render_elem(Q.A), render_elem(Q.B), render_elem(Q.C))


def parse_form(ctx, text):
    """Parse "[A, B, C]" with ring-element entries."""
    if not isinstance(text, str):
        raise ParseError("form text must be a string")
    stripped = text.strip()
    if not (stripped.startswith("[") and stripped.endswith("]")):
        raise ParseError("form text must look like [A, B, C]", 0)
    parts = stripped[1:-1].split(",")
    if len(parts) != 3:
        raise ParseError("form text needs exactly three entries", 0)
    return QForm(*(parse_elem(ctx, part) for part in parts))


def form_to_json(Q):
    return {"A": elem_to_json(Q.A), "B": elem_to_json(Q.B), "C": elem_to_json(Q.C)}


def form_from_json(ctx, obj):
    if not isinstance(obj, dict):
        raise ParseError("form JSON must be an object")
    try:
        return QForm(elem_from_json(ctx, obj["A"]), elem_from_json(ctx, obj["B"]),
                     elem_from_json(ctx, obj["C"]))
    except KeyError as exc:
        raise ParseError("form JSON missing key %s" % exc)
