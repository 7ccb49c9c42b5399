"""Operation layer shared by the CLI and the HTTP service: every operation
parses text inputs, runs the core routines, and returns a dict with machine
fields under "result" plus the exact text lines a terminal client prints."""

from .cf import DEFAULT_MAX_STEPS, cf_to_json, evaluate_finite, evaluate_periodic, \
    expand, parse_cf, render_cf
from .errors import UsageError
from .forms import act, alpha_of, discriminant, equivalent, form_of, form_to_json, \
    parse_form, phi_apply, phi_orbit, reduce, reduced_cycle, render_form, simple_set, \
    stabilizer_generators
from .group import gen_S, gen_T, gen_U, identity, matrix_from_json, matrix_to_json, \
    parse_word, proj_equal, render_matrix, u_zero, word_to_matrix
from .ring import build_field, render_elem
from .surd import invert_surd, parse_surd, render_surd, surd_compare, surd_to_json

DEFAULT_MAX_P = 40
DEFAULT_START_BITS = 64

_CTX_CACHE = {}


def get_context(p, start_bits=DEFAULT_START_BITS, max_p=DEFAULT_MAX_P):
    if not isinstance(p, int) or isinstance(p, bool):
        raise UsageError("p must be an integer")
    if not 3 <= p <= max_p:
        raise UsageError("p must satisfy 3 <= p <= %d, got %d" % (max_p, p))
    key = (p, start_bits)
    if key not in _CTX_CACHE:
        _CTX_CACHE[key] = build_field(p, max_p=max_p, start_bits=start_bits)
    return _CTX_CACHE[key]


def _op(result, text):
    return {"result": result, "text": text}


def op_group_check(ctx):
    """Verify the defining relations and the interval-endpoint laws."""
    p = ctx.p
    ident = identity(ctx)
    t = gen_T(ctx)
    u = gen_U(ctx)
    upow = ident
    for _ in range(p):
        upow = upow * u
    checks = [
        ("T^2 == I", proj_equal(t * t, ident)),
        ("U == S*T", proj_equal(gen_S(ctx) * t, u)),
        ("U^p == I", proj_equal(upow, ident)),
    ]
    chain_ok = True
    for k in range(2, p):
        if surd_compare(u_zero(ctx, k + 1), u_zero(ctx, k)) >= 0:
            chain_ok = False
    checks.append(("u_zero chain strictly decreasing", chain_ok))
    recip_ok = True
    for k in range(2, p):
        if invert_surd(u_zero(ctx, k)) != u_zero(ctx, p - k + 1):
            recip_ok = False
    checks.append(("u_zero reciprocal law", recip_ok))
    text = ["p: %d" % p, "degree: %d" % ctx.degree,
            "lambda: %s" % repr(ctx.lambda_float)]
    for name, ok in checks:
        text.append("%s: %s" % (name, "pass" if ok else "FAIL"))
    result = {
        "p": p,
        "degree": ctx.degree,
        "lambda_approx": ctx.lambda_float,
        "checks": {name: ok for name, ok in checks},
        "ok": all(ok for _, ok in checks),
    }
    return _op(result, text)


def op_cf_expand(ctx, number_text, max_steps=DEFAULT_MAX_STEPS):
    alpha = parse_surd(ctx, number_text)
    cf, _trace = expand(alpha, max_steps)
    return _op(cf_to_json(cf), [render_cf(cf)])


def op_cf_eval(ctx, cf_text, max_steps=DEFAULT_MAX_STEPS):
    cf = parse_cf(cf_text)
    if cf.is_finite():
        value = evaluate_finite(ctx, cf.preperiod)
    else:
        value = evaluate_periodic(ctx, cf, max_steps)
    return _op(surd_to_json(value), [render_surd(value)])


def _trace_payload(trace):
    return {
        "steps": [{"form": form_to_json(q), "matrix": matrix_to_json(m), "exponent": r}
                  for q, m, r in trace.steps],
        "exponents": list(trace.exponents()),
        "terminal": form_to_json(trace.terminal),
    }


def _trace_text(trace):
    lines = ["steps: %d" % len(trace)]
    for j, (q, _m, r) in enumerate(trace.steps):
        lines.append("step %d: %s exponent %d" % (j + 1, render_form(q), r))
    if trace.steps:
        lines.append("exponents: %s" % ", ".join(str(r) for r in trace.exponents()))
    lines.append("terminal: %s" % render_form(trace.terminal))
    return lines


def op_form_reduce(ctx, form_text, max_steps=DEFAULT_MAX_STEPS):
    q = parse_form(ctx, form_text)
    trace = reduce(q, max_steps)
    return _op(_trace_payload(trace), _trace_text(trace))


def op_form_cycle(ctx, form_text, max_steps=DEFAULT_MAX_STEPS):
    q = parse_form(ctx, form_text)
    trace = reduce(q, max_steps)
    cycle = reduced_cycle(trace.terminal, max_steps)
    result = {
        "reduction_steps": len(trace),
        "start": form_to_json(cycle.forms[0]),
        "forms": [form_to_json(f) for f in cycle.forms],
        "exponents": list(cycle.exponents),
        "cf_period_length": cycle.cf_period_length,
        "discriminant": render_elem(discriminant(cycle.forms[0])),
    }
    lines = ["start: %s" % render_form(cycle.forms[0]), "length: %d" % len(cycle)]
    for j, f in enumerate(cycle.forms):
        lines.append("form %d: %s exponent %d" % (j + 1, render_form(f), cycle.exponents[j]))
    lines.append("exponents: %s" % ", ".join(str(r) for r in cycle.exponents))
    lines.append("cf period length: %d" % cycle.cf_period_length)
    lines.append("discriminant: %s" % render_elem(discriminant(cycle.forms[0])))
    return _op(result, lines)


def op_form_equiv(ctx, form_text, other_text, max_steps=DEFAULT_MAX_STEPS,
                  with_witness=False):
    q1 = parse_form(ctx, form_text)
    q2 = parse_form(ctx, other_text)
    if with_witness:
        verdict, witness = equivalent(q1, q2, max_steps, with_witness=True)
    else:
        verdict, witness = equivalent(q1, q2, max_steps), None
    result = {"equivalent": verdict}
    lines = ["equivalent: %s" % ("true" if verdict else "false")]
    if with_witness:
        result["witness"] = matrix_to_json(witness) if witness is not None else None
        if witness is not None:
            lines.append("witness: %s" % render_matrix(witness))
    return _op(result, lines)


def op_form_act(ctx, form_text, word_text=None, matrix_json=None):
    q = parse_form(ctx, form_text)
    if (word_text is None) == (matrix_json is None):
        raise UsageError("provide exactly one of a word or a matrix")
    if word_text is not None:
        mat = word_to_matrix(ctx, parse_word(word_text))
    else:
        mat = matrix_from_json(ctx, matrix_json)
    out = act(q, mat)
    return _op(form_to_json(out), [render_form(out)])


def op_number_of_form(ctx, form_text):
    q = parse_form(ctx, form_text)
    alpha = alpha_of(q)
    return _op(surd_to_json(alpha), [render_surd(alpha)])


def op_form_of_number(ctx, number_text, max_steps=DEFAULT_MAX_STEPS):
    alpha = parse_surd(ctx, number_text)
    q = form_of(alpha, max_steps)
    return _op(form_to_json(q), [render_form(q)])


def op_simple_set(ctx, form_text, max_steps=DEFAULT_MAX_STEPS):
    q = parse_form(ctx, form_text)
    trace = reduce(q, max_steps)
    cycle = reduced_cycle(trace.terminal, max_steps)
    values = simple_set(cycle)
    result = {"count": len(values), "values": [surd_to_json(v) for v in values]}
    lines = ["count: %d" % len(values)]
    for j, v in enumerate(values):
        lines.append("simple %d: %s" % (j + 1, render_surd(v)))
    return _op(result, lines)


def op_phi_apply(ctx, number_text):
    x = parse_surd(ctx, number_text)
    y, branch = phi_apply(x)
    result = {"value": surd_to_json(y), "branch": branch}
    return _op(result, ["value: %s" % render_surd(y), "branch: %d" % branch])


def op_phi_orbit(ctx, number_text, max_steps=DEFAULT_MAX_STEPS):
    x = parse_surd(ctx, number_text)
    orbit = phi_orbit(x, max_steps)
    result = {
        "length": len(orbit),
        "values": [surd_to_json(v) for v in orbit.values],
        "branches": list(orbit.branches),
    }
    lines = ["length: %d" % len(orbit)]
    for j, v in enumerate(orbit.values):
        lines.append("value %d: %s branch %d" % (j + 1, render_surd(v), orbit.branches[j]))
    lines.append("branches: %s" % ", ".join(str(b) for b in orbit.branches))
    return _op(result, lines)


def op_stabilizer(ctx, number_text, max_steps=DEFAULT_MAX_STEPS):
    alpha = parse_surd(ctx, number_text)
    m, m_inv = stabilizer_generators(alpha, max_steps)
    result = {"m": matrix_to_json(m), "m_inv": matrix_to_json(m_inv)}
    return _op(result, ["M: %s" % render_matrix(m), "M_inv: %s" % render_matrix(m_inv)])
