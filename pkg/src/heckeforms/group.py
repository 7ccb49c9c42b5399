"""Hecke-group matrices over Z[lambda_p].

Generators S = (1 L; 0 1), T = (0 -1; 1 0), U = S*T; elements are det-1
matrices identified with their negation.  The canonical representative makes
the first nonzero entry (in a, b, c, d order) positive, so projective
equality is plain equality of canonical forms.  Word products in the raw
(un-normalized) sign are available separately because fixed-point formulas
depend on the literal sign of the product.
"""

from collections import namedtuple

from .errors import (
    ConsistencyError,
    EllipticElementError,
    IdentityElementError,
    ParseError,
    UsageError,
)
from .ring import RingElem, elem_from_json, elem_to_json, render_elem, sqrt_in_field
from .surd import Surd

RawMat = namedtuple("RawMat", "a b c d")


class GroupElem:
    """Canonical projective representative of a det-1 matrix (a b; c d)."""

    __slots__ = ("ctx", "a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        ctx = a.ctx
        det = a * d - b * c
        if det != ctx.one:
            raise UsageError("matrix determinant must be 1, got %s" % render_elem(det))
        for e in (a, b, c, d):
            s = e.sign()
            if s != 0:
                if s < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        self.ctx = ctx
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_raw(cls, raw):
        return cls(raw.a, raw.b, raw.c, raw.d)

    def raw(self):
        return RawMat(self.a, self.b, self.c, self.d)

    def trace(self):
        return self.a + self.d

    def __mul__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        return GroupElem.from_raw(_raw_mul(self.raw(), other.raw()))

    def inv(self):
        return GroupElem(self.d, -self.b, -self.c, self.a)

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        return (self.ctx.p == other.ctx.p and self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.ctx.p, self.a, self.b, self.c, self.d))

    def __repr__(self):
        return "GroupElem(p=%d, %s)" % (self.ctx.p, render_matrix(self))


def _raw_mul(m, n):
    return RawMat(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def _raw_inv(m):
    return RawMat(m.d, -m.b, -m.c, m.a)


def gen_S(ctx):
    return GroupElem(ctx.one, ctx.lambda_elem, ctx.zero, ctx.one)


def gen_T(ctx):
    return GroupElem(ctx.zero, -ctx.one, ctx.one, ctx.zero)


def gen_U(ctx):
    return GroupElem(ctx.lambda_elem, -ctx.one, ctx.one, ctx.zero)


def identity(ctx):
    return GroupElem(ctx.one, ctx.zero, ctx.zero, ctx.one)


def mat_mul(m, n):
    return m * n


def mat_inv(m):
    return m.inv()


def proj_equal(m, n):
    return m == n


def classify(m):
    """One of "identity", "hyperbolic", "parabolic", "elliptic"."""
    ctx = m.ctx
    if m.a == ctx.one and m.d == ctx.one and m.b.is_zero() and m.c.is_zero():
        return "identity"
    t = m.trace()
    s = (t * t - 4).sign()
    if s > 0:
        return "hyperbolic"
    if s == 0:
        return "parabolic"
    return "elliptic"


def fixed_points(m):
    """Fixed points on the extended real line: (plus, minus) for hyperbolic
    elements, a single point for parabolic ones."""
    ctx = m.ctx
    kind = classify(m)
    if kind == "identity":
        raise IdentityElementError("every point is fixed by the identity")
    if kind == "elliptic":
        raise EllipticElementError("elliptic fixed points are not real")
    if m.c.is_zero():
        if kind == "parabolic":
            return (Surd.infinite(ctx),)
        other = Surd(ctx, m.b, ctx.zero, m.d - m.a, None)
        return (Surd.infinite(ctx), other)
    two_c = m.c + m.c
    diff = m.a - m.d
    if kind == "parabolic":
        return (Surd(ctx, diff, ctx.zero, two_c, None),)
    t = m.trace()
    disc = t * t - 4
    root = sqrt_in_field(disc)
    if root is not None:
        plus = Surd(ctx, diff + root, ctx.zero, two_c, None)
        minus = Surd(ctx, diff - root, ctx.zero, two_c, None)
    else:
        plus = Surd(ctx, diff, ctx.one, two_c, disc)
        minus = Surd(ctx, diff, -ctx.one, two_c, disc)
    return (plus, minus)


def c_seq(ctx, k):
    """c_k with c_0 = 0, c_1 = 1, c_{k+1} = lambda*c_k - c_{k-1}; c_{-k} = -c_k."""
    if k < 0:
        return -c_seq(ctx, -k)
    cache = ctx._c_cache
    while len(cache) <= k:
        cache.append(ctx.lambda_elem * cache[-1] - cache[-2])
    return cache[k]


def u_power(ctx, k):
    """U^k in closed form (c_{k+1} -c_k; c_k -c_{k-1}), any integer k."""
    return GroupElem(c_seq(ctx, k + 1), -c_seq(ctx, k), c_seq(ctx, k), -c_seq(ctx, k - 1))


def u_zero(ctx, k):
    """U^k(0) = c_k / c_{k-1}; the interval endpoints, defined for 1 <= k <= p."""
    if not 1 <= k <= ctx.p:
        raise UsageError("u_zero index must satisfy 1 <= k <= p, got %d" % k)
    if k == 1:
        return Surd.infinite(ctx)
    return Surd(ctx, c_seq(ctx, k), ctx.zero, c_seq(ctx, k - 1), None)


def word_product_raw(ctx, word):
    """Literal product of S^r T factors, without sign canonicalization."""
    lam = ctx.lambda_elem
    a, b, c, d = ctx.one, ctx.zero, ctx.zero, ctx.one
    for r in word:
        # right-multiply by S^r T = (r*lambda, -1; 1, 0)
        rl = lam * r
        a, b = a * rl + b, -a
        c, d = c * rl + d, -c
    return RawMat(a, b, c, d)


def word_to_matrix(ctx, word):
    """Exact product S^{r0} T S^{r1} T ... S^{rk} T (empty word -> I)."""
    return GroupElem.from_raw(word_product_raw(ctx, word))


def render_matrix(m):
    return "[[%s, %s], [%s, %s]]" % (
        render_elem(m.a), render_elem(m.b), render_elem(m.c), render_elem(m.d))


def matrix_to_json(m):
    return {"a": elem_to_json(m.a), "b": elem_to_json(m.b),
            "c": elem_to_json(m.c), "d": elem_to_json(m.d)}


def matrix_from_json(ctx, obj):
    try:
        return GroupElem(
            elem_from_json(ctx, obj["a"]), elem_from_json(ctx, obj["b"]),
            elem_from_json(ctx, obj["c"]), elem_from_json(ctx, obj["d"]))
    except KeyError as exc:
        raise ParseError("matrix JSON missing key %s" % exc)


def parse_word(text):
    """Word syntax "[2,3,2,1,1,4]" (negative exponents permitted)."""
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ParseError("word must look like [r0,r1,...]", 0)
    inner = t[1:-1].strip()
    if not inner:
        return ()
    out = []
    for piece in inner.split(","):
        piece = piece.strip()
        try:
            out.append(int(piece))
        except ValueError:
            raise ParseError("bad word entry %r" % piece, text.find(piece))
    return tuple(out)
