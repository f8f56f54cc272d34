"""Generalized Clifford algebra of a quadratic form, graded by giving the
generators degree 1 and the invertible trivializer l of the value line
bundle degree 2.

Defining relations: e_i e_i = c_ii l and e_i e_j + e_j e_i = c_ij l for
i < j, where c is the coefficient table of q, so v v = q(v) l for every
degree-1 element v.  Elements are finite maps (strictly increasing index
tuple, Laurent power of l) -> base polynomial; rewriting always eliminates
the leftmost inversion, which is confluent for these relations.
"""

import math
from fractions import Fraction
from itertools import combinations

from quadrikit.polyalg import ParseError, Poly, PolyError
from quadrikit import linalg
from quadrikit.polyalg import exact_div
from quadrikit.quadform import QuadraticForm


class CliffordError(PolyError):
    pass


class CliffordContext:
    """Carrier for the algebra of a fixed quadratic form."""

    __slots__ = ("q", "rank", "base")

    def __init__(self, q):
        self.q = q
        self.rank = q.n
        self.base = q.base

    def __eq__(self, other):
        return isinstance(other, CliffordContext) and self.q == other.q

    def zero(self):
        return CliffordElement(self, {})

    def scalar(self, c):
        if not isinstance(c, Poly):
            c = self.base.const(c)
        if c.is_zero():
            return self.zero()
        return CliffordElement(self, {((), 0): c})

    def one(self):
        return self.scalar(1)

    def l_power(self, m):
        return CliffordElement(self, {((), m): self.base.one()})

    def generator(self, i):
        if not 1 <= i <= self.rank:
            raise CliffordError(f"generator index {i} out of range")
        return CliffordElement(self, {((i,), 0): self.base.one()})

    def from_vector(self, vec):
        """Degree-1 element sum_i v_i e_i from a coordinate vector."""
        if len(vec) != self.rank:
            raise CliffordError("vector length does not match rank")
        terms = {}
        for i, entry in enumerate(vec, start=1):
            if not isinstance(entry, Poly):
                entry = self.base.const(entry)
            if not entry.is_zero():
                terms[((i,), 0)] = entry
        return CliffordElement(self, terms)

    def monomial(self, idx, lpow):
        return CliffordElement(self, {(tuple(idx), lpow): self.base.one()})

    def _rewrite(self, word, lpow, coeff):
        """Normal form of coeff * e_word * l^lpow as a term map."""
        out = {}
        work = [(list(word), lpow, coeff)]
        while work:
            w, m, c = work.pop()
            if c.is_zero():
                continue
            k = next((t for t in range(len(w) - 1) if w[t] >= w[t + 1]), None)
            if k is None:
                key = (tuple(w), m)
                prev = out.get(key)
                s = c if prev is None else prev + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
                continue
            i, j = w[k], w[k + 1]
            if i == j:
                cij = self.q.coefficient(i, i)
                work.append((w[:k] + w[k + 2 :], m + 1, c * cij))
            else:
                # e_j e_i -> -e_i e_j + c_ij l  (j > i)
                swapped = w[:k] + [j, i] + w[k + 2 :]
                work.append((swapped, m, -c))
                cij = self.q.coefficient(j, i)
                if not cij.is_zero():
                    work.append((w[:k] + w[k + 2 :], m + 1, c * cij))
        return out


class CliffordElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    def _check(self, other):
        if not isinstance(other, CliffordElement) or other.ctx != self.ctx:
            raise CliffordError("context mismatch")

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, CliffordElement)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return CliffordElement(self.ctx, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CliffordElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, Poly):
            c = self.ctx.base.const(c)
        if c.is_zero():
            return self.ctx.zero()
        return CliffordElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        return cl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        return NotImplemented

    def l_shift(self, k):
        """Multiply by l^k (central, invertible)."""
        return CliffordElement(
            self.ctx, {(idx, m + k): c for (idx, m), c in self.terms.items()}
        )

    def degree(self):
        """Common degree of all terms, None for 0, error if inhomogeneous."""
        degs = {len(idx) + 2 * m for (idx, m) in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise CliffordError("element is not homogeneous")
        return degs.pop()

    def coordinates(self, basis):
        """Coefficients over an explicit monomial list [(idx, lpow), ...]."""
        zero = self.ctx.base.zero()
        leftover = set(self.terms) - set(basis)
        if leftover:
            raise CliffordError(f"element has terms outside the basis: {leftover}")
        return [self.terms.get(key, zero) for key in basis]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _basis_sort_key(kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for (idx, m), c in self.sorted_terms():
            factors = [f"e{i}" for i in idx]
            if m == 1:
                factors.append("l")
            elif m:
                factors.append(f"l^{m}")
            body = "*".join(factors)
            if not body:
                text = str(c) if len(c.terms) == 1 or c.is_constant() else f"({c})"
            elif c == c.ring.one():
                text = body
            elif c == -c.ring.one():
                text = f"-{body}"
            elif len(c.terms) == 1:
                text = f"{c}*{body}"
            else:
                text = f"({c})*{body}"
            pieces.append(text)
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"CliffordElement({self})"


def _basis_sort_key(key):
    idx, m = key
    return (len(idx), idx, m)


def cl_mul(x, y):
    """Product in normal form; degree-additive on homogeneous inputs."""
    x._check(y)
    ctx = x.ctx
    out = ctx.zero()
    for (i1, m1), c1 in x.terms.items():
        for (i2, m2), c2 in y.terms.items():
            piece = ctx._rewrite(i1 + i2, m1 + m2, c1 * c2)
            out = out + CliffordElement(ctx, piece)
    return out


def graded_basis(ctx, n):
    """Monomial basis of the degree-n component, ordered by index length
    then lexicographically; size 2^(rank-1) for rank >= 1."""
    out = []
    for k in range(0, ctx.rank + 1):
        if (n - k) % 2:
            continue
        m = (n - k) // 2
        for idx in combinations(range(1, ctx.rank + 1), k):
            out.append((idx, m))
    return out


def trace(x):
    """Top-filtration coefficient of a degree-0 element: the coefficient of
    e_1...e_2m l^-m."""
    ctx = x.ctx
    if ctx.rank % 2:
        raise CliffordError("trace needs even rank")
    deg = x.degree()
    if deg not in (None, 0):
        raise CliffordError("trace needs a degree-0 element")
    m = ctx.rank // 2
    top = (tuple(range(1, ctx.rank + 1)), -m)
    return x.terms.get(top, ctx.base.zero())


class CenterRelation:
    """Generator of the center of the even part with its monic quadratic
    relation omega^2 + alpha omega + beta = 0."""

    __slots__ = ("ctx", "omega", "alpha", "beta")

    def __init__(self, ctx, omega, alpha, beta):
        self.ctx = ctx
        self.omega = omega
        self.alpha = alpha
        self.beta = beta

    def discriminant(self):
        return self.alpha * self.alpha - self.beta * 4

    def conjugate(self):
        """Image of omega under the cover involution: -alpha - omega."""
        return self.ctx.scalar(-self.alpha) - self.omega

    def discriminant_comparison(self):
        """disc = (-1)^m s^2 det(b_q): returns (ratio, s) with ratio the
        exact rational disc/det and s the positive rational square scale,
        or (None, None) when the ratio is not a nonzero constant."""
        disc = self.discriminant()
        detb = self.ctx.q.det_bilinear()
        if detb.is_zero() or disc.is_zero():
            return None, None
        try:
            ratio = exact_div(disc, detb)
        except PolyError:
            return None, None
        if not ratio.is_constant():
            return None, None
        r = ratio.constant_term()
        m = self.ctx.rank // 2
        signed = r if m % 2 == 0 else -r
        if signed <= 0:
            return r, None
        num, den = signed.numerator, signed.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return r, Fraction(rn, rd)
        return r, None


def _unit_and_top(ctx, basis0):
    unit = basis0.index(((), 0))
    m = ctx.rank // 2
    top = basis0.index((tuple(range(1, ctx.rank + 1)), -m))
    return unit, top


def center_element(ctx):
    """Compute the rank-2 center of the even part: a primitive integral
    generator omega (unit coordinate 0, top coordinate positive) and its
    monic quadratic relation.

    The linear conditions are commutation with every degree-0 basis
    monomial; constant coordinates are tried first, then the fraction
    field of the base with denominators cleared."""
    if ctx.rank % 2 or ctx.rank == 0:
        raise CliffordError("center computation needs positive even rank")
    basis0 = graded_basis(ctx, 0)
    dim = len(basis0)
    unit_pos, top_pos = _unit_and_top(ctx, basis0)
    monos = [ctx.monomial(idx, m) for idx, m in basis0]

    # rows of the commutator system, entries Poly over the base
    rows = []
    for mj in monos:
        columns = [cl_mul(bk, mj) - cl_mul(mj, bk) for bk in monos]
        for pos in range(dim):
            key = basis0[pos]
            row = [col.terms.get(key, ctx.base.zero()) for col in columns]
            if any(not p.is_zero() for p in row):
                rows.append(row)

    vec = _solve_center_constant(ctx, rows, dim, unit_pos, top_pos)
    if vec is None:
        vec = _solve_center_fraction(ctx, rows, dim, unit_pos, top_pos)
    if vec is None:
        raise CliffordError(
            "no non-scalar central element found (implementation bug for even rank)"
        )

    omega = CliffordElement(
        ctx,
        {basis0[k]: p for k, p in enumerate(vec) if not p.is_zero()},
    )
    square = cl_mul(omega, omega)
    top_coeff = vec[top_pos].constant_term()
    sq = square.coordinates(basis0)
    alpha = sq[top_pos] / (-top_coeff)
    beta = -(sq[unit_pos] + alpha * vec[unit_pos])
    # confirm omega^2 = -alpha omega - beta on every coordinate
    for k in range(dim):
        expect = -(alpha * vec[k])
        if k == unit_pos:
            expect = expect - beta
        if sq[k] != expect:
            raise CliffordError("center relation does not close in {1, omega}")
    return CenterRelation(ctx, omega, alpha, beta)


def _normalize_center_vector(ctx, polys, dim, unit_pos, top_pos):
    """Zero the unit coordinate, clear denominators, divide integer content."""
    polys = list(polys)
    polys[unit_pos] = ctx.base.zero()
    if all(p.is_zero() for p in polys):
        return None
    if polys[top_pos].is_zero() or not polys[top_pos].is_constant():
        return None
    denom_lcm = 1
    for p in polys:
        for c in p.terms.values():
            denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    polys = [p * denom_lcm for p in polys]
    content = 0
    for p in polys:
        for c in p.terms.values():
            content = math.gcd(content, c.numerator)
    polys = [p / content for p in polys]
    if polys[top_pos].constant_term() < 0:
        polys = [-p for p in polys]
    return polys


def _identity_kernel(dim):
    return [
        [Fraction(1) if j == i else Fraction(0) for j in range(dim)]
        for i in range(dim)
    ]


def _solve_center_constant(ctx, rows, dim, unit_pos, top_pos):
    # expand polynomial rows monomial-by-monomial into a system over Q
    q_rows = []
    for row in rows:
        monomials = sorted(set().union(*(p.terms.keys() for p in row if p)))
        for mono in monomials:
            q_rows.append([p.coeff(mono) for p in row])
    kernel = linalg.q_nullspace(q_rows) if q_rows else _identity_kernel(dim)
    for vec in kernel:
        polys = [ctx.base.const(c) for c in vec]
        normalized = _normalize_center_vector(ctx, polys, dim, unit_pos, top_pos)
        if normalized is not None:
            return normalized
    return None


def _solve_center_fraction(ctx, rows, dim, unit_pos, top_pos):
    kernel = linalg.pf_nullspace(rows, ctx.base)
    for vec in kernel:
        if vec[top_pos].is_zero():
            continue
        scaled = [entry / vec[top_pos] for entry in vec]
        try:
            polys = [entry.to_poly() for k, entry in enumerate(scaled) if k != unit_pos]
        except PolyError:
            continue
        full = []
        it = iter(polys)
        for k in range(dim):
            full.append(ctx.base.zero() if k == unit_pos else next(it))
        normalized = _normalize_center_vector(ctx, full, dim, unit_pos, top_pos)
        if normalized is not None:
            return normalized
    return None


def center_checks(ctx, rel):
    """Exact commutation facts for the center generator: omega commutes
    with the whole degree-0 component, and conjugation by any degree-1
    monomial implements the cover involution v omega = conj(omega) v."""
    omega = rel.omega
    conj = rel.conjugate()
    even_ok = all(
        cl_mul(omega, m) == cl_mul(m, omega)
        for m in (ctx.monomial(i, p) for i, p in graded_basis(ctx, 0))
    )
    odd_twisted_ok = all(
        cl_mul(m, omega) == cl_mul(conj, m)
        for m in (ctx.monomial(i, p) for i, p in graded_basis(ctx, 1))
    )
    return {"commutes_degree0": even_ok, "twisted_degree1": odd_twisted_ok}


def orthogonal_sum_ranks(q, split):
    """Block rank table of the even part induced by a hyperbolic splitting:
    total 2^(n-1) against the two diagonal and two off-diagonal blocks
    built from the reduced algebra."""
    reduced_ctx = CliffordContext(split.reduced)
    b0_bar = len(graded_basis(reduced_ctx, 0))
    b1_bar = len(graded_basis(reduced_ctx, 1))
    total = len(graded_basis(CliffordContext(q), 0))
    blocks = [r for r in (b0_bar, b1_bar, b1_bar, b0_bar) if r]
    if total != 2 * b0_bar + 2 * b1_bar:
        raise CliffordError("block rank count does not match the even part")
    return {"total": total, "blocks": blocks}


# -- element parsing -------------------------------------------------------


def parse_element(source, ctx):
    """Parse the polynomial grammar extended with e<i> and the central l
    (negative powers allowed on l only); products are taken in written
    order."""
    from quadrikit.polyalg import _Tokens

    tokens = _Tokens(source)
    elem = _parse_el_expr(tokens, ctx)
    if tokens.peek() != "end":
        raise ParseError(f"trailing input at token {tokens.next()[1]!r}")
    return elem


def _parse_el_expr(tokens, ctx):
    sign = 1
    if tokens.peek() in ("+", "-"):
        if tokens.next()[0] == "-":
            sign = -1
    total = _parse_el_term(tokens, ctx)
    if sign < 0:
        total = -total
    while tokens.peek() in ("+", "-"):
        op = tokens.next()[0]
        term = _parse_el_term(tokens, ctx)
        total = total + term if op == "+" else total - term
    return total


def _parse_el_term(tokens, ctx):
    product = _parse_el_factor(tokens, ctx)
    while tokens.peek() == "*":
        tokens.next()
        product = cl_mul(product, _parse_el_factor(tokens, ctx))
    return product


def _parse_el_factor(tokens, ctx):
    base, is_l = _parse_el_atom(tokens, ctx)
    if tokens.peek() == "^":
        tokens.next()
        negative = False
        if tokens.peek() == "-":
            tokens.next()
            negative = True
        tok = tokens.expect("num")
        n = int(tok[1])
        if negative:
            if not is_l:
                raise ParseError("negative powers are only allowed on l")
            return base.ctx.l_power(-n)
        out = base.ctx.one()
        for _ in range(n):
            out = cl_mul(out, base)
        return out
    return base


def _parse_el_atom(tokens, ctx):
    kind, text = tokens.next()
    if kind == "num":
        num = int(text)
        if tokens.peek() == "/":
            tokens.next()
            den = tokens.expect("num")[1]
            return ctx.scalar(Fraction(num, int(den))), False
        return ctx.scalar(num), False
    if kind == "ident":
        if text == "l":
            return ctx.l_power(1), True
        if text.startswith("e") and text[1:].isdigit():
            return ctx.generator(int(text[1:])), False
        if text in ctx.base.variables:
            return ctx.scalar(ctx.base.var(text)), False
        raise ParseError(f"unknown identifier {text!r}")
    if kind == "(":
        inner = _parse_el_expr(tokens, ctx)
        tokens.expect(")")
        return inner, False
    if kind == "-":
        atom, _ = _parse_el_atom(tokens, ctx)
        return -atom, False
    raise ParseError(f"unexpected token {text!r}")
