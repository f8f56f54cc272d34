"""Exact multivariate polynomial arithmetic over Q, polynomial matrices,
and a small Buchberger engine for ideal membership / equality / unit tests.

Expression grammar (EBNF, whitespace insignificant):

    expr     = [sign] term { sign term } ;
    sign     = "+" | "-" ;
    term     = factor { "*" factor } ;
    factor   = atom [ "^" natural ] ;
    atom     = rational | identifier | "(" expr ")" ;
    rational = natural [ "/" natural ] ;

Canonical printing lists terms in descending monomial order with explicit
"*" between factors and "^" for powers >= 2; parse(print(p)) == p.
"""

from fractions import Fraction

from quadrikit import _kernel as K


class PolyError(Exception):
    """Malformed input or violated precondition in the polynomial layer."""


class ParseError(PolyError):
    pass


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise PolyError(f"not a rational scalar: {c!r}")


class Ring:
    """A polynomial ring Q[variables] with a fixed monomial order."""

    __slots__ = ("variables", "order", "_index", "_lex")

    def __init__(self, variables, order="grevlex"):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolyError("duplicate variable names")
        if order not in ("grevlex", "lex"):
            raise PolyError(f"unknown monomial order: {order}")
        self.variables = variables
        self.order = order
        self._index = {v: i for i, v in enumerate(variables)}
        self._lex = order == "lex"

    @property
    def arity(self):
        return len(self.variables)

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        return f"Q[{', '.join(self.variables)}; {self.order}]"

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = _as_fraction(c)
        if not c:
            return Poly(self, {})
        return Poly(self, {(0,) * self.arity: c})

    def var(self, name):
        try:
            i = self._index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r} in {self!r}") from None
        mono = tuple(1 if j == i else 0 for j in range(self.arity))
        return Poly(self, {mono: Fraction(1)})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def monomial_gt(self, m1, m2):
        if m1 == m2:
            return False
        return K.leading_monomial({m1: 1, m2: 1}, self._lex) == m1

    def sort_monomials(self, monos):
        """Monomials in descending ring order."""
        import functools

        def cmp(m1, m2):
            if m1 == m2:
                return 0
            return -1 if self.monomial_gt(m1, m2) else 1

        return sorted(monos, key=functools.cmp_to_key(cmp))

    def embed(self, poly, target):
        """Rename-based coefficient embedding into a ring with a superset
        of this ring's variables."""
        if poly.ring is not self and poly.ring != self:
            raise PolyError("poly not over this ring")
        try:
            positions = [target._index[v] for v in self.variables]
        except KeyError as e:
            raise PolyError(f"target ring is missing variable {e.args[0]!r}") from None
        terms = {}
        for m, c in poly.terms.items():
            mono = [0] * target.arity
            for pos, e in zip(positions, m):
                mono[pos] = e
            terms[tuple(mono)] = c
        return Poly(target, terms)


class Poly:
    """Immutable polynomial: term map from exponent tuples to Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- ring plumbing -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise PolyError("ring mismatch")
        return self.ring.const(other)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return (
            isinstance(other, Poly)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, K.add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, K.sub_terms(self.terms, other.terms))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Poly(self.ring, K.neg_terms(self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.ring, K.scale_terms(self.terms, _as_fraction(other)))
        other = self._coerce(other)
        return Poly(self.ring, K.mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of Poly by zero scalar")
        return self * (1 / c)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure -----------------------------------------------------

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self):
        if not self.terms:
            raise PolyError("zero polynomial has no leading monomial")
        return K.leading_monomial(self.terms, self.ring._lex)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    def monic(self):
        if not self.terms:
            return self
        return self / self.leading_coeff()

    def coeff(self, mono):
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.arity, Fraction(0))

    def is_constant(self):
        return all(sum(m) == 0 for m in self.terms)

    def sorted_terms(self):
        return [(m, self.terms[m]) for m in self.ring.sort_monomials(self.terms)]

    def evaluate(self, assignment):
        """Evaluate at a dict variable name -> Fraction/int; must cover every
        variable that occurs."""
        vals = {}
        for name, v in assignment.items():
            vals[self.ring._index[name]] = _as_fraction(v)
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    if i not in vals:
                        raise PolyError(
                            f"no value for variable {self.ring.variables[i]!r}"
                        )
                    term *= vals[i] ** e
            total += term
        return total

    def substitute(self, mapping, target=None):
        """Substitute polynomials for variables.  `mapping` sends variable
        names to Poly over `target` (default: this ring); unmapped
        variables map to themselves."""
        ring = target or self.ring
        images = []
        for v in self.ring.variables:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, Poly):
                    img = ring.const(img)
                images.append(img)
            else:
                images.append(ring.var(v))
        total = ring.zero()
        for m, c in self.terms.items():
            term = ring.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * images[i] ** e
            total = total + term
        return total

    # -- printing ------------------------------------------------------

    def _format_term(self, mono, coeff):
        factors = []
        for v, e in zip(self.ring.variables, mono):
            if e == 1:
                factors.append(v)
            elif e >= 2:
                factors.append(f"{v}^{e}")
        if not factors:
            return str(abs(coeff))
        body = "*".join(factors)
        a = abs(coeff)
        if a == 1:
            return body
        return f"{a}*{body}"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            body = self._format_term(m, c)
            if i == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"Poly({self})"


# -- parsing -----------------------------------------------------------


class _Tokens:
    def __init__(self, source):
        self.toks = self._scan(source)
        self.pos = 0

    @staticmethod
    def _scan(source):
        toks = []
        i, n = 0, len(source)
        while i < n:
            ch = source[i]
            if ch.isspace():
                i += 1
            elif ch in "+-*^()/":
                toks.append((ch, ch))
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and source[j].isdigit():
                    j += 1
                toks.append(("num", source[i:j]))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (source[j].isalnum() or source[j] == "_"):
                    j += 1
                toks.append(("ident", source[i:j]))
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r} at position {i}")
        toks.append(("end", ""))
        return toks

    def peek(self):
        return self.toks[self.pos][0]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, got {tok[1]!r}")
        return tok


def _parse_expr(tokens, ring):
    sign = 1
    if tokens.peek() in ("+", "-"):
        if tokens.next()[0] == "-":
            sign = -1
    total = _parse_term(tokens, ring) * sign
    while tokens.peek() in ("+", "-"):
        op = tokens.next()[0]
        term = _parse_term(tokens, ring)
        total = total + term if op == "+" else total - term
    return total


def _parse_term(tokens, ring):
    product = _parse_factor(tokens, ring)
    while tokens.peek() == "*":
        tokens.next()
        product = product * _parse_factor(tokens, ring)
    return product


def _parse_factor(tokens, ring):
    base = _parse_atom(tokens, ring)
    if tokens.peek() == "^":
        tokens.next()
        tok = tokens.next()
        if tok[0] != "num":
            raise ParseError("exponent must be a nonnegative integer")
        base = base ** int(tok[1])
    return base


def _parse_atom(tokens, ring):
    kind, text = tokens.next()
    if kind == "num":
        num = int(text)
        if tokens.peek() == "/":
            tokens.next()
            den = tokens.expect("num")[1]
            return ring.const(Fraction(num, int(den)))
        return ring.const(num)
    if kind == "ident":
        return ring.var(text)
    if kind == "(":
        inner = _parse_expr(tokens, ring)
        tokens.expect(")")
        return inner
    if kind == "-":
        return -_parse_atom(tokens, ring)
    if kind == "+":
        return _parse_atom(tokens, ring)
    raise ParseError(f"unexpected token {text!r}")


def parse_poly(source, ring):
    """Parse an expression into canonical Poly form over `ring`."""
    tokens = _Tokens(source)
    poly = _parse_expr(tokens, ring)
    if tokens.peek() != "end":
        raise ParseError(f"trailing input at token {tokens.next()[1]!r}")
    return poly


# -- exact division and matrices ----------------------------------------


def _mono_div(m1, m2):
    q = tuple(a - b for a, b in zip(m1, m2))
    if any(e < 0 for e in q):
        return None
    return q


def exact_div(f, g):
    """Quotient f/g when g divides f exactly; raises PolyError otherwise."""
    if g.is_zero():
        raise PolyError("division by zero polynomial")
    ring = f.ring
    lm_g = g.leading_monomial()
    lc_g = g.leading_coeff()
    quotient = {}
    rest = f.terms
    while rest:
        lm = K.leading_monomial(rest, ring._lex)
        q = _mono_div(lm, lm_g)
        if q is None:
            raise PolyError("polynomial division is not exact")
        c = rest[lm] / lc_g
        quotient[q] = c
        rest = K.sub_terms(rest, K.shift_terms(g.terms, q, c))
    return Poly(ring, quotient)


class PolyMatrix:
    """Rectangular matrix of Poly entries sharing one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries):
        self.ring = ring
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise PolyError("ragged matrix")
            for p in row:
                if not isinstance(p, Poly) or p.ring != ring:
                    raise PolyError("matrix entry over the wrong ring")

    @classmethod
    def identity(cls, ring, n):
        return cls(
            ring,
            [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)],
        )

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, [[ring.zero()] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def transpose(self):
        return PolyMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise PolyError("dimension mismatch in matrix product")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    s = self.ring.zero()
                    for k in range(self.cols):
                        s = s + self.entries[i][k] * other.entries[k][j]
                    row.append(s)
                out.append(row)
            return PolyMatrix(self.ring, out)
        return PolyMatrix(
            self.ring, [[p * other for p in row] for row in self.entries]
        )

    def __sub__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise PolyError("dimension mismatch")
        return PolyMatrix(
            self.ring,
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def submatrix(self, row_idx, col_idx):
        return PolyMatrix(
            self.ring, [[self.entries[i][j] for j in col_idx] for i in row_idx]
        )

    def map(self, fn):
        return [[fn(p) for p in row] for row in self.entries]

    def evaluate(self, assignment):
        return [[p.evaluate(assignment) for p in row] for row in self.entries]

    def __str__(self):
        cells = [[str(p) for p in row] for row in self.entries]
        widths = [max(len(cells[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        lines = []
        for row in cells:
            lines.append("[ " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) + " ]")
        return "\n".join(lines)


def _det_cofactor(m):
    n = m.rows
    if n == 1:
        return m.entries[0][0]
    if n == 2:
        a, b = m.entries[0]
        c, d = m.entries[1]
        return a * d - b * c
    total = m.ring.zero()
    cols = list(range(n))
    for j in range(n):
        minor = m.submatrix(range(1, n), [c for c in cols if c != j])
        term = m.entries[0][j] * _det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_bareiss(m):
    # Fraction-free elimination; exact divisions by the previous pivot are
    # guaranteed by the Bareiss identity (row swaps only flip the sign).
    n = m.rows
    a = [row[:] for row in m.entries]
    ring = m.ring
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        pivot_row = next((r for r in range(k, n) if not a[r][k].is_zero()), None)
        if pivot_row is None:
            return ring.zero()
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = exact_div(num, prev)
            a[i][k] = ring.zero()
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def det(m):
    """Exact determinant of a square PolyMatrix."""
    if m.rows != m.cols:
        raise PolyError("determinant of a non-square matrix")
    if m.rows == 0:
        return m.ring.one()
    if m.rows <= 3:
        return _det_cofactor(m)
    return _det_bareiss(m)


def minors_ideal(m, k):
    """Ideal generated by all k x k minors of m."""
    from itertools import combinations

    if not 1 <= k <= min(m.rows, m.cols):
        raise PolyError(f"minor size {k} out of range")
    gens = []
    for rows in combinations(range(m.rows), k):
        for cols in combinations(range(m.cols), k):
            gens.append(det(m.submatrix(rows, cols)))
    return Ideal(m.ring, gens)


# -- Groebner engine -----------------------------------------------------


def _mono_lcm(m1, m2):
    return tuple(max(a, b) for a, b in zip(m1, m2))


def normal_form(f, basis):
    """Remainder of f under multivariate division by `basis`."""
    ring = f.ring
    lead = [(g.leading_monomial(), g.leading_coeff(), g.terms) for g in basis]
    remainder = {}
    rest = f.terms
    while rest:
        lm = K.leading_monomial(rest, ring._lex)
        c = rest[lm]
        for lm_g, lc_g, terms_g in lead:
            q = _mono_div(lm, lm_g)
            if q is not None:
                rest = K.sub_terms(rest, K.shift_terms(terms_g, q, c / lc_g))
                break
        else:
            remainder[lm] = c
            rest = dict(rest)
            del rest[lm]
    return Poly(ring, remainder)


def _s_poly(f, g):
    lm_f, lm_g = f.leading_monomial(), g.leading_monomial()
    lcm = _mono_lcm(lm_f, lm_g)
    qf = tuple(a - b for a, b in zip(lcm, lm_f))
    qg = tuple(a - b for a, b in zip(lcm, lm_g))
    left = K.shift_terms(f.terms, qf, 1 / f.leading_coeff())
    right = K.shift_terms(g.terms, qg, 1 / g.leading_coeff())
    return Poly(f.ring, K.sub_terms(left, right))


def _buchberger(gens, ring):
    basis = [g.monic() for g in gens if not g.is_zero()]
    if not basis:
        return []
    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    while pairs:
        # normal selection: smallest lcm degree first, ties by index
        i, j = min(
            pairs,
            key=lambda p: (
                sum(
                    _mono_lcm(
                        basis[p[0]].leading_monomial(), basis[p[1]].leading_monomial()
                    )
                ),
                p,
            ),
        )
        pairs.discard((i, j))
        lm_i, lm_j = basis[i].leading_monomial(), basis[j].leading_monomial()
        if _mono_lcm(lm_i, lm_j) == tuple(a + b for a, b in zip(lm_i, lm_j)):
            continue  # coprime leading monomials
        h = normal_form(_s_poly(basis[i], basis[j]), basis)
        if not h.is_zero():
            basis.append(h.monic())
            pairs.update((len(basis) - 1, t) for t in range(len(basis) - 1))
    return _reduce_basis(basis, ring)


def _reduce_basis(basis, ring):
    # minimalize: drop elements whose leading monomial is divisible by
    # another's, then fully inter-reduce and sort descending
    minimal = []
    for i, g in enumerate(basis):
        lm = g.leading_monomial()
        if any(
            _mono_div(lm, h.leading_monomial()) is not None
            for j, h in enumerate(basis)
            if j != i and (j < i or h.leading_monomial() != lm)
        ):
            continue
        minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        h = normal_form(g, others) if others else g
        if not h.is_zero():
            reduced.append(h.monic())
    reduced.sort(
        key=lambda g: _MonoKey(ring, g.leading_monomial()), reverse=True
    )
    return reduced


class _MonoKey:
    __slots__ = ("ring", "mono")

    def __init__(self, ring, mono):
        self.ring = ring
        self.mono = mono

    def __lt__(self, other):
        return self.ring.monomial_gt(other.mono, self.mono)

    def __eq__(self, other):
        return self.mono == other.mono


class Ideal:
    """An ideal given by generators, with a lazily cached reduced Groebner
    basis.  The cache is filled at most once; the fill is idempotent, so
    concurrent shared reads are safe."""

    __slots__ = ("ring", "generators", "_groebner")

    def __init__(self, ring, generators):
        self.ring = ring
        gens = []
        for g in generators:
            if not isinstance(g, Poly) or g.ring != ring:
                raise PolyError("generator over the wrong ring")
            gens.append(g)
        self.generators = tuple(gens)
        self._groebner = None

    def groebner(self):
        """The unique reduced Groebner basis for the ring's order."""
        if self._groebner is None:
            self._groebner = tuple(_buchberger(list(self.generators), self.ring))
        return list(self._groebner)

    def contains(self, f):
        if f.ring != self.ring:
            raise PolyError("ring mismatch")
        basis = self.groebner()
        if not basis:
            return f.is_zero()
        return normal_form(f, basis).is_zero()

    def is_unit(self):
        basis = self.groebner()
        return len(basis) == 1 and basis[0] == self.ring.one()

    def equals(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            raise PolyError("ring mismatch")
        return all(self.contains(g) for g in other.generators) and all(
            other.contains(g) for g in self.generators
        )

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def groebner(ideal):
    return ideal.groebner()


def ideal_membership(f, ideal):
    return ideal.contains(f)


def is_unit_ideal(ideal):
    return ideal.is_unit()


def ideals_equal(i, j):
    return i.equals(j)
