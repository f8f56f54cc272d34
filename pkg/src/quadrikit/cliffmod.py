"""Clifford ideals with certified ranks, exact-sequence verifiers over
seeded sample points, the duality trace pairing, and spinor presentation
matrices checked as matrix factorizations of the quadratic form.

Local freeness is certified sample-wise: a generic base point plus five
further points off the first degeneration locus, drawn from a fixed seed.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from quadrikit.polyalg import PolyError, PolyMatrix, Ring
from quadrikit import linalg
from quadrikit.clifford import CliffordError, cl_mul, graded_basis, trace
from quadrikit.quadform import QuadFormError, fiber_names, is_isotropic

DEFAULT_SEED = 0x5EED
CERT_SAMPLES = 5
_MAX_TRIES = 100


class CliffModError(CliffordError):
    pass


class Specialization:
    """A rational base point with seed provenance; `generic` points are
    rejection-sampled off the zero locus of a given polynomial."""

    __slots__ = ("assignment", "seed", "rejections")

    def __init__(self, assignment, seed=None, rejections=0):
        self.assignment = {k: Fraction(v) for k, v in assignment.items()}
        self.seed = seed
        self.rejections = rejections

    @classmethod
    def generic(cls, ring, rng, avoid=None, seed=None, lo=-9, hi=9):
        """Sample integer coordinates until `avoid` is nonzero there."""
        rejections = 0
        for _ in range(_MAX_TRIES):
            assignment = {v: Fraction(rng.randint(lo, hi)) for v in ring.variables}
            if avoid is None or avoid.evaluate(assignment) != 0:
                return cls(assignment, seed=seed, rejections=rejections)
            rejections += 1
        raise CliffModError(
            "could not sample a point off the degeneration locus "
            f"after {_MAX_TRIES} tries"
        )

    def as_strings(self):
        return {k: str(v) for k, v in sorted(self.assignment.items())}

    def __repr__(self):
        body = ", ".join(f"{k}={v}" for k, v in sorted(self.assignment.items()))
        return f"Specialization({body})"


def _off_locus_sampler(ctx, seed):
    """Yield specializations avoiding the first degeneration locus; errors
    when that locus is the whole base."""
    detb = ctx.q.det_bilinear()
    if detb.is_zero():
        raise CliffModError(
            "the form is degenerate everywhere; no point lies off the locus"
        )
    rng = random.Random(seed)

    def draw():
        return Specialization.generic(ctx.base, rng, avoid=detb, seed=seed)

    return draw


def _generic_sampler(ctx, seed):
    """Generic point for rank certification; falls back to unconstrained
    sampling when det b_q is identically zero (recorded by the caller)."""
    detb = ctx.q.det_bilinear()
    avoid = None if detb.is_zero() else detb
    rng = random.Random(seed)

    def draw():
        return Specialization.generic(ctx.base, rng, avoid=avoid, seed=seed)

    return draw, avoid is None


def _eval_rows(rows, assignment):
    return [[p.evaluate(assignment) for p in row] for row in rows]


@dataclass
class SampleResult:
    point: dict
    ok: bool
    data: dict = field(default_factory=dict)


@dataclass
class Report:
    operation: str
    configuration: dict
    samples: list
    ok: bool
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "operation": self.operation,
            "configuration": self.configuration,
            "ok": self.ok,
            "notes": list(self.notes),
            "samples": [
                {"point": s.point, "ok": s.ok, "data": s.data} for s in self.samples
            ],
        }

    def to_text(self):
        lines = [f"{self.operation}: {'PASS' if self.ok else 'FAIL'}"]
        for key, value in self.configuration.items():
            lines.append(f"  {key} = {value}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        for i, s in enumerate(self.samples):
            point = ", ".join(f"{k}={v}" for k, v in s.point.items()) or "(point base)"
            status = "pass" if s.ok else "FAIL"
            data = "; ".join(f"{k}={v}" for k, v in s.data.items())
            lines.append(f"  sample {i} [{point}]: {status}  {data}")
        return "\n".join(lines)


def _run_samples(draw, count, worker, jobs=1):
    points = [draw() for _ in range(count)]
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, points))
    else:
        results = [worker(p) for p in points]
    return results


class IdealBasis:
    """Certified generating set of a one-sided Clifford ideal in degree n,
    with coordinates over the graded basis of that degree."""

    __slots__ = (
        "ctx",
        "w",
        "n",
        "side",
        "generators",
        "coord_matrix",
        "spanning_monomials",
        "certification",
    )

    def __init__(self, ctx, w, n, side, generators, coord_matrix, spanning_monomials, certification):
        self.ctx = ctx
        self.w = w
        self.n = n
        self.side = side
        self.generators = generators
        self.coord_matrix = coord_matrix
        self.spanning_monomials = spanning_monomials
        self.certification = certification

    @property
    def rank(self):
        return len(self.generators)


def expected_ideal_rank(ctx, w):
    return 2 ** (ctx.rank - w.r - 1)


def w_top_element(ctx, w):
    """Product of the subbundle's vectors as a degree-r element."""
    out = ctx.one()
    for vec in w.vectors:
        out = cl_mul(out, ctx.from_vector(vec))
    return out


def clifford_ideal(ctx, w, n, side="left", seed=DEFAULT_SEED):
    """Generators of the n-th left (right) ideal of the subbundle: the
    spanning set {m w_top} (or {w_top m}) over the graded basis in degree
    n - r, greedily reduced to full rank at a generic point and re-checked
    at five further off-locus points."""
    if side not in ("left", "right"):
        raise CliffModError(f"side must be left or right, not {side!r}")
    if w.r and not is_isotropic(ctx.q, w):
        raise QuadFormError("subbundle is not isotropic")
    omega_w = w_top_element(ctx, w)
    span_basis = graded_basis(ctx, n - w.r)
    target_basis = graded_basis(ctx, n)
    spanning = []
    for key in span_basis:
        m = ctx.monomial(*key)
        elem = cl_mul(m, omega_w) if side == "left" else cl_mul(omega_w, m)
        spanning.append(elem)
    coord_rows = [e.coordinates(target_basis) for e in spanning]

    draw, degenerate_base = _generic_sampler(ctx, seed)
    point = draw()
    numeric = _eval_rows(coord_rows, point.assignment)
    expected = expected_ideal_rank(ctx, w)

    selected = []
    sel_rows = []
    for idx, row in enumerate(numeric):
        if linalg.q_rank(sel_rows + [row]) > len(selected):
            selected.append(idx)
            sel_rows.append(row)
    if len(selected) != expected:
        raise CliffModError(
            f"ideal rank {len(selected)} != expected {expected} at generic "
            f"point {point!r}"
        )

    certification = {
        "generic_point": point.as_strings(),
        "rejections": point.rejections,
        "degenerate_base": degenerate_base,
        "extra_points": [],
    }
    if not degenerate_base:
        for _ in range(CERT_SAMPLES):
            extra = draw()
            rows = _eval_rows([coord_rows[i] for i in selected], extra.assignment)
            ok = linalg.q_rank(rows) == expected
            certification["extra_points"].append(
                {"point": extra.as_strings(), "full_rank": ok}
            )
            if not ok:
                raise CliffModError(
                    f"selected generators drop rank at {extra!r}"
                )

    generators = [spanning[i] for i in selected]
    matrix = PolyMatrix(ctx.base, [coord_rows[i] for i in selected])
    monomials = [span_basis[i] for i in selected]
    return IdealBasis(ctx, w, n, side, generators, matrix, monomials, certification)


def check_l_periodicity(ctx, w, n, side="left", seed=DEFAULT_SEED):
    """Exact coordinate equality of the degree n+2 ideal with the l-shift
    of the degree n ideal."""
    a = clifford_ideal(ctx, w, n, side, seed)
    b = clifford_ideal(ctx, w, n + 2, side, seed)
    return a.coord_matrix == b.coord_matrix and a.spanning_monomials == [
        (idx, m - 1) for idx, m in b.spanning_monomials
    ]


def verify_multiplication_iso(ctx, w, m, n, samples=CERT_SAMPLES, seed=DEFAULT_SEED, jobs=1):
    """At off-locus points, multiplication by the degree-m component maps
    the degree-n ideal onto the degree-(m+n) ideal with the expected rank."""
    basis_m = graded_basis(ctx, m)
    ideal_n = clifford_ideal(ctx, w, n, "left", seed)
    ideal_mn = clifford_ideal(ctx, w, m + n, "left", seed)
    target_basis = graded_basis(ctx, m + n)
    expected = expected_ideal_rank(ctx, w)

    product_rows = []
    for key in basis_m:
        b = ctx.monomial(*key)
        for g in ideal_n.generators:
            product_rows.append(cl_mul(b, g).coordinates(target_basis))
    ideal_rows = [list(row) for row in ideal_mn.coord_matrix.entries]

    draw = _off_locus_sampler(ctx, seed)

    def worker(point):
        prod = _eval_rows(product_rows, point.assignment)
        ideal = _eval_rows(ideal_rows, point.assignment)
        r_prod = linalg.q_rank(prod)
        r_ideal = linalg.q_rank(ideal)
        r_stack = linalg.q_rank(prod + ideal)
        ok = r_prod == r_ideal == r_stack == expected
        return SampleResult(
            point.as_strings(),
            ok,
            {"product_rank": r_prod, "ideal_rank": r_ideal, "stacked_rank": r_stack},
        )

    results = _run_samples(draw, samples, worker, jobs)
    notes = []
    ok = all(r.ok for r in results)
    if m == 2:
        periodic = ideal_mn.coord_matrix == ideal_n.coord_matrix
        notes.append(f"l-shift coordinate equality with degree {n}: {periodic}")
        ok = ok and periodic
    return Report(
        operation="multiplication-iso",
        configuration={"w_rank": w.r, "m": m, "n": n, "expected_rank": expected},
        samples=results,
        ok=ok,
        notes=notes,
    )


def verify_cokernel_sequence(ctx, w, n, samples=CERT_SAMPLES, seed=DEFAULT_SEED, jobs=1):
    """Rank bookkeeping of the presentation of the degree n + r ideal as a
    quotient of the degree-n component by the image of multiplication from
    the subbundle."""
    basis_n = graded_basis(ctx, n)
    basis_prev = graded_basis(ctx, n - 1)
    dim = len(basis_n)
    expected = expected_ideal_rank(ctx, w)
    omega_w = w_top_element(ctx, w)

    image_rows = []
    composite_zero = True
    for key in basis_prev:
        b = ctx.monomial(*key)
        for vec in w.vectors:
            bw = cl_mul(b, ctx.from_vector(vec))
            image_rows.append(bw.coordinates(basis_n))
            if not cl_mul(bw, omega_w).is_zero():
                composite_zero = False
    quotient_rows = []
    target_basis = graded_basis(ctx, n + w.r)
    for key in basis_n:
        b = ctx.monomial(*key)
        quotient_rows.append(cl_mul(b, omega_w).coordinates(target_basis))

    # this sequence needs no primitivity, so degenerate bases fall back to
    # unconstrained sample points
    draw, degenerate = _generic_sampler(ctx, seed)

    def worker(point):
        img = _eval_rows(image_rows, point.assignment) if image_rows else []
        quot = _eval_rows(quotient_rows, point.assignment)
        r_img = linalg.q_rank(img) if img else 0
        r_quot = linalg.q_rank(quot)
        ok = (dim - r_img == expected) and (r_quot == expected)
        return SampleResult(
            point.as_strings(),
            ok,
            {"dim": dim, "image_rank": r_img, "quotient_rank": r_quot},
        )

    results = _run_samples(draw, samples, worker, jobs)
    notes = [f"composite with w_top vanishes identically: {composite_zero}"]
    if degenerate:
        notes.append("degenerate base: sample points are not off the locus")
    return Report(
        operation="cokernel",
        configuration={"w_rank": w.r, "n": n, "expected_rank": expected},
        samples=results,
        ok=composite_zero and all(r.ok for r in results),
        notes=notes,
    )


def verify_flag_sequence(ctx, w_sub, w, n, samples=CERT_SAMPLES, seed=DEFAULT_SEED, jobs=1):
    """For nested isotropic subbundles of corank one, the degree-n ideal of
    the larger sits inside that of the smaller with quotient the degree
    n+1 ideal of the larger, realized by multiplication with the added
    vector."""
    if w_sub.r != w.r - 1:
        raise CliffModError("inner subbundle must have corank 1 in the outer")
    for a, b in zip(w_sub.vectors, w.vectors):
        if a != b:
            raise CliffModError("inner subbundle must be a prefix of the outer")
    ideal_w = clifford_ideal(ctx, w, n, "left", seed)
    ideal_sub = clifford_ideal(ctx, w_sub, n, "left", seed)
    ideal_next = clifford_ideal(ctx, w, n + 1, "left", seed)
    last = ctx.from_vector(w.vectors[-1])
    basis_next = graded_basis(ctx, n + 1)

    mult_rows = [
        cl_mul(g, last).coordinates(basis_next) for g in ideal_sub.generators
    ]
    w_rows = [list(r) for r in ideal_w.coord_matrix.entries]
    sub_rows = [list(r) for r in ideal_sub.coord_matrix.entries]
    next_rows = [list(r) for r in ideal_next.coord_matrix.entries]

    # holds without primitivity; fall back on degenerate bases
    draw, degenerate = _generic_sampler(ctx, seed)

    def worker(point):
        a = _eval_rows(w_rows, point.assignment)
        b = _eval_rows(sub_rows, point.assignment)
        r_w = linalg.q_rank(a)
        r_sub = linalg.q_rank(b)
        contained = linalg.q_rank(a + b) == r_sub
        mult = _eval_rows(mult_rows, point.assignment)
        nxt = _eval_rows(next_rows, point.assignment)
        r_mult = linalg.q_rank(mult)
        r_next = linalg.q_rank(nxt)
        surjective = r_mult == r_next == linalg.q_rank(mult + nxt)
        ok = (
            contained
            and surjective
            and r_sub - r_w == r_next
        )
        return SampleResult(
            point.as_strings(),
            ok,
            {
                "inner_rank": r_sub,
                "outer_rank": r_w,
                "next_rank": r_next,
                "contained": contained,
                "surjective": surjective,
            },
        )

    results = _run_samples(draw, samples, worker, jobs)
    notes = []
    if degenerate:
        notes.append("degenerate base: sample points are not off the locus")
    return Report(
        operation="flag",
        configuration={"w_rank": w.r, "inner_rank": w_sub.r, "n": n},
        samples=results,
        ok=all(r.ok for r in results),
        notes=notes,
    )


def duality_pairing(ctx, w, k, seed=DEFAULT_SEED):
    """Trace pairing between the degree-k left ideal and the degree r-k
    right ideal, written against the basis representatives of the right
    generators so every product has degree 0."""
    if ctx.rank % 2:
        raise CliffModError("duality pairing needs even rank")
    left = clifford_ideal(ctx, w, k, "left", seed)
    right = clifford_ideal(ctx, w, w.r - k, "right", seed)
    rows = []
    for mono in right.spanning_monomials:
        rep = ctx.monomial(*mono)
        rows.append([trace(cl_mul(rep, g)) for g in left.generators])
    return PolyMatrix(ctx.base, rows)


def verify_duality(ctx, w, k, samples=CERT_SAMPLES, seed=DEFAULT_SEED, jobs=1):
    """Pairing determinant is nonzero at every off-locus sample."""
    from quadrikit.polyalg import det

    pairing = duality_pairing(ctx, w, k, seed)
    d = det(pairing)
    draw = _off_locus_sampler(ctx, seed)

    def worker(point):
        value = d.evaluate(point.assignment)
        return SampleResult(point.as_strings(), value != 0, {"det": str(value)})

    results = _run_samples(draw, samples, worker, jobs)
    return Report(
        operation="duality",
        configuration={"w_rank": w.r, "k": k, "size": pairing.rows},
        samples=results,
        ok=all(r.ok for r in results),
    )


class SpinorPresentation:
    """Matrix of multiplication by the generic fiber vector from the degree
    n-1 ideal to the degree-n ideal, in the chosen generator coordinates;
    entries are linear in the fiber variables."""

    __slots__ = ("ctx", "w", "n", "phi", "ring")

    def __init__(self, ctx, w, n, phi, ring):
        self.ctx = ctx
        self.w = w
        self.n = n
        self.phi = phi
        self.ring = ring

    @property
    def size(self):
        return self.phi.rows


def fiber_ring(ctx):
    return Ring(
        ctx.base.variables + tuple(fiber_names(ctx.rank)), ctx.base.order
    )


def spinor_phi(ctx, w, n, seed=DEFAULT_SEED, source=None, target=None):
    """Presentation matrix in degree n: expresses x g_j over the degree-n
    generators, x = sum x_i e_i the generic fiber vector."""
    src = source or clifford_ideal(ctx, w, n - 1, "left", seed)
    dst = target or clifford_ideal(ctx, w, n, "left", seed)
    basis_n = graded_basis(ctx, n)
    ring = fiber_ring(ctx)
    d = len(dst.generators)
    coords_t = [
        [dst.coord_matrix.entries[j][c] for j in range(d)]
        for c in range(len(basis_n))
    ]
    phi_entries = [[ring.zero() for _ in range(d)] for _ in range(d)]
    for j, g in enumerate(src.generators):
        for i in range(1, ctx.rank + 1):
            image = cl_mul(ctx.generator(i), g)
            target_vec = image.coordinates(basis_n)
            sol = linalg.pf_solve(coords_t, target_vec, ctx.base)
            if sol is None:
                raise CliffModError(
                    "image is not expressible in the target generators "
                    f"(generator {j}, fiber index {i})"
                )
            xi = ring.var(f"x{i}")
            for kk in range(d):
                entry = sol[kk]
                if entry.is_zero():
                    continue
                try:
                    coeff = entry.to_poly()
                except PolyError:
                    raise CliffModError(
                        "presentation coefficients are not polynomial; "
                        "inconsistent generator bases"
                    ) from None
                phi_entries[kk][j] = phi_entries[kk][j] + ctx.base.embed(coeff, ring) * xi
    return SpinorPresentation(ctx, w, n, PolyMatrix(ring, phi_entries), ring)


def verify_matrix_factorization(q, p1, p2):
    """Exact identity phi_(n+1) phi_n = q * Id in the fiber ring; the value
    grading carries one power of the trivializer, absorbed here by the
    periodic choice of generators.  Returns (ok, witness)."""
    if p2.n != p1.n + 1:
        raise CliffModError("presentations must have consecutive degrees")
    if p1.w is not p2.w and p1.w.vectors != p2.w.vectors:
        raise CliffModError("presentations must share the subbundle")
    ring = p1.ring
    product = p2.phi * p1.phi
    q_poly = q.q_poly(ring)
    d = product.rows
    for i in range(d):
        for j in range(d):
            expected = q_poly if i == j else ring.zero()
            if product.entries[i][j] != expected:
                return False, {
                    "row": i,
                    "col": j,
                    "got": str(product.entries[i][j]),
                    "expected": str(expected),
                }
    return True, None


def verify_mf_report(ctx, w, degrees, seed=DEFAULT_SEED):
    """Matrix-factorization products for consecutive degree pairs."""
    ideals = {n: clifford_ideal(ctx, w, n, "left", seed) for n in degrees}
    presentations = {}
    results = []
    ok = True
    for n in degrees[1:]:
        src = ideals[n - 1]
        dst = ideals[n]
        presentations[n] = spinor_phi(ctx, w, n, seed, source=src, target=dst)
    for n in degrees[2:]:
        good, witness = verify_matrix_factorization(
            ctx.q, presentations[n - 1], presentations[n]
        )
        ok = ok and good
        data = {"degrees": f"({n-1},{n})", "size": presentations[n].size}
        if witness:
            data["witness"] = witness
        results.append(SampleResult({}, good, data))
    return Report(
        operation="matrix-factorization",
        configuration={"w_rank": w.r, "degrees": list(degrees)},
        samples=results,
        ok=ok,
    )


def phi_invertible_off_quadric(pres, seed=DEFAULT_SEED, tries=_MAX_TRIES):
    """Evaluate the presentation at a total-space point with q nonzero and
    test invertibility over Q."""
    ctx = pres.ctx
    ring = pres.ring
    rng = random.Random(seed)
    q_poly = ctx.q.q_poly(ring)
    for _ in range(tries):
        assignment = {v: Fraction(rng.randint(-9, 9)) for v in ring.variables}
        if q_poly.evaluate(assignment) != 0:
            matrix = pres.phi.evaluate(assignment)
            return linalg.q_det(matrix) != 0
    raise CliffModError("could not find a point off the quadric")
