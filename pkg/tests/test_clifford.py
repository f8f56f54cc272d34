import random
from fractions import Fraction

import pytest

from quadrikit.polyalg import parse_poly
from quadrikit.quadform import QuadraticForm, hyperbolic_reduce
from quadrikit.clifford import (
    CliffordContext,
    CliffordElement,
    CliffordError,
    center_checks,
    center_element,
    cl_mul,
    graded_basis,
    orthogonal_sum_ranks,
    parse_element,
    trace,
)


def universal_ctx():
    q = QuadraticForm.from_expression(
        ["a", "b", "c"], 4, "x1*x2 + a*x3^2 + b*x3*x4 + c*x4^2"
    )
    return CliffordContext(q)


def rank2_ctx():
    return CliffordContext(QuadraticForm.from_expression([], 2, "x1*x2"))


def random_vector_element(ctx, rng):
    return ctx.from_vector(
        [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(ctx.rank)]
    )


def random_homogeneous(ctx, rng, degree):
    elem = ctx.zero()
    for key in graded_basis(ctx, degree):
        c = rng.randint(-4, 4)
        if c:
            elem = elem + ctx.monomial(*key).scale(c)
    return elem


# -- multiplication ------------------------------------------------------------


def test_isotropic_generator_squares_to_zero():
    ctx = universal_ctx()
    e1 = ctx.generator(1)
    assert cl_mul(e1, e1).is_zero()


def test_hyperbolic_anticommutator_is_l():
    ctx = universal_ctx()
    e1, e2 = ctx.generator(1), ctx.generator(2)
    assert cl_mul(e1, e2) + cl_mul(e2, e1) == ctx.l_power(1)


def test_unit_law_seeded():
    ctx = universal_ctx()
    rng = random.Random(2)
    one = ctx.one()
    for _ in range(10):
        x = random_homogeneous(ctx, rng, rng.choice([-1, 0, 1, 2]))
        assert cl_mul(one, x) == x
        assert cl_mul(x, one) == x


def test_defining_relation_seeded():
    # v v = q(v) l on 100 random degree-1 elements
    ctx = universal_ctx()
    rng = random.Random(24237)
    for _ in range(100):
        coords = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(4)]
        v = ctx.from_vector(coords)
        expected = ctx.scalar(ctx.q.apply(coords)).l_shift(1)
        assert cl_mul(v, v) == expected


def test_associativity_seeded():
    ctx = universal_ctx()
    rng = random.Random(7)
    for _ in range(50):
        x = random_homogeneous(ctx, rng, rng.choice([-2, -1, 0, 1]))
        y = random_homogeneous(ctx, rng, rng.choice([-1, 0, 1, 2]))
        z = random_homogeneous(ctx, rng, rng.choice([0, 1]))
        assert cl_mul(cl_mul(x, y), z) == cl_mul(x, cl_mul(y, z))


def test_anticommutator_matches_bilinear_matrix():
    ctx = universal_ctx()
    b = ctx.q.bilinear_matrix()
    for i in range(1, 5):
        for j in range(1, 5):
            if i == j:
                continue
            lhs = cl_mul(ctx.generator(i), ctx.generator(j)) + cl_mul(
                ctx.generator(j), ctx.generator(i)
            )
            assert lhs == ctx.scalar(b.entries[i - 1][j - 1]).l_shift(1)


def test_degree_additivity_seeded():
    ctx = universal_ctx()
    rng = random.Random(13)
    for _ in range(20):
        dx, dy = rng.choice([-2, -1, 0, 1, 2]), rng.choice([-1, 0, 1])
        x = random_homogeneous(ctx, rng, dx)
        y = random_homogeneous(ctx, rng, dy)
        product = cl_mul(x, y)
        if not product.is_zero():
            assert product.degree() == dx + dy


def test_context_mismatch_rejected():
    with pytest.raises(CliffordError):
        cl_mul(universal_ctx().one(), rank2_ctx().one())


# -- graded bases -----------------------------------------------------------------


def test_basis_sizes_power_of_two():
    for ctx in (universal_ctx(), rank2_ctx()):
        expected = 2 ** (ctx.rank - 1)
        for n in range(-4, 5):
            assert len(graded_basis(ctx, n)) == expected


def test_basis_rank4_degree0_profile():
    ctx = universal_ctx()
    basis = graded_basis(ctx, 0)
    assert basis[0] == ((), 0)
    assert [key for key in basis if len(key[0]) == 2] == [
        ((1, 2), -1),
        ((1, 3), -1),
        ((1, 4), -1),
        ((2, 3), -1),
        ((2, 4), -1),
        ((3, 4), -1),
    ]
    assert basis[-1] == ((1, 2, 3, 4), -2)


def test_basis_rank4_degree1_profile():
    basis = graded_basis(universal_ctx(), 1)
    assert [key for key in basis if len(key[0]) == 1] == [
        ((1,), 0),
        ((2,), 0),
        ((3,), 0),
        ((4,), 0),
    ]
    assert all(m == -1 for idx, m in basis if len(idx) == 3)


def test_basis_rank2_degree0():
    assert graded_basis(rank2_ctx(), 0) == [((), 0), ((1, 2), -1)]


# -- center ------------------------------------------------------------------------


def test_center_universal_relation():
    ctx = universal_ctx()
    rel = center_element(ctx)
    base = ctx.base
    assert rel.alpha == base.var("b")
    assert rel.beta == base.var("a") * base.var("c")
    assert rel.discriminant() == parse_poly("b^2 - 4*a*c", base)
    ratio, scale = rel.discriminant_comparison()
    assert ratio == Fraction(1)
    assert scale == Fraction(1)


def test_center_universal_commutes_with_even_part():
    ctx = universal_ctx()
    rel = center_element(ctx)
    checks = center_checks(ctx, rel)
    assert checks["commutes_degree0"]
    assert checks["twisted_degree1"]


def test_center_diagonal_is_top_monomial():
    q = QuadraticForm.from_expression(
        ["a1", "a2", "a3", "a4"], 4, "a1*x1^2 + a2*x2^2 + a3*x3^2 + a4*x4^2"
    )
    ctx = CliffordContext(q)
    rel = center_element(ctx)
    assert rel.omega == ctx.monomial((1, 2, 3, 4), -2)
    # omega^2 = a1 a2 a3 a4 = det(b_q) / 16
    assert rel.alpha.is_zero()
    prod = parse_poly("a1*a2*a3*a4", ctx.base)
    assert -rel.beta == prod
    assert q.det_bilinear() == prod * 16
    assert center_checks(ctx, rel)["commutes_degree0"]


def test_center_rank2():
    ctx = rank2_ctx()
    rel = center_element(ctx)
    assert rel.omega == ctx.monomial((1, 2), -1)
    assert rel.alpha == ctx.base.const(-1)
    assert rel.beta.is_zero()
    ratio, scale = rel.discriminant_comparison()
    assert ratio == Fraction(-1)  # disc = 1 = (-1) det(b_q)
    assert scale == Fraction(1)
    assert center_checks(ctx, rel)["twisted_degree1"]


def test_center_requires_even_rank():
    q = QuadraticForm.from_expression([], 3, "x1*x2 + x3^2")
    with pytest.raises(CliffordError):
        center_element(CliffordContext(q))


# -- trace --------------------------------------------------------------------------


def test_trace_of_unit_vanishes():
    ctx = universal_ctx()
    assert trace(ctx.one()).is_zero()


def test_trace_of_top_monomial():
    ctx = universal_ctx()
    assert trace(ctx.monomial((1, 2, 3, 4), -2)) == ctx.base.one()


def test_trace_of_generator_product():
    ctx = universal_ctx()
    prod = ctx.one()
    for i in (1, 2, 3, 4):
        prod = cl_mul(prod, ctx.generator(i))
    assert trace(prod.l_shift(-2)) == ctx.base.one()


def test_trace_rejects_wrong_degree():
    ctx = universal_ctx()
    with pytest.raises(CliffordError):
        trace(ctx.generator(1))


# -- block ranks ----------------------------------------------------------------------


def test_block_ranks_universal():
    q = universal_ctx().q
    split = hyperbolic_reduce(q, [1, 0, 0, 0], [0, 1, 0, 0])
    assert orthogonal_sum_ranks(q, split) == {"total": 8, "blocks": [2, 2, 2, 2]}


def test_block_ranks_rank2():
    q = rank2_ctx().q
    split = hyperbolic_reduce(q, [1, 0], [0, 1])
    assert orthogonal_sum_ranks(q, split) == {"total": 2, "blocks": [1, 1]}


def test_block_ranks_split_form():
    q = QuadraticForm.from_expression([], 4, "x1*x2 + x3*x4")
    split = hyperbolic_reduce(q, [1, 0, 0, 0], [0, 1, 0, 0])
    assert orthogonal_sum_ranks(q, split) == {"total": 8, "blocks": [2, 2, 2, 2]}


# -- printing and parsing ----------------------------------------------------------------


def test_element_print_style():
    ctx = universal_ctx()
    elem = ctx.monomial((1, 3), -1)
    assert str(elem) == "e1*e3*l^-1"
    combo = ctx.one() - ctx.monomial((1, 2), -1)
    assert str(combo) == "1 - e1*e2*l^-1"


def test_parse_element_roundtrip():
    ctx = universal_ctx()
    sources = [
        "e1*e3*l^-1",
        "1 - e1*e2*l^-1",
        "a*e3 + b*e4 - 2*l",
        "(a + b)*e1*e2*e3*l^-1",
    ]
    for src in sources:
        elem = parse_element(src, ctx)
        assert parse_element(str(elem), ctx) == elem


def test_parse_element_rewrites_products():
    ctx = universal_ctx()
    assert parse_element("e2*e1", ctx) == ctx.l_power(1) - ctx.monomial((1, 2), 0)
    assert parse_element("e3*e3", ctx) == ctx.scalar(ctx.base.var("a")).l_shift(1)


def test_parse_element_rejects_negative_generator_power():
    with pytest.raises(Exception):
        parse_element("e1^-1", universal_ctx())
