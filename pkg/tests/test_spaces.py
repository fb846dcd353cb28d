import random
from fractions import Fraction

import pytest

from qeslab.classify import CoeffAssignment, coefficient_words
from qeslab.enveloping import expand, make_word, words_up_to_degree
from qeslab.operators import LinOperator, OpContext, to_matrix_operator
from qeslab.poly import Poly
from qeslab.reps import RepSpec, make_rep, root_of_unity_generators
from qeslab.scalars import ONE, QParam, Scalar
from qeslab.spaces import (DimensionMismatchError, SpaceSpec, action_matrix,
                           dimension, enumerate_basis, flag_preserves,
                           parse_space, preserves)


def test_dimension_examples():
    assert dimension(SpaceSpec("interval", (2,))) == 3
    assert dimension(SpaceSpec("spinor", (3, 2))) == 7           # 2n+1 at n=3
    assert dimension(SpaceSpec("triangle", (3,))) == 10
    assert dimension(SpaceSpec("wedge", (2, 4))) == 9
    assert dimension(SpaceSpec("wedge", (3, 5))) == 9
    assert dimension(SpaceSpec("rectangle", (2, 3))) == 12
    assert dimension(SpaceSpec("spinor", (4, -1))) == 5          # empty odd row


def test_wedge_closed_form_all_residues():
    for r in (1, 2, 3, 4):
        for n in range(13):
            dimension(SpaceSpec("wedge", (r, n)))   # hard failure on mismatch


def test_triangle_closed_form():
    for n in range(13):
        assert dimension(SpaceSpec("triangle", (n,))) == (n + 1) * (n + 2) // 2


def test_spinor_flag_dimension():
    for n in range(1, 13):
        assert dimension(SpaceSpec("spinor", (n, n - 1))) == 2 * n + 1


def test_basis_order_graded_even_first():
    labels = SpaceSpec("triangle", (2,)).labels()
    assert labels == [((0, 0), 0), ((1, 0), 0), ((0, 1), 0),
                      ((2, 0), 0), ((1, 1), 0), ((0, 2), 0)]
    labels = SpaceSpec("spinor", (2, 1)).labels()
    assert [od for _, od in labels] == [0, 0, 0, 1, 1]


def test_action_matrix_examples():
    g = make_rep(RepSpec("sl2", n=Scalar(2)))
    res = action_matrix(g.op("J0"), SpaceSpec("interval", (2,)))
    assert res.preserved
    assert res.matrix == [[Scalar(-1), Scalar(0), Scalar(0)],
                          [Scalar(0), Scalar(0), Scalar(0)],
                          [Scalar(0), Scalar(0), Scalar(1)]]
    ctx = g.ctx
    bad = LinOperator.mult(ctx, ctx.var("x", 3)) * LinOperator.deriv(ctx, "x")
    res = action_matrix(bad, SpaceSpec("interval", (2,)))
    assert not res.preserved
    witness = {(e.source, e.monomial): e.coeff for e in res.escapes}
    assert witness[(((2,), 0), (4,))] == Scalar(2)   # x^2 -> 2 x^4


def test_degree_two_words_preserve_flag_member():
    g = make_rep(RepSpec("sl2", n=Scalar(4)))
    rng = random.Random(0)
    words = words_up_to_degree(g, 2)
    poly = {w: Scalar(rng.randint(-5, 5)) for w in words}
    assert preserves(expand(poly, g), SpaceSpec("interval", (4,)))


def test_annihilator_tail_preserves_with_zero_matrix():
    ctx = OpContext(["x"])
    n = 2
    op = (LinOperator.mult(ctx, ctx.var("x", 1) + ctx.const(3))
          * LinOperator.deriv(ctx, "x", n + 1))
    res = action_matrix(op, SpaceSpec("interval", (n,)))
    assert res.preserved
    assert all(c.is_zero() for row in res.matrix for c in row)


def test_root_of_unity_flag():
    rng = random.Random(21)
    for q, n in ((Scalar(-1), 2), (Scalar(0, 1), 4)):
        gens = root_of_unity_generators(n, QParam(q))
        ctx = gens["J+"].ctx
        words = [(), ("J+",), ("J0",), ("J-",), ("J+", "J+"), ("J+", "J0"),
                 ("J+", "J-"), ("J0", "J0"), ("J0", "J-"), ("J-", "J-")]
        op = LinOperator.zero(ctx)
        for w in words:
            term = LinOperator.identity(ctx)
            for name in w:
                term = term * gens[name]
            op = op + term.scale(Scalar(rng.randint(-5, 5)))
        flag = [SpaceSpec("interval", (n,)), SpaceSpec("interval", (2 * n,)),
                SpaceSpec("interval", (3 * n,))]
        assert flag_preserves(op, flag)


def test_flag_requires_strict_increase():
    ctx = OpContext(["x"])
    with pytest.raises(ValueError):
        flag_preserves(LinOperator.identity(ctx),
                       [SpaceSpec("interval", (2,)), SpaceSpec("interval", (2,))])


def test_simplex_preserved_by_degree_two_words():
    for k in (2, 3):
        for n in (2, 4):
            g = make_rep(RepSpec("so_k1", n=Scalar(n), k=k))
            s = SpaceSpec("simplex", (k, n))
            for w in words_up_to_degree(g, 2):
                assert preserves(expand({w: ONE}, g), s), w


def test_nonflat_rotation_triangle():
    for n in (1, 2, 3, 4):
        g = make_rep(RepSpec("so3_nonflat", n=Scalar(n)))
        s = SpaceSpec("triangle", (n,))
        for name in g.names:
            assert preserves(g.op(name), s)


def test_spinor_matrix_equivalence():
    rng = random.Random(17)
    n = 3
    spec = RepSpec("osp22", n=Scalar(n))
    gens = make_rep(spec)
    names = sorted(coefficient_words(spec))
    s = SpaceSpec("spinor", (n, n - 1))
    for trial in range(10):
        vals = {nm: Scalar(rng.randint(-3, 3)) for nm in names
                if rng.random() < 0.5}
        asg = CoeffAssignment(spec, vals)
        op = asg.operator(gens)
        scalar_ok = preserves(op, s)
        matrix_ok = preserves(to_matrix_operator(op), s)
        assert scalar_ok == matrix_ok


def test_parse_space():
    assert parse_space("int:4") == SpaceSpec("interval", (4,))
    assert parse_space("spin:3,2") == SpaceSpec("spinor", (3, 2))
    assert parse_space("tri:3") == SpaceSpec("triangle", (3,))
    assert parse_space("rect:2,3") == SpaceSpec("rectangle", (2, 3))
    assert parse_space("wedge:2,4") == SpaceSpec("wedge", (2, 4))
    assert parse_space("simplex:3,2") == SpaceSpec("simplex", (3, 2))
    with pytest.raises(ValueError):
        parse_space("disk:3")
