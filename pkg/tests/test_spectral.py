import math
import random
from fractions import Fraction

import numpy as np
import pytest

from qeslab.classify import CoeffAssignment
from qeslab.operators import OpContext
from qeslab.poly import Poly
from qeslab.reps import RepSpec
from qeslab.scalars import Scalar
from qeslab.spaces import SpaceSpec, action_matrix
from qeslab.spectral import (NonSquareError, adaptive_simpson,
                             build_matrix_example, build_sextic,
                             eigenlaw_check, exact_rational_eigenvalues,
                             matrix_example_residuals, operator_p_coeffs,
                             reduce_to_schrodinger, schrodinger_residual,
                             sextic_potential, sextic_reduction, spectrum)

S = Scalar
ZGRID = [0.1 + i * 1e-3 for i in range(2901)]       # z in [0.1, 3]


def test_spectrum_diagonal():
    from qeslab.reps import make_rep
    g = make_rep(RepSpec("sl2", n=S(2)))
    sp = spectrum(action_matrix(g.op("J0"), SpaceSpec("interval", (2,))))
    got = sorted(r.real for r in sp.roots)
    assert max(abs(a - b) for a, b in zip(got, [-1.0, 0.0, 1.0])) < 1e-12
    assert sp.trace_check < 1e-12


def test_spectrum_frozen_2x2():
    res = action_matrix(build_sextic(1, 0, 0, 1).operator(),
                        SpaceSpec("interval", (1,)))
    assert res.matrix == [[S(1), S(-2)], [S(0), S(5)]]
    sp = spectrum(res)
    assert [str(c) for c in sp.charpoly] == ["1", "-6", "5"]
    assert sorted(s.re for s in exact_rational_eigenvalues(sp)) == [1, 5]


def test_spectrum_irrational_pair():
    res = action_matrix(build_sextic(1, 0, 1, 0).operator(),
                        SpaceSpec("interval", (1,)))
    sp = spectrum(res)
    assert [str(c) for c in sp.charpoly] == ["1", "0", "-8"]
    roots = sorted(r.real for r in sp.roots)
    assert abs(roots[0] + 2 * math.sqrt(2)) < 1e-10
    assert abs(roots[1] - 2 * math.sqrt(2)) < 1e-10


def test_spectrum_rejects_escapes():
    from qeslab.operators import LinOperator
    ctx = OpContext(["x"])
    op = LinOperator.mult(ctx, ctx.var("x", 3)) * LinOperator.deriv(ctx, "x")
    with pytest.raises(NonSquareError):
        spectrum(action_matrix(op, SpaceSpec("interval", (2,))))


def test_charpoly_reality_random_quasi():
    rng = random.Random(1)
    names = ("c_++", "c_+0", "c_+-", "c_0-", "c_--", "c_+", "c_0", "c_-", "c")
    for n in (2, 4, 6):
        spec = RepSpec("sl2", n=S(n))
        for _ in range(4):
            vals = {nm: S(rng.randint(-4, 4)) for nm in names}
            asg = CoeffAssignment(spec, vals)
            res = action_matrix(asg.operator(), SpaceSpec("interval", (n,)))
            assert res.preserved
            sp = spectrum(res)
            assert all(c.is_rational() for c in sp.charpoly)
            assert sp.trace_check < 1e-9


def test_eigenlaw_examples():
    spec = RepSpec("sl2", n=S(2))
    rep = eigenlaw_check(CoeffAssignment(spec, {"c_00": S(0)} if False else
                                         {"c_0-": S(0), "c": S(0), "c_0": S(0)}))
    # J0 J0 via two J0 letters is not a catalogue name; use the exact family
    asg = CoeffAssignment(spec, {"c_0": S(1)})
    rep = eigenlaw_check(asg)
    assert rep["ok"]
    a, b, c = (Fraction(v) for v in rep["coefficients"])
    assert a == 0 and b == 1          # linear: the degenerate quadratic


def test_eigenlaw_quadratic_diag():
    # a full exact family member has an honestly quadratic diagonal
    spec = RepSpec("sl2", n=S(2))
    asg = CoeffAssignment(spec, {"c_+-": S(1)})
    rep = eigenlaw_check(asg)
    assert rep["ok"]
    a, b, c = (Fraction(v) for v in rep["coefficients"])
    assert a == 1 and b == -3 and c == 0      # d(d-1) - 2d


def test_eigenlaw_50_random_exact(subtests=None):
    rng = random.Random(99)
    for t in range(50):
        n = S(Fraction(rng.randint(-6, 12), rng.choice([1, 2, 3])))
        vals = {nm: S(Fraction(rng.randint(-9, 9), rng.choice([1, 2])))
                for nm in ("c_+-", "c_0-", "c_--", "c_0", "c_-", "c")}
        rep = eigenlaw_check(CoeffAssignment(RepSpec("sl2", n=n), vals))
        assert rep["ok"], (t, rep)


def test_eigenlaw_rejects_nontriangular():
    spec = RepSpec("sl2", n=S(4))
    rep = eigenlaw_check(CoeffAssignment(spec, {"c_+": S(1), "c_0-": S(1)}))
    assert not rep["ok"]


def test_sextic_potential_samples():
    zs = [0.0, 0.5, 1.0, 2.0]
    v = sextic_potential(1, 0, 1, 0, zs)
    assert v[0] == 0.0
    for z, val in zip(zs, v):
        assert abs(val - (z ** 6 - 7 * z ** 2)) < 1e-12
    v = sextic_potential(3, 1, 0, 2, zs)
    for z, val in zip(zs, v):
        assert abs(val - 4 * z * z) < 1e-12       # harmonic at a = 0


def test_adaptive_simpson():
    assert abs(adaptive_simpson(lambda t: t * t, 0, 3) - 9.0) < 1e-12
    assert abs(adaptive_simpson(math.exp, 0, 1) - (math.e - 1)) < 1e-10


def test_reduce_trivial_identity_change():
    one = Poly(("x",), {(0,): 1})
    zero = Poly(("x",), {})
    x2 = Poly(("x",), {(2,): 1})
    red = reduce_to_schrodinger(one, zero, x2, (-2.0, 2.0))
    for z, x, v in zip(red.zgrid, red.x_of_z, red.potential):
        assert abs(z - x) < 1e-9
        assert abs(v - x * x) < 1e-9


def test_reduce_closed_form_gauge():
    one = Poly(("x",), {(0,): 1})
    twox = Poly(("x",), {(1,): 2})
    zero = Poly(("x",), {})
    red = reduce_to_schrodinger(one, twox, zero, (-2.0, 2.0))
    for x, v in zip(red.x_of_z, red.potential):
        assert abs(v - (x * x - 1)) < 1e-9        # A = x^2/2


def test_reduce_rejects_sign_change():
    x = Poly(("x",), {(1,): 1})
    zero = Poly(("x",), {})
    with pytest.raises(ValueError):
        reduce_to_schrodinger(x, zero, zero, (-1.0, 1.0))


@pytest.mark.parametrize("n,k", [(1, 0), (2, 1), (3, 0)])
def test_sextic_reduction_matches_closed_form(n, k):
    rng = random.Random(n * 10 + k)
    a = Fraction(rng.randint(1, 4), rng.choice([1, 2]))
    b = Fraction(rng.randint(-3, 3))
    red, act = sextic_reduction(n, k, a, b, ZGRID)
    assert act.preserved
    ref = sextic_potential(n, k, a, b, ZGRID)
    assert max(abs(u - v) for u, v in zip(red.potential, ref)) < 1e-8


def test_sextic_residuals_and_parity():
    n, k, a, b = 2, 1, Fraction(1), Fraction(1, 2)
    red, act = sextic_reduction(n, k, a, b, ZGRID)
    m = np.array([[c.to_complex().real for c in row] for row in act.matrix])
    evals, evecs = np.linalg.eig(m)
    for j in range(len(evals)):
        phi = Poly(("x",), {(d,): Fraction(evecs[d, j]).limit_denominator(10 ** 12)
                            for d in range(len(evals))})
        resid = schrodinger_residual(red, phi, evals[j].real)
        assert resid < 1e-6
    # gauge exponent carries exactly the z^k parity factor:
    # A(z) - a z^4/4 - b z^2/2 + k log z is constant on the grid
    af, bf = float(a), float(b)
    vals = [g - af * z ** 4 / 4 - bf * z * z / 2 + k * math.log(z)
            for z, g in zip(red.zgrid, red.gauge)]
    assert max(vals) - min(vals) < 1e-9


def test_sextic_spectrum_real_for_positive_a():
    rng = random.Random(5)
    for _ in range(6):
        n = rng.randint(1, 4)
        a = Fraction(rng.randint(1, 5))
        b = Fraction(rng.randint(-4, 4))
        res = action_matrix(build_sextic(n, rng.randint(0, 1), a, b).operator(),
                            SpaceSpec("interval", (n,)))
        sp = spectrum(res)
        assert all(abs(r.imag) < 1e-8 for r in sp.roots)


def test_matrix_example_preservation_and_residuals():
    for n in (1, 2):
        model = build_matrix_example(2.0, 1.0, n,
                                     ygrid=[0.2 + i * 1e-3 for i in range(1201)])
        assert model.preserved
        assert model.hermitian
        assert len(model.action.labels) == 2 * n + 1
        resid = matrix_example_residuals(model)
        assert max(resid) < 1e-5


def test_matrix_example_beta_zero_degenerates():
    model = build_matrix_example(1.0, 0.0, 1,
                                 ygrid=[0.3 + i * 2e-3 for i in range(401)])
    assert model.preserved
    # at beta = 0 the derived potential is diagonal (no mixing terms)
    for v in model.potential:
        assert abs(v[0, 1]) < 1e-9 and abs(v[1, 0]) < 1e-9


def test_operator_p_coeffs():
    op = build_sextic(1, 0, 1, 1).operator()
    p4, p3, p2 = operator_p_coeffs(op)
    assert p4 == Poly(("x",), {(1,): 4})
    assert p3.degree() == 2 and p2.degree() == 1
