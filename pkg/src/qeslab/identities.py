"""The operator-identity catalogue: raising-generator powers in closed form.

Concrete items (A1, A4, A5, A7, A8, A12) expand through the operator engine
or quantum-plane normal ordering and compare canonically with their closed
right-hand sides; abstract items (A2, A6, A9, A14) live in the free algebra;
A3 and A10 embed the one-variable bracket tables into (deformed) Heisenberg
pairs.  A7's remainder beyond the main binomial sum is returned with the
verdict, with its top-order block checked against the catalogued rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import List, Sequence, Tuple

from .freealg import (FreeExpr, expr, expr_add, expr_mul, expr_pow,
                      expr_scale, expr_sub, heisenberg_system, normal_order,
                      q_heisenberg_system, quantum_plane_system,
                      two_pair_q_system)
from .operators import LinOperator, OpContext
from .poly import Poly
from .scalars import ONE, QParam, Scalar, ScalarLike, ZERO, qbinomial, qnumber


def _mult(ctx: OpContext, p: Poly) -> LinOperator:
    return LinOperator.mult(ctx, p)


def _raising_1var(ctx: OpContext, n: ScalarLike, q: QParam | None) -> LinOperator:
    x2 = ctx.var("x", 2)
    x = ctx.var("x")
    d = LinOperator.deriv(ctx, "x")
    return _mult(ctx, x2) * d - _mult(ctx, x).scale(Scalar.of(n))


def verify_A1(n: int) -> dict:
    ctx = OpContext(["x"])
    lhs = _raising_1var(ctx, n, None) ** (n + 1)
    rhs = _mult(ctx, ctx.var("x", 2 * n + 2)) * LinOperator.deriv(ctx, "x", n + 1)
    return {"id": "A1", "n": n, "ok": lhs == rhs}


def verify_A2(n_values: Sequence[ScalarLike] = (0, 1, 2, 3, 4)) -> dict:
    """Abstract form over [P,Q] = 1; integer powers need integer n, but the
    bracket identity is sampled at the given marks."""
    rs = heisenberg_system()
    results = []
    for n in n_values:
        n = Scalar.of(n)
        if not (n.is_rational() and n.re.denominator == 1 and n.re >= 0):
            continue
        k = int(n.re)
        jplus = expr((1, ("Q", "Q", "P")), (-n, ("Q",)))
        lhs = expr_pow(jplus, k + 1, rs)
        rhs = expr((1, tuple(["Q"] * (2 * k + 2) + ["P"] * (k + 1))))
        results.append((k, not expr_sub(lhs, normal_order(rhs, rs))))
    return {"id": "A2", "ok": all(ok for _, ok in results),
            "cases": results}


def verify_A3(n_values: Sequence[ScalarLike] = (0, 1, Fraction(5, 2))) -> dict:
    """J+ = Q^2 P - nQ, J0 = QP - n/2, J- = P close the one-variable table."""
    rs = heisenberg_system()
    rows = []
    for n in n_values:
        n = Scalar.of(n)
        jp = expr((1, ("Q", "Q", "P")), (-n, ("Q",)))
        j0 = expr((1, ("Q", "P")), (-n / Scalar(2), ()))
        jm = expr((1, ("P",)))
        half = Scalar(Fraction(1, 2))
        checks = [
            ("[J0,J+]=J+", expr_sub(_comm(j0, jp), jp)),
            ("[J0,J-]=-J-", expr_sub(_comm(j0, jm), expr_scale(jm, -1))),
            ("[J+,J-]=-2J0", expr_sub(_comm(jp, jm), expr_scale(j0, -2))),
        ]
        for label, diff in checks:
            rows.append({"n": str(n), "relation": label,
                         "ok": not normal_order(diff, rs)})
    return {"id": "A3", "ok": all(r["ok"] for r in rows), "cases": rows}


def _comm(a: FreeExpr, b: FreeExpr) -> FreeExpr:
    return expr_sub(expr_mul(a, b), expr_mul(b, a))


def verify_A4(n: int, grassmann: bool = False) -> dict:
    """(x^2 dx + x y dy - n x)^(n+1) = sum_k C(n+1,k) x^(2n+2-k) y^k dx^(n+1-k) dy^k.

    With the second variable anticommuting only the k = 0, 1 terms survive.
    """
    if grassmann:
        ctx = OpContext(["x"], theta=True)
        yvar, ydname = "theta", "theta"
    else:
        ctx = OpContext(["x", "y"])
        yvar, ydname = "y", "y"
    x = ctx.var("x")
    jop = (_mult(ctx, ctx.var("x", 2)) * LinOperator.deriv(ctx, "x")
           + _mult(ctx, x * ctx.var(yvar)) * LinOperator.deriv(ctx, ydname)
           - _mult(ctx, x).scale(n))
    lhs = jop ** (n + 1)
    rhs = LinOperator.zero(ctx)
    kmax = 1 if grassmann else n + 1
    for k in range(kmax + 1):
        coeff = comb(n + 1, k)
        mono = ctx.var("x", 2 * n + 2 - k) * ctx.var(yvar, k)
        term = _mult(ctx, mono).scale(coeff) * \
            LinOperator.deriv(ctx, "x", n + 1 - k)
        if k:
            term = term * LinOperator.deriv(ctx, ydname, k)
        rhs = rhs + term
    out = {"id": "A4", "n": n, "grassmann": grassmann, "ok": lhs == rhs}
    if grassmann:
        surviving = sorted(set(w for w in lhs.terms))
        out["surviving_terms"] = len(lhs.terms)
    return out


def _multinomial(parts: Sequence[int]) -> int:
    out, tot = 1, 0
    for p in parts:
        tot += p
        out *= comb(tot, p)
    return out


def verify_A5(k: int, n: int) -> dict:
    """k-variable multinomial form of the raising power, plus the fact that
    the left side annihilates the total-degree simplex."""
    vars = tuple(f"x{i}" for i in range(1, k + 1))
    ctx = OpContext(vars)
    x1 = ctx.var("x1")
    euler = LinOperator.zero(ctx)
    for v in vars:
        euler = euler + _mult(ctx, ctx.var(v)) * LinOperator.deriv(ctx, v)
    jop = _mult(ctx, x1) * (euler - LinOperator.identity(ctx).scale(n))
    lhs = jop ** (n + 1)
    rhs = LinOperator.zero(ctx)
    for parts in _compositions(n + 1, k):
        coeff = _multinomial(parts)
        mono = ctx.var("x1", n + 1 + parts[0])
        for v, p in zip(vars[1:], parts[1:]):
            mono = mono * ctx.var(v, p)
        term = _mult(ctx, mono).scale(coeff)
        for v, p in zip(vars, parts):
            if p:
                term = term * LinOperator.deriv(ctx, v, p)
        rhs = rhs + term
    ok = lhs == rhs
    # annihilation of the simplex
    from .spaces import SpaceSpec, enumerate_basis
    s = SpaceSpec("simplex", (k, n))
    kills = all(lhs.apply_poly(mono).is_zero()
                for mono in enumerate_basis(s, ctx))
    return {"id": "A5", "k": k, "n": n, "ok": ok and kills,
            "annihilates_simplex": kills}


def _compositions(total: int, k: int) -> List[Tuple[int, ...]]:
    if k == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            out.append((first,) + rest)
    return out


def verify_A6(k: int, n: int) -> dict:
    """Abstract multi-pair Heisenberg form of the multinomial identity."""
    rs = heisenberg_system(pairs=k)
    qs = [f"Q{i}" for i in range(1, k + 1)]
    ps = [f"P{i}" for i in range(1, k + 1)]
    euler = {(): Scalar(-n)}
    for q, p in zip(qs, ps):
        euler = expr_add(euler, expr((1, (q, p))))
    jop = expr_mul(expr((1, (qs[0],))), euler)
    lhs = expr_pow(jop, n + 1, rs)
    rhs: FreeExpr = {}
    for parts in _compositions(n + 1, k):
        word = [qs[0]] * (n + 1)
        for q, p in zip(qs, parts):
            word.extend([q] * p)
        for pp, p in zip(ps, parts):
            word.extend([pp] * p)
        rhs = expr_add(rhs, expr((_multinomial(parts), tuple(word))))
    return {"id": "A6", "k": k, "n": n,
            "ok": not expr_sub(lhs, normal_order(rhs, rs))}


def _a7_top_ratio(r: int, n: int, s: int) -> Fraction:
    # top-order block: r(r-1)n(n+1)/2 * sum_s r^(s-1) C(n-1, s-1)
    #   x^(2n+1-s) y^s dx^(n-s) dy^s.
    # The catalogued third row prints the s = 3 ratio with denominator 4;
    # expansion forces 2 (the row vanishes below n = 3, hiding the slip).
    return Fraction(r ** (s - 1) * comb(n - 1, s - 1))


def verify_A7(r: int, n: int) -> dict:
    """Raising power for the semidirect family: main binomial sum plus a
    remainder; the catalogued rows (n <= 2) are asserted, the top-order block
    checked, and the full remainder returned as data."""
    ctx = OpContext(["x", "y"])
    x, y = ctx.var("x"), ctx.var("y")
    jop = (_mult(ctx, ctx.var("x", 2)) * LinOperator.deriv(ctx, "x")
           + (_mult(ctx, x * y) * LinOperator.deriv(ctx, "y")).scale(r)
           - _mult(ctx, x).scale(n))
    lhs = jop ** (n + 1)
    main = LinOperator.zero(ctx)
    for k in range(n + 2):
        coeff = Scalar(r) ** k * Scalar(comb(n + 1, k))
        mono = ctx.var("x", 2 * n + 2 - k) * ctx.var("y", k)
        term = _mult(ctx, mono).scale(coeff)
        if n + 1 - k:
            term = term * LinOperator.deriv(ctx, "x", n + 1 - k)
        if k:
            term = term * LinOperator.deriv(ctx, "y", k)
        main = main + term
    remainder = lhs - main
    rows_ok = True
    if n == 0:
        rows_ok = remainder.is_zero()
    elif n == 1:
        want = (_mult(ctx, ctx.var("x", 2) * y)
                * LinOperator.deriv(ctx, "y")).scale(r * (r - 1))
        rows_ok = remainder == want
    elif n == 2:
        pref = Scalar(r * (r - 1))
        x3y = ctx.var("x", 3) * y
        want = (_mult(ctx, x3y * y) * LinOperator.deriv(ctx, "y", 2)).scale(pref * Scalar(3 * r)) \
            + (_mult(ctx, x3y * x) * LinOperator.deriv(ctx, "x") * LinOperator.deriv(ctx, "y")).scale(pref * Scalar(3)) \
            + (_mult(ctx, x3y) * LinOperator.deriv(ctx, "y")).scale(pref * Scalar(r - 2))
        rows_ok = remainder == want
    if r == 1:
        rows_ok = rows_ok and remainder.is_zero()
    # top-order block (derivative order n) against the catalogued series
    top_ok = True
    if n >= 1 and r >= 2:
        lead = Scalar(Fraction(r * (r - 1) * n * (n + 1), 2))
        for s in range(1, n + 1):
            want_c = lead * Scalar(_a7_top_ratio(r, n, s))
            coeff = remainder.terms.get((n - s, s))
            mono = (2 * n + 1 - s, s)
            got = coeff.terms.get(mono, ZERO) if coeff is not None else ZERO
            if got != want_c:
                top_ok = False
    return {"id": "A7", "r": r, "n": n, "ok": rows_ok and top_ok,
            "rows_ok": rows_ok, "top_block_ok": top_ok,
            "remainder_terms": sorted(
                (w, sorted((e, str(c)) for e, c in p.terms.items()))
                for w, p in remainder.terms.items())}


def verify_A8(n: int, q: ScalarLike) -> dict:
    """(x^2 D - {n} x)^(n+1) = q^(2n(n+1)) x^(2n+2) D^(n+1), shift base q^2."""
    qp = QParam(q, base="squared")
    ctx = OpContext(["x"], q=qp)
    lhs = _raising_1var(ctx, qnumber(n, qp), qp) ** (n + 1)
    scale = Scalar.of(q) ** (2 * n * (n + 1))
    rhs = (_mult(ctx, ctx.var("x", 2 * n + 2))
           * LinOperator.deriv(ctx, "x", n + 1)).scale(scale)
    return {"id": "A8", "n": n, "q": str(Scalar.of(q)), "ok": lhs == rhs}


def verify_A9(n: int, q: ScalarLike) -> dict:
    qp = QParam(q, base="squared")
    rs = q_heisenberg_system(qp.b)
    nq = qnumber(n, qp)
    jplus = expr((1, ("Q", "Q", "P")), (-nq, ("Q",)))
    lhs = expr_pow(jplus, n + 1, rs)
    scale = Scalar.of(q) ** (2 * n * (n + 1))
    rhs = expr((scale, tuple(["Q"] * (2 * n + 2) + ["P"] * (n + 1))))
    return {"id": "A9", "n": n, "q": str(Scalar.of(q)),
            "ok": not expr_sub(lhs, normal_order(rhs, rs))}


def verify_A10(n: int, q: ScalarLike) -> dict:
    """The deformed pair embeds the one-variable difference family: cleared
    bracket table with base b = q^2."""
    qp = QParam(q, base="squared")
    b = qp.b
    rs = q_heisenberg_system(b)
    nq = qnumber(n, qp)
    t = b ** n
    one_bt = ONE + b * t
    if one_bt.is_zero():
        return {"id": "A10", "n": n, "q": str(Scalar.of(q)), "ok": False,
                "reason": "degenerate deformation"}
    nh = nq / one_bt
    kappa = t * (b + ONE) / one_bt
    lam = one_bt
    jp = expr((1, ("Q", "Q", "P")), (-nq, ("Q",)))
    j0 = expr((1, ("Q", "P")), (-nh, ()))
    jm = expr((1, ("P",)))
    checks = [
        ("b j0 j- - j- j0 = -kappa j-",
         expr_sub(expr_sub(expr_scale(expr_mul(j0, jm), b), expr_mul(jm, j0)),
                  expr_scale(jm, -kappa))),
        ("b^2 j+ j- - j- j+ = -lambda j0",
         expr_sub(expr_sub(expr_scale(expr_mul(jp, jm), b * b), expr_mul(jm, jp)),
                  expr_scale(j0, -lam))),
        ("j0 j+ - b j+ j0 = kappa j+",
         expr_sub(expr_sub(expr_mul(j0, jp), expr_scale(expr_mul(jp, j0), b)),
                  expr_scale(jp, kappa))),
    ]
    rows = [{"relation": lab, "ok": not normal_order(d, rs)} for lab, d in checks]
    return {"id": "A10", "n": n, "q": str(Scalar.of(q)),
            "ok": all(r["ok"] for r in rows), "cases": rows}


def _a12_rhs(n: int, qp: QParam, names: Tuple[str, str, str, str]) -> FreeExpr:
    xq, yq, dxq, dyq = names
    q = qp.q
    rhs: FreeExpr = {}
    for k in range(n + 2):
        e = 2 * n * n - n * (k - 2) + k * (k - 1)
        coeff = q ** e * qbinomial(n + 1, k, qp)
        word = tuple([xq] * (2 * n + 2 - k) + [yq] * k
                     + [dxq] * (n + 1 - k) + [dyq] * k)
        rhs = expr_add(rhs, expr((coeff, word)))
    return rhs


def verify_A12(n: int, q: ScalarLike) -> dict:
    """Quantum-plane version of the two-variable raising power."""
    qp = QParam(q, base="squared")
    rs = quantum_plane_system(qp.q)
    nq = qnumber(n, qp)
    jop = expr((1, ("x", "x", "Dx")), (1, ("x", "y", "Dy")), (-nq, ("x",)))
    lhs = expr_pow(jop, n + 1, rs)
    rhs = _a12_rhs(n, qp, ("x", "y", "Dx", "Dy"))
    diff = expr_sub(lhs, normal_order(rhs, rs))
    return {"id": "A12", "n": n, "q": str(Scalar.of(q)), "ok": not diff,
            "lhs_terms": len(lhs)}


def verify_A14(n: int, q: ScalarLike) -> dict:
    qp = QParam(q, base="squared")
    rs = two_pair_q_system(qp.q)
    nq = qnumber(n, qp)
    jop = expr((1, ("Q1", "Q1", "P1")), (1, ("Q1", "Q2", "P2")), (-nq, ("Q1",)))
    lhs = expr_pow(jop, n + 1, rs)
    rhs = _a12_rhs(n, qp, ("Q1", "Q2", "P1", "P2"))
    diff = expr_sub(lhs, normal_order(rhs, rs))
    return {"id": "A14", "n": n, "q": str(Scalar.of(q)), "ok": not diff}


def heisenberg_embed_check(kind: str, n: int | Fraction,
                           q: ScalarLike | None = None) -> dict:
    if kind == "A3":
        return verify_A3([n])
    if kind == "A10":
        return verify_A10(int(n), q)
    raise ValueError(f"unknown embedding {kind!r}")


def verify_identity(ident: str, n: int = 1, q: ScalarLike = 2,
                    r: int = 2, k: int = 3, grassmann: bool = False) -> dict:
    """Dispatch by catalogue id (budget limits enforced by the callers)."""
    if ident == "A1":
        return verify_A1(n)
    if ident == "A2":
        return verify_A2([n])
    if ident == "A3":
        return verify_A3([n])
    if ident == "A4":
        return verify_A4(n, grassmann)
    if ident == "A5":
        return verify_A5(k, n)
    if ident == "A6":
        return verify_A6(k, n)
    if ident == "A7":
        return verify_A7(r, n)
    if ident == "A8":
        return verify_A8(n, q)
    if ident == "A9":
        return verify_A9(n, q)
    if ident == "A10":
        return verify_A10(n, q)
    if ident == "A12":
        return verify_A12(n, q)
    if ident == "A14":
        return verify_A14(n, q)
    raise ValueError(f"unknown identity id {ident!r}")
