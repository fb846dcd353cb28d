"""Generator families realized as first-order operators, with their brackets.

Each algebra tag yields a GeneratorSet: named operators in a fixed word
order (raising, then Cartan, then lowering, odd generators last), parity and
grading data, and a structure table of bracket relations.  verify_structure
replays every relation through the operator engine and reports per-relation
verdicts; nothing is assumed, everything is expanded.

The difference-calculus family stores the unrescaled generators.  Its bracket
table is kept in cleared form (both sides multiplied by the scaling factors
q^(n/2), q^n of the rescaled basis), which is rational for every mark; when
q^(n/2) itself is rational the literally rescaled relations are checked too
and the report records which form ran.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .operators import (ContextMismatchError, LinOperator, MatrixOperator,
                        OpContext, compose, to_matrix_operator)
from .scalars import ONE, QParam, Scalar, ScalarLike, DegenerateQError, qnumber

ALGEBRAS = ("sl2", "sl2q", "osp22", "sl3", "sl2xsl2", "gl2_semi",
            "so3_nonflat", "so_k1", "sl3_flag")

GradVec = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class RepSpec:
    algebra: str
    n: Scalar = Scalar(0)
    m: Scalar = Scalar(0)       # second mark (rectangle family, flag family)
    q: QParam | None = None
    r: int = 1                  # abelian-ideal width parameter
    k: int = 2                  # number of variables for the rotation family
    qn: Scalar | None = None    # optional explicit q**n (formal mark power)

    def __post_init__(self):
        if self.algebra not in ALGEBRAS:
            raise ValueError(f"unknown algebra tag {self.algebra!r}")
        if self.algebra == "gl2_semi" and self.r < 1:
            raise ValueError("need r >= 1")
        if self.algebra == "so_k1" and self.k < 2:
            raise ValueError("need k >= 2")
        if self.algebra == "sl2q" and self.q is None:
            raise ValueError("sl2q needs a deformation parameter")


@dataclass
class Relation:
    """sum_i c_i * (product of named generators) == sum_g d_g * g + d_1 * 1."""
    label: str
    lhs: List[Tuple[Scalar, Tuple[str, ...]]]
    rhs: Dict[str, Scalar]
    form: str = "printed"

    @classmethod
    def comm(cls, label: str, a: str, b: str, rhs: Dict[str, ScalarLike]) -> "Relation":
        return cls(label, [(ONE, (a, b)), (-ONE, (b, a))],
                   {g: Scalar.of(c) for g, c in rhs.items()})

    @classmethod
    def anti(cls, label: str, a: str, b: str, rhs: Dict[str, ScalarLike]) -> "Relation":
        return cls(label, [(ONE, (a, b)), (ONE, (b, a))],
                   {g: Scalar.of(c) for g, c in rhs.items()})


@dataclass
class GeneratorSet:
    spec: RepSpec
    ctx: OpContext
    names: Tuple[str, ...]
    ops: Dict[str, LinOperator]
    parity: Dict[str, int]
    grading: Dict[str, GradVec]
    structure: List[Relation]
    grading_weight: int = 1     # total grading = deg_x + weight * deg_y
    notes: List[str] = field(default_factory=list)

    def op(self, name: str) -> LinOperator:
        return self.ops[name]

    def word_op(self, word: Sequence[str]) -> LinOperator:
        out = LinOperator.identity(self.ctx)
        for name in word:
            out = compose(out, self.ops[name])
        return out


def _evaluate_relation(rel: Relation, ops: Dict[str, object], ident):
    """LHS - RHS of a relation over any operator algebra with +,-,*,scale."""
    total = None
    for c, word in rel.lhs:
        term = ident
        for name in word:
            term = term * ops[name]
        term = term.scale(c)
        total = term if total is None else total + term
    for g, c in rel.rhs.items():
        term = ident.scale(c) if g == "1" else ops[g].scale(c)
        total = -term if total is None else total - term
    return total


def verify_structure(gens: GeneratorSet, matrix_form: bool = False) -> dict:
    """Expand every structure relation; failures are data, not exceptions."""
    if matrix_form:
        if gens.spec.algebra != "osp22":
            raise ContextMismatchError("matrix form exists only for the superalgebra")
        ops = {name: to_matrix_operator(op) for name, op in gens.ops.items()}
        ident = MatrixOperator.identity(OpContext(gens.ctx.vars, q=gens.ctx.q))
    else:
        ops = dict(gens.ops)
        ident = LinOperator.identity(gens.ctx)
    rows = []
    for rel in gens.structure:
        res = _evaluate_relation(rel, ops, ident)
        ok = res.is_zero()
        rows.append({"label": rel.label, "form": rel.form, "ok": ok,
                     "residual": None if ok else repr(res)})
    return {
        "algebra": gens.spec.algebra,
        "matrix_form": matrix_form,
        "relations": rows,
        "notes": list(gens.notes),
        "ok": all(r["ok"] for r in rows),
    }


# --------------------------------------------------------------------------
# helpers

def _frac_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    from math import isqrt
    pn, pd = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def _mark_power(spec: RepSpec) -> Scalar:
    """q**n as an exact scalar: explicit override, or integer mark."""
    if spec.qn is not None:
        return spec.qn
    q = spec.q.q
    n = spec.n
    if n.is_rational() and n.re.denominator == 1:
        return q ** int(n.re)
    raise ValueError(
        "mark power q**n is not rational for a non-integer mark; "
        "pass qn= explicitly")


def _qint_from_power(t: Scalar, q: Scalar) -> Scalar:
    """{n} = (1 - q**n)/(1 - q) expressed through t = q**n."""
    if q == ONE:
        raise ZeroDivisionError
    return (ONE - t) / (ONE - q)


GV = lambda a, b=0: (Fraction(a), Fraction(b))


# --------------------------------------------------------------------------
# individual families

def _sl2_like_ops(ctx: OpContext, var: str, n: Scalar, theta_term: bool = False):
    x = ctx.var(var)
    x2 = ctx.var(var, 2)
    d = LinOperator.deriv(ctx, var)
    jp = LinOperator.mult(ctx, x2) * d - LinOperator.mult(ctx, x).scale(n)
    j0 = LinOperator.mult(ctx, x) * d - LinOperator.identity(ctx).scale(n / Scalar(2))
    return jp, j0, d


def _make_sl2(spec: RepSpec) -> GeneratorSet:
    ctx = OpContext(["x"])
    jp, j0, jm = _sl2_like_ops(ctx, "x", spec.n)
    structure = [
        Relation.comm("[J0,J+]=J+", "J0", "J+", {"J+": 1}),
        Relation.comm("[J0,J-]=-J-", "J0", "J-", {"J-": -1}),
        Relation.comm("[J+,J-]=-2J0", "J+", "J-", {"J0": -2}),
    ]
    return GeneratorSet(
        spec, ctx, ("J+", "J0", "J-"),
        {"J+": jp, "J0": j0, "J-": jm},
        {g: 0 for g in ("J+", "J0", "J-")},
        {"J+": GV(1), "J0": GV(0), "J-": GV(-1)},
        structure)


def _make_sl2q(spec: RepSpec) -> GeneratorSet:
    qp = spec.q
    q = qp.b  # structure constants live at the effective base
    ctx = OpContext(["x"], q=qp)
    x = ctx.var("x")
    D = LinOperator.deriv(ctx, "x")
    if q == ONE:
        nq = spec.n
        nh = spec.n / Scalar(2)
        t = ONE
        kappa = ONE * Scalar(2) / Scalar(2)  # limit of the cleared constants
        lam = Scalar(2)
        notes = ["base 1: classical limit branch"]
    else:
        t = _mark_power(spec) if qp.base == "single" else _mark_power(
            RepSpec("sl2q", n=spec.n, q=QParam(q), qn=spec.qn))
        nq = _qint_from_power(t, q)           # {n}
        one_qt = ONE + q * t                  # {2n+2}/{n+1}
        if one_qt.is_zero():
            raise DegenerateQError(f"{{2n+2}} vanishes at q={qp.q}, mark {spec.n}")
        nh = nq / one_qt                      # {n}{n+1}/{2n+2}
        kappa = t * (q + ONE) / one_qt        # the cleared Cartan constant
        lam = one_qt
        notes = []
    jp = LinOperator.mult(ctx, ctx.var("x", 2)) * D - LinOperator.mult(ctx, x).scale(nq)
    j0 = LinOperator.mult(ctx, x) * D - LinOperator.identity(ctx).scale(nh)
    # cleared form of the deformed bracket table: multiply the rescaled
    # relations through by q^(n/2) factors, which cancels every irrationality
    structure = [
        Relation("q J0J- - J-J0 = -kappa J-",
                 [(q, ("J0", "J-")), (-ONE, ("J-", "J0"))],
                 {"J-": -kappa}, form="cleared"),
        Relation("q^2 J+J- - J-J+ = -lambda J0",
                 [(q * q, ("J+", "J-")), (-ONE, ("J-", "J+"))],
                 {"J0": -lam}, form="cleared"),
        Relation("J0J+ - q J+J0 = kappa J+",
                 [(ONE, ("J0", "J+")), (-q, ("J+", "J0"))],
                 {"J+": kappa}, form="cleared"),
    ]
    gens = GeneratorSet(
        spec, ctx, ("J+", "J0", "J-"),
        {"J+": jp, "J0": j0, "J-": D},
        {g: 0 for g in ("J+", "J0", "J-")},
        {"J+": GV(1), "J0": GV(0), "J-": GV(-1)},
        structure, notes=notes)
    # literal rescaled check when q^(n/2) is rational
    s = None
    if t.is_rational() and q.is_rational():
        s = _frac_sqrt(t.re)
    if s is not None and q != ONE:
        sc = Scalar(s)
        c0 = (ONE / (q + ONE)) * lam / t if not (q + ONE).is_zero() else None
        if c0 is not None:
            jr = {"J+": jp.scale(sc.inv()), "J-": gens.ops["J-"].scale(sc.inv()),
                  "J0": j0.scale(c0)}
            rescaled = [
                Relation("q j0j- - j-j0 = -j-",
                         [(q, ("J0", "J-")), (-ONE, ("J-", "J0"))], {"J-": -ONE}),
                Relation("q^2 j+j- - j-j+ = -(q+1) j0",
                         [(q * q, ("J+", "J-")), (-ONE, ("J-", "J+"))],
                         {"J0": -(q + ONE)}),
                Relation("j0j+ - q j+j0 = j+",
                         [(ONE, ("J0", "J+")), (-q, ("J+", "J0"))], {"J+": ONE}),
            ]
            ident = LinOperator.identity(ctx)
            for rel in rescaled:
                if not _evaluate_relation(rel, jr, ident).is_zero():
                    gens.notes.append(f"rescaled check FAILED: {rel.label}")
                    break
            else:
                gens.notes.append("rescaled form verified (q^(n/2) rational)")
    else:
        gens.notes.append("rescaled form skipped (q^(n/2) irrational); cleared form used")
    return gens


def _make_osp22(spec: RepSpec) -> GeneratorSet:
    n = spec.n
    ctx = OpContext(["x"], theta=True)
    x = ctx.var("x")
    th = ctx.var("theta")
    dx = LinOperator.deriv(ctx, "x")
    dth = LinOperator.theta_deriv(ctx)
    mx = LinOperator.mult(ctx, x)
    mth = LinOperator.mult(ctx, th)
    half = Scalar(Fraction(1, 2))
    tp = LinOperator.mult(ctx, ctx.var("x", 2)) * dx - mx.scale(n) + mx * mth * dth
    t0 = mx * dx - LinOperator.identity(ctx).scale(n * half) + (mth * dth).scale(half)
    tm = dx
    jj = -LinOperator.identity(ctx).scale(n * half) - (mth * dth).scale(half)
    q1 = dth
    q2 = mx * dth
    qb1 = mx * mth * dx - mth.scale(n)
    qb2 = -(mth * dx)
    ops = {"T+": tp, "T0": t0, "T-": tm, "J": jj,
           "Q1": q1, "Q2": q2, "Qb1": qb1, "Qb2": qb2}
    structure = [
        Relation.comm("[T0,T+]=T+", "T0", "T+", {"T+": 1}),
        Relation.comm("[T0,T-]=-T-", "T0", "T-", {"T-": -1}),
        Relation.comm("[T+,T-]=-2T0", "T+", "T-", {"T0": -2}),
        Relation.comm("[J,T+]=0", "J", "T+", {}),
        Relation.comm("[J,T0]=0", "J", "T0", {}),
        Relation.comm("[J,T-]=0", "J", "T-", {}),
        Relation.anti("{Q1,Qb2}=-T-", "Q1", "Qb2", {"T-": -1}),
        Relation.anti("{Q2,Qb1}=T+", "Q2", "Qb1", {"T+": 1}),
        Relation("({Qb1,Q1}+{Qb2,Q2})/2=J",
                 [(half, ("Qb1", "Q1")), (half, ("Q1", "Qb1")),
                  (half, ("Qb2", "Q2")), (half, ("Q2", "Qb2"))], {"J": ONE}),
        Relation("({Qb1,Q1}-{Qb2,Q2})/2=T0",
                 [(half, ("Qb1", "Q1")), (half, ("Q1", "Qb1")),
                  (-half, ("Qb2", "Q2")), (-half, ("Q2", "Qb2"))], {"T0": ONE}),
        Relation.anti("{Q1,Q1}=0", "Q1", "Q1", {}),
        Relation.anti("{Q2,Q2}=0", "Q2", "Q2", {}),
        Relation.anti("{Q1,Q2}=0", "Q1", "Q2", {}),
        Relation.anti("{Qb1,Qb1}=0", "Qb1", "Qb1", {}),
        Relation.anti("{Qb2,Qb2}=0", "Qb2", "Qb2", {}),
        Relation.anti("{Qb1,Qb2}=0", "Qb1", "Qb2", {}),
        Relation.comm("[Q1,T+]=Q2", "Q1", "T+", {"Q2": 1}),
        Relation.comm("[Q2,T+]=0", "Q2", "T+", {}),
        Relation.comm("[Q1,T-]=0", "Q1", "T-", {}),
        Relation.comm("[Q2,T-]=-Q1", "Q2", "T-", {"Q1": -1}),
        Relation.comm("[Qb1,T+]=0", "Qb1", "T+", {}),
        Relation.comm("[Qb2,T+]=-Qb1", "Qb2", "T+", {"Qb1": -1}),
        Relation.comm("[Qb1,T-]=Qb2", "Qb1", "T-", {"Qb2": 1}),
        Relation.comm("[Qb2,T-]=0", "Qb2", "T-", {}),
        Relation.comm("[Q1,T0]=Q1/2", "Q1", "T0", {"Q1": half}),
        Relation.comm("[Q2,T0]=-Q2/2", "Q2", "T0", {"Q2": -half}),
        Relation.comm("[Qb1,T0]=-Qb1/2", "Qb1", "T0", {"Qb1": -half}),
        Relation.comm("[Qb2,T0]=Qb2/2", "Qb2", "T0", {"Qb2": half}),
        Relation.comm("[Q1,J]=-Q1/2", "Q1", "J", {"Q1": -half}),
        Relation.comm("[Q2,J]=-Q2/2", "Q2", "J", {"Q2": -half}),
        Relation.comm("[Qb1,J]=Qb1/2", "Qb1", "J", {"Qb1": half}),
        Relation.comm("[Qb2,J]=Qb2/2", "Qb2", "J", {"Qb2": half}),
    ]
    h = Fraction(1, 2)
    return GeneratorSet(
        spec, ctx, ("T+", "T0", "J", "T-", "Q1", "Q2", "Qb1", "Qb2"),
        ops,
        {"T+": 0, "T0": 0, "J": 0, "T-": 0, "Q1": 1, "Q2": 1, "Qb1": 1, "Qb2": 1},
        {"T+": GV(1), "T0": GV(0), "J": GV(0), "T-": GV(-1),
         "Q1": (Fraction(-1, 2), Fraction(0)), "Q2": (h, Fraction(0)),
         "Qb1": (h, Fraction(0)), "Qb2": (Fraction(-1, 2), Fraction(0))},
        structure)


def to_matrix_rep(gens: GeneratorSet) -> Dict[str, MatrixOperator]:
    """Matrix images of the superalgebra generators (upper row = odd sector)."""
    if gens.spec.algebra != "osp22":
        raise ContextMismatchError("matrix form exists only for the superalgebra")
    return {name: to_matrix_operator(op) for name, op in gens.ops.items()}


def _make_sl2xsl2(spec: RepSpec) -> GeneratorSet:
    ctx = OpContext(["x", "y"])
    xp, x0, xm = _sl2_like_ops(ctx, "x", spec.n)
    yp, y0, ym = _sl2_like_ops(ctx, "y", spec.m)
    ops = {"Jx+": xp, "Jx0": x0, "Jx-": xm, "Jy+": yp, "Jy0": y0, "Jy-": ym}
    structure = [
        Relation.comm("[Jx0,Jx+]=Jx+", "Jx0", "Jx+", {"Jx+": 1}),
        Relation.comm("[Jx0,Jx-]=-Jx-", "Jx0", "Jx-", {"Jx-": -1}),
        Relation.comm("[Jx+,Jx-]=-2Jx0", "Jx+", "Jx-", {"Jx0": -2}),
        Relation.comm("[Jy0,Jy+]=Jy+", "Jy0", "Jy+", {"Jy+": 1}),
        Relation.comm("[Jy0,Jy-]=-Jy-", "Jy0", "Jy-", {"Jy-": -1}),
        Relation.comm("[Jy+,Jy-]=-2Jy0", "Jy+", "Jy-", {"Jy0": -2}),
    ] + [Relation.comm(f"[{a},{b}]=0", a, b, {})
         for a in ("Jx+", "Jx0", "Jx-") for b in ("Jy+", "Jy0", "Jy-")]
    return GeneratorSet(
        spec, ctx, ("Jx+", "Jx0", "Jx-", "Jy+", "Jy0", "Jy-"),
        ops, {g: 0 for g in ops},
        {"Jx+": GV(1, 0), "Jx0": GV(0), "Jx-": GV(-1, 0),
         "Jy+": GV(0, 1), "Jy0": GV(0), "Jy-": GV(0, -1)},
        structure)


def _make_gl2_semi(spec: RepSpec) -> GeneratorSet:
    r, n = spec.r, spec.n
    ctx = OpContext(["x", "y"])
    x, y = ctx.var("x"), ctx.var("y")
    dx, dy = LinOperator.deriv(ctx, "x"), LinOperator.deriv(ctx, "y")
    third = n / Scalar(3)
    j1 = dx
    j2 = LinOperator.mult(ctx, x) * dx - LinOperator.identity(ctx).scale(third)
    j3 = LinOperator.mult(ctx, y) * dy - LinOperator.identity(ctx).scale(third / Scalar(r))
    j4 = (LinOperator.mult(ctx, ctx.var("x", 2)) * dx
          + (LinOperator.mult(ctx, x * y) * dy).scale(r)
          - LinOperator.mult(ctx, x).scale(n))
    ops = {"J1": j1, "J2": j2, "J3": j3, "J4": j4}
    for i in range(r + 1):
        ops[f"J{5 + i}"] = dy if i == 0 else LinOperator.mult(ctx, ctx.var("x", i)) * dy
    structure = [
        Relation.comm("[J1,J2]=J1", "J1", "J2", {"J1": 1}),
        Relation.comm("[J1,J3]=0", "J1", "J3", {}),
        Relation.comm("[J2,J3]=0", "J2", "J3", {}),
        Relation.comm("[J1,J4]=2J2+rJ3", "J1", "J4", {"J2": 2, "J3": r}),
        Relation.comm("[J2,J4]=J4", "J2", "J4", {"J4": 1}),
        Relation.comm("[J3,J4]=0", "J3", "J4", {}),
    ]
    for i in range(r + 1):
        g = f"J{5 + i}"
        structure.append(Relation.comm(f"[J1,{g}]={i}*J{4 + i}" if i else f"[J1,{g}]=0",
                                       "J1", g, {f"J{4 + i}": i} if i else {}))
        structure.append(Relation.comm(f"[J2,{g}]={i}*{g}", "J2", g,
                                       {g: i} if i else {}))
        structure.append(Relation.comm(f"[J3,{g}]=-{g}", "J3", g, {g: -1}))
        rhs = {f"J{6 + i}": i - r} if i < r else {}
        structure.append(Relation.comm(f"[J4,{g}]", "J4", g, rhs))
        for j in range(i + 1, r + 1):
            structure.append(Relation.comm(f"[{g},J{5 + j}]=0", g, f"J{5 + j}", {}))
    names = ("J4", "J2", "J3", "J1") + tuple(f"J{5 + i}" for i in range(r + 1))
    grading = {"J1": GV(-1, 0), "J2": GV(0), "J3": GV(0), "J4": GV(1, 0)}
    for i in range(r + 1):
        grading[f"J{5 + i}"] = GV(i, -1)
    return GeneratorSet(spec, ctx, names, ops, {g: 0 for g in ops},
                        grading, structure, grading_weight=r)


def root_of_unity_generators(n: int, q: QParam) -> Dict[str, LinOperator]:
    """Difference-family generators at a root-of-unity deformation.

    When q**n = 1 the Cartan constant {n}{n+1}/{2n+2} degenerates, but the
    raising operator x^2 D - {n} x and the flag statements survive; the
    Cartan member is returned without its additive constant (any constant
    preserves every space).
    """
    ctx = OpContext(["x"], q=q)
    t = q.b ** n
    if t != ONE:
        raise ValueError("the deformation is not an n-th root of unity")
    nq = qnumber(n, q)
    D = LinOperator.deriv(ctx, "x")
    jp = LinOperator.mult(ctx, ctx.var("x", 2)) * D - LinOperator.mult(ctx, ctx.var("x")).scale(nq)
    j0 = LinOperator.mult(ctx, ctx.var("x")) * D
    return {"J+": jp, "J0": j0, "J-": D}


def make_rep(spec: RepSpec) -> GeneratorSet:
    builders = {
        "sl2": _make_sl2,
        "sl2q": _make_sl2q,
        "osp22": _make_osp22,
        "sl2xsl2": _make_sl2xsl2,
        "gl2_semi": _make_gl2_semi,
        "sl3": _make_sl3,
        "so3_nonflat": _make_so3_nonflat,
        "so_k1": _make_so_k1,
        "sl3_flag": _make_sl3_flag,
    }
    return builders[spec.algebra](spec)


# --------------------------------------------------------------------------
# two-variable and many-variable families with derived bracket tables

def _make_sl3(spec: RepSpec) -> GeneratorSet:
    n = spec.n
    ctx = OpContext(["x", "y"])
    x, y = ctx.var("x"), ctx.var("y")
    dx, dy = LinOperator.deriv(ctx, "x"), LinOperator.deriv(ctx, "y")

    def mul(p):
        return LinOperator.mult(ctx, p)

    ops = {
        "J13": mul(ctx.var("y", 2)) * dy + mul(x * y) * dx - mul(y).scale(n),
        "J12": mul(ctx.var("x", 2)) * dx + mul(x * y) * dy - mul(x).scale(n),
        "J23": -(mul(y) * dx),
        "J21": -dx,
        "J31": -dy,
        "J32": -(mul(x) * dy),
        "Jd": mul(y) * dy + (mul(x) * dx).scale(2) - LinOperator.identity(ctx).scale(n),
        "Jtd": (mul(y) * dy).scale(2) + mul(x) * dx - LinOperator.identity(ctx).scale(n),
    }
    structure = _SL3_TABLE(n)
    return GeneratorSet(
        spec, ctx, ("J13", "J12", "J23", "J32", "Jd", "Jtd", "J31", "J21"),
        ops, {g: 0 for g in ops},
        {"J13": GV(0, 1), "J12": GV(1, 0), "J23": GV(-1, 1), "J32": GV(1, -1),
         "Jd": GV(0), "Jtd": GV(0), "J31": GV(0, -1), "J21": GV(-1, 0)},
        structure)


def _make_so3_nonflat(spec: RepSpec) -> GeneratorSet:
    n = spec.n
    ctx = OpContext(["x", "y"])
    x, y = ctx.var("x"), ctx.var("y")
    one = ctx.const(1)
    dx, dy = LinOperator.deriv(ctx, "x"), LinOperator.deriv(ctx, "y")

    def mul(p):
        return LinOperator.mult(ctx, p)

    ops = {
        "J1": mul(one + ctx.var("y", 2)) * dy + mul(x * y) * dx - mul(y).scale(n),
        "J2": mul(one + ctx.var("x", 2)) * dx + mul(x * y) * dy - mul(x).scale(n),
        "J3": mul(x) * dy - mul(y) * dx,
    }
    structure = _SO3_TABLE(n)
    return GeneratorSet(spec, ctx, ("J1", "J2", "J3"), ops,
                        {g: 0 for g in ops},
                        {g: GV(0) for g in ops}, structure,
                        notes=["not graded"])


def _make_so_k1(spec: RepSpec) -> GeneratorSet:
    k, n = spec.k, spec.n
    vars = tuple(f"x{i}" for i in range(1, k + 1))
    ctx = OpContext(vars)

    def mul(p):
        return LinOperator.mult(ctx, p)

    ops: Dict[str, LinOperator] = {}
    names: List[str] = []
    for i in range(2, k + 1):
        for j in range(1, i):
            name = f"H{i}{j}"
            ops[name] = (mul(ctx.var(f"x{i}")) * LinOperator.deriv(ctx, f"x{j}")
                         - mul(ctx.var(f"x{j}")) * LinOperator.deriv(ctx, f"x{i}"))
            names.append(name)
    one = ctx.const(1)
    for i in range(1, k + 1):
        xi = ctx.var(f"x{i}")
        gi = mul(one + xi * xi) * LinOperator.deriv(ctx, f"x{i}")
        for j in range(1, k + 1):
            if j != i:
                gi = gi + mul(xi * ctx.var(f"x{j}")) * LinOperator.deriv(ctx, f"x{j}")
        gi = gi - mul(xi).scale(n)
        ops[f"G{i}"] = gi
        names.append(f"G{i}")
    structure = _SO_K1_TABLE(k)
    return GeneratorSet(spec, ctx, tuple(names), ops, {g: 0 for g in ops},
                        {g: GV(0) for g in ops}, structure,
                        notes=["not graded"])


def _make_sl3_flag(spec: RepSpec) -> GeneratorSet:
    n1, n2 = spec.n, spec.m
    ctx = OpContext(["z12", "z13", "z23"])
    z12, z13, z23 = (ctx.var(v) for v in ("z12", "z13", "z23"))
    d12, d13, d23 = (LinOperator.deriv(ctx, v) for v in ("z12", "z13", "z23"))

    def mul(p):
        return LinOperator.mult(ctx, p)

    ident = LinOperator.identity(ctx)
    ops = {
        "e1": -d12 - mul(z23) * d13,
        "e2": -d23,
        "f1": mul(z12 * z12) * d12 - mul(z13) * d23 - mul(z12).scale(n1),
        "f2": (mul(z13 * z23) * d13 + mul(z23 * z23) * d23
               + mul(z13 - z12 * z23) * d12 - mul(z23).scale(n2)),
        "h1": (-(mul(z12) * d12).scale(2) - mul(z13) * d13 + mul(z23) * d23
               + ident.scale(n1)),
        "h2": (mul(z12) * d12 - mul(z13) * d13 - (mul(z23) * d23).scale(2)
               + ident.scale(n2)),
    }
    structure = _SL3_FLAG_TABLE()
    return GeneratorSet(spec, ctx, ("e1", "e2", "h1", "h2", "f1", "f2"),
                        ops, {g: 0 for g in ops},
                        {g: GV(0) for g in ops}, structure,
                        notes=["not graded"])


# --------------------------------------------------------------------------
# frozen bracket tables (derived once by expansion, kept as regression data)

def _SL3_TABLE(n: Scalar) -> List[Relation]:
    # all brackets turn out mark-independent
    table = [
        ("J13", "J12", {}),
        ("J13", "J23", {}),
        ("J13", "J32", {"J12": 1}),
        ("J13", "Jd", {"J13": -1}),
        ("J13", "Jtd", {"J13": -2}),
        ("J13", "J31", {"Jtd": 1}),
        ("J13", "J21", {"J23": -1}),
        ("J12", "J23", {"J13": 1}),
        ("J12", "J32", {}),
        ("J12", "Jd", {"J12": -2}),
        ("J12", "Jtd", {"J12": -1}),
        ("J12", "J31", {"J32": -1}),
        ("J12", "J21", {"Jd": 1}),
        ("J23", "J32", {"Jd": -1, "Jtd": 1}),
        ("J23", "Jd", {"J23": 1}),
        ("J23", "Jtd", {"J23": -1}),
        ("J23", "J31", {"J21": 1}),
        ("J23", "J21", {}),
        ("J32", "Jd", {"J32": -1}),
        ("J32", "Jtd", {"J32": 1}),
        ("J32", "J31", {}),
        ("J32", "J21", {"J31": 1}),
        ("Jd", "Jtd", {}),
        ("Jd", "J31", {"J31": -1}),
        ("Jd", "J21", {"J21": -2}),
        ("Jtd", "J31", {"J31": -2}),
        ("Jtd", "J21", {"J21": -1}),
        ("J31", "J21", {}),
    ]
    return [Relation.comm(f"[{a},{b}]", a, b, rhs) for a, b, rhs in table]


def _SO3_TABLE(n: Scalar) -> List[Relation]:
    return [
        Relation.comm("[J1,J2]=J3", "J1", "J2", {"J3": 1}),
        Relation.comm("[J1,J3]=-J2", "J1", "J3", {"J2": -1}),
        Relation.comm("[J2,J3]=J1", "J2", "J3", {"J1": 1}),
    ]


def _SO_K1_TABLE(k: int) -> List[Relation]:
    # rotation brackets, with L_ij = x_i d_j - x_j d_i written in the stored
    # H names (H_ij kept for i > j, L_ij = -L_ji, L_ii = 0)
    def L(i: int, j: int) -> Dict[str, int]:
        if i == j:
            return {}
        return {f"H{i}{j}": 1} if i > j else {f"H{j}{i}": -1}

    def merge(*parts: Dict[str, int]) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for p in parts:
            for g, c in p.items():
                out[g] = out.get(g, 0) + c
        return {g: c for g, c in out.items() if c}

    def neg(p: Dict[str, int]) -> Dict[str, int]:
        return {g: -c for g, c in p.items()}

    rels = []
    hs = [(i, j) for i in range(2, k + 1) for j in range(1, i)]
    for idx, (a, b) in enumerate(hs):
        for (c, d) in hs[idx + 1:]:
            rhs = merge(L(a, d) if b == c else {},
                        neg(L(b, d)) if a == c else {},
                        neg(L(a, c)) if b == d else {},
                        L(b, c) if a == d else {})
            rels.append(Relation.comm(f"[H{a}{b},H{c}{d}]", f"H{a}{b}", f"H{c}{d}", rhs))
    for (a, b) in hs:
        for l in range(1, k + 1):
            rhs: Dict[str, int] = {}
            if l == b:
                rhs[f"G{a}"] = rhs.get(f"G{a}", 0) + 1
            if l == a:
                rhs[f"G{b}"] = rhs.get(f"G{b}", 0) - 1
            rels.append(Relation.comm(f"[H{a}{b},G{l}]", f"H{a}{b}", f"G{l}", rhs))
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            rels.append(Relation.comm(f"[G{i},G{j}]", f"G{i}", f"G{j}", L(j, i)))
    return rels


def _SL3_FLAG_TABLE() -> List[Relation]:
    rels = [
        Relation.comm("[e1,f1]=h1", "e1", "f1", {"h1": 1}),
        Relation.comm("[e1,f2]=0", "e1", "f2", {}),
        Relation.comm("[e2,f1]=0", "e2", "f1", {}),
        Relation.comm("[e2,f2]=h2", "e2", "f2", {"h2": 1}),
        Relation.comm("[h1,h2]=0", "h1", "h2", {}),
        Relation.comm("[h1,e1]=2e1", "h1", "e1", {"e1": 2}),
        Relation.comm("[h1,e2]=-e2", "h1", "e2", {"e2": -1}),
        Relation.comm("[h2,e1]=-e1", "h2", "e1", {"e1": -1}),
        Relation.comm("[h2,e2]=2e2", "h2", "e2", {"e2": 2}),
        Relation.comm("[h1,f1]=-2f1", "h1", "f1", {"f1": -2}),
        Relation.comm("[h1,f2]=f2", "h1", "f2", {"f2": 1}),
        Relation.comm("[h2,f1]=f1", "h2", "f1", {"f1": 1}),
        Relation.comm("[h2,f2]=-2f2", "h2", "f2", {"f2": -2}),
    ]
    # Serre relations: ad(e1)^2 e2 = 0 etc.; [e1,e2] and [f1,f2] are the
    # extra root generators, outside the six-name span
    for a, b in (("e1", "e2"), ("e2", "e1"), ("f1", "f2"), ("f2", "f1")):
        rels.append(Relation(
            f"[{a},[{a},{b}]]=0",
            [(ONE, (a, a, b)), (Scalar(-2), (a, b, a)), (ONE, (b, a, a))],
            {}))
    return rels
