"""Canonical linear operators: polynomial coefficients times derivative words.

An operator is stored normally ordered -- every coefficient to the left of
every derivative symbol -- so equality of canonical forms is the operator
equality used throughout.  Composition re-normalizes by pushing derivative
words through coefficients:

  continuous   d o M_c       = M_{dc} + M_c d            (Leibniz)
  difference   D o M_c       = M_{Dc} + M_{c(qx)} D      (exact, any base)
  odd          d_th o M_c    = M_{c0 - th*c1} d_th + M_{c1}   (c = c0 + th*c1)

A context either uses continuous derivatives in all variables or a difference
derivative in a single variable; one optional anticommuting variable rides on
top of the continuous case.  The 2x2 matrix form replaces the anticommuting
pair (th, d_th) by the raising/lowering matrices, upper component = th-sector.
"""

from __future__ import annotations

import json
from math import comb
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .poly import Poly, SuperPoly
from .scalars import QParam, Scalar, ScalarLike, ZERO

DerivWord = Tuple[int, ...]

THETA = "theta"


class ContextMismatchError(ValueError):
    """Operands built over different operator contexts."""


class OpContext:
    """Variable list plus calculus choice (continuous vs difference, odd var)."""

    __slots__ = ("vars", "q", "theta")

    def __init__(self, vars: Iterable[str], q: QParam | None = None,
                 theta: bool = False):
        self.vars: Tuple[str, ...] = tuple(vars)
        self.q = q
        self.theta = theta
        if THETA in self.vars:
            raise ValueError("the odd variable is declared via theta=True")
        if q is not None and theta:
            raise ValueError("difference calculus with an odd variable is not defined")
        if q is not None and len(self.vars) != 1:
            raise ValueError("difference contexts carry exactly one variable")

    @property
    def all_vars(self) -> Tuple[str, ...]:
        return self.vars + (THETA,) if self.theta else self.vars

    @property
    def nil(self) -> frozenset[str]:
        return frozenset({THETA}) if self.theta else frozenset()

    def poly(self, terms=None) -> Poly:
        return Poly(self.all_vars, terms or {}, self.nil)

    def const(self, c: ScalarLike) -> Poly:
        return Poly.const(self.all_vars, c, self.nil)

    def var(self, name: str, power: int = 1) -> Poly:
        return Poly.var(self.all_vars, name, power, self.nil)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, OpContext) and self.vars == other.vars
                and self.q == other.q and self.theta == other.theta)

    def __hash__(self) -> int:
        return hash((self.vars, self.q, self.theta))

    def __repr__(self) -> str:
        q = f", q={self.q}" if self.q else ""
        th = ", theta" if self.theta else ""
        return f"OpContext({','.join(self.vars)}{q}{th})"


class LinOperator:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: OpContext,
                 terms: Mapping[DerivWord, Poly] | None = None):
        self.ctx = ctx
        width = len(ctx.all_vars)
        clean: Dict[DerivWord, Poly] = {}
        if terms:
            for w, c in terms.items():
                w = tuple(w)
                if len(w) != width:
                    raise ContextMismatchError(f"derivative word {w} does not fit {ctx}")
                if ctx.theta and w[-1] > 1:
                    continue  # d_th^2 = 0
                if not c.is_zero():
                    clean[w] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ctx: OpContext) -> "LinOperator":
        return cls(ctx, {})

    @classmethod
    def identity(cls, ctx: OpContext) -> "LinOperator":
        return cls.mult(ctx, ctx.const(1))

    @classmethod
    def mult(cls, ctx: OpContext, p: Poly) -> "LinOperator":
        """Multiplication operator f -> p*f."""
        return cls(ctx, {(0,) * len(ctx.all_vars): p})

    @classmethod
    def deriv(cls, ctx: OpContext, name: str, order: int = 1) -> "LinOperator":
        w = [0] * len(ctx.all_vars)
        w[ctx.all_vars.index(name)] = order
        return cls(ctx, {tuple(w): ctx.const(1)})

    @classmethod
    def theta_deriv(cls, ctx: OpContext) -> "LinOperator":
        return cls.deriv(ctx, THETA)

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "LinOperator") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")

    def __add__(self, other: "LinOperator") -> "LinOperator":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out[w] + c if w in out else c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return LinOperator(self.ctx, out)

    def __neg__(self) -> "LinOperator":
        return LinOperator(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "LinOperator") -> "LinOperator":
        return self + (-other)

    def scale(self, c: ScalarLike) -> "LinOperator":
        c = Scalar.of(c)
        return LinOperator(self.ctx, {w: p.scale(c) for w, p in self.terms.items()})

    def __rmul__(self, other: ScalarLike) -> "LinOperator":
        return self.scale(other)

    def __mul__(self, other) -> "LinOperator":
        if isinstance(other, LinOperator):
            return compose(self, other)
        return self.scale(other)

    def __pow__(self, k: int) -> "LinOperator":
        out = LinOperator.identity(self.ctx)
        for _ in range(k):
            out = compose(out, self)
        return out

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, LinOperator) and self.ctx == other.ctx
                and self.terms == other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def order(self, name: str | None = None) -> int:
        """Highest derivative order (in one variable, or total); zero op gives -1."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(w) for w in self.terms)
        i = self.ctx.all_vars.index(name)
        return max(w[i] for w in self.terms)

    # -- action ---------------------------------------------------------------

    def apply_poly(self, f: Poly) -> Poly:
        if tuple(f.vars) != self.ctx.all_vars:
            raise ContextMismatchError(
                f"function over {f.vars} fed to operator over {self.ctx.all_vars}")
        out = self.ctx.poly()
        b = self.ctx.q.b if self.ctx.q is not None else None
        for w, c in self.terms.items():
            g = f
            for i, a in enumerate(w):
                if a == 0:
                    continue
                name = self.ctx.all_vars[i]
                if name == THETA:
                    g = g.coefficient_of(THETA, 1)
                elif b is not None:
                    for _ in range(a):
                        g = g.jackson_derivative(name, b)
                else:
                    for _ in range(a):
                        g = g.derivative(name)
                if g.is_zero():
                    break
            if not g.is_zero():
                out = out + c * g
        return out

    def apply(self, f):
        """Apply to a Poly or SuperPoly, returning the same kind."""
        if isinstance(f, SuperPoly):
            if not self.ctx.theta:
                raise ContextMismatchError("even/odd input fed to an even-only operator")
            return SuperPoly.from_poly(self.apply_poly(f.to_poly()))
        return self.apply_poly(f)

    # -- composition ------------------------------------------------------------

    def _push_word(self, w: DerivWord, c: Poly) -> List[Tuple[DerivWord, Poly]]:
        """Rewrite D^w o M_c as a sum of M_c' D^w' (normal ordering)."""
        names = self.ctx.all_vars
        b = self.ctx.q.b if self.ctx.q is not None else None
        acc: List[Tuple[List[int], Poly]] = [([0] * len(names), c)]
        for i, a in enumerate(w):
            if a == 0:
                continue
            name = names[i]
            if name == THETA:
                nxt = []
                for word, coeff in acc:
                    c0 = coeff.coefficient_of(THETA, 0)
                    c1 = coeff.coefficient_of(THETA, 1)
                    th = Poly.var(names, THETA, nil=self.ctx.nil)
                    if not c0.is_zero() or not c1.is_zero():
                        flip = c0 - th * c1
                        if not flip.is_zero():
                            w2 = list(word)
                            w2[i] += 1
                            nxt.append((w2, flip))
                        if not c1.is_zero():
                            nxt.append((list(word), c1))
                acc = nxt
            elif b is not None:
                for _ in range(a):
                    nxt = []
                    for word, coeff in acc:
                        dc = coeff.jackson_derivative(name, b)
                        if not dc.is_zero():
                            nxt.append((list(word), dc))
                        shifted = coeff.shift_scale(name, b)
                        if not shifted.is_zero():
                            w2 = list(word)
                            w2[i] += 1
                            nxt.append((w2, shifted))
                    acc = nxt
            else:
                nxt = []
                for word, coeff in acc:
                    dj = coeff
                    for j in range(a + 1):
                        if dj.is_zero():
                            break
                        w2 = list(word)
                        w2[i] += a - j
                        nxt.append((w2, dj.scale(comb(a, j))))
                        dj = dj.derivative(name)
                acc = nxt
            if not acc:
                break
        return [(tuple(word), coeff) for word, coeff in acc]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ctx.all_vars
        dsym = "D" if self.ctx.q is not None else "d"
        bits = []
        for w, c in sorted(self.terms.items()):
            ds = "*".join(
                (f"{dsym}{v}^{k}" if k > 1 else f"{dsym}{v}")
                for v, k in zip(names, w) if k)
            cs = str(c)
            if ds:
                cs = f"({cs})*{ds}" if (" " in cs or "+" in cs) else f"{cs}*{ds}"
            bits.append(cs)
        return "  +  ".join(bits)

    def __repr__(self) -> str:
        return f"LinOperator({self})"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        ctx = {
            "vars": list(self.ctx.vars),
            "theta": self.ctx.theta,
            "q": str(self.ctx.q.q) if self.ctx.q else None,
            "q_base": self.ctx.q.base if self.ctx.q else None,
        }
        names = self.ctx.all_vars
        terms = []
        for w, c in sorted(self.terms.items()):
            terms.append({
                "deriv": {v: k for v, k in zip(names, w) if k},
                "coeff": c.to_json(),
            })
        return {"context": ctx, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "LinOperator":
        c = data["context"]
        q = QParam(Scalar.parse(c["q"]), c["q_base"]) if c["q"] else None
        ctx = OpContext(c["vars"], q=q, theta=c["theta"])
        terms = {}
        for t in data["terms"]:
            w = tuple(t["deriv"].get(v, 0) for v in ctx.all_vars)
            terms[w] = Poly.from_json(t["coeff"], nil=ctx.nil)
        return cls(ctx, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def compose(a: LinOperator, b: LinOperator) -> LinOperator:
    """Canonical form of a o b (b acts first)."""
    a._check(b)
    ctx = a.ctx
    theta_slot = len(ctx.all_vars) - 1 if ctx.theta else None
    out: Dict[DerivWord, Poly] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            for wmid, cmid in a._push_word(w1, c2):
                w = tuple(x + y for x, y in zip(wmid, w2))
                if theta_slot is not None and w[theta_slot] > 1:
                    continue  # d_th^2 = 0
                c = c1 * cmid
                if c.is_zero():
                    continue
                s = out[w] + c if w in out else c
                if s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
    return LinOperator(ctx, out)


def commutator(a: LinOperator, b: LinOperator) -> LinOperator:
    return compose(a, b) - compose(b, a)


def anticommutator(a: LinOperator, b: LinOperator) -> LinOperator:
    return compose(a, b) + compose(b, a)


class MatrixOperator:
    """2x2 matrix of operators over one shared (theta-free) context."""

    __slots__ = ("ctx", "entries")

    def __init__(self, entries: Sequence[Sequence[LinOperator]]):
        rows = [list(r) for r in entries]
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("expected a 2x2 operator matrix")
        ctx = rows[0][0].ctx
        for r in rows:
            for e in r:
                if e.ctx != ctx:
                    raise ContextMismatchError("matrix entries disagree on context")
        self.ctx = ctx
        self.entries = rows

    @classmethod
    def zero(cls, ctx: OpContext) -> "MatrixOperator":
        z = LinOperator.zero(ctx)
        return cls([[z, z], [z, z]])

    @classmethod
    def identity(cls, ctx: OpContext) -> "MatrixOperator":
        one = LinOperator.identity(ctx)
        z = LinOperator.zero(ctx)
        return cls([[one, z], [z, one]])

    def __add__(self, other: "MatrixOperator") -> "MatrixOperator":
        return MatrixOperator([[self.entries[i][j] + other.entries[i][j]
                                for j in (0, 1)] for i in (0, 1)])

    def __neg__(self) -> "MatrixOperator":
        return MatrixOperator([[-self.entries[i][j] for j in (0, 1)] for i in (0, 1)])

    def __sub__(self, other: "MatrixOperator") -> "MatrixOperator":
        return self + (-other)

    def scale(self, c: ScalarLike) -> "MatrixOperator":
        return MatrixOperator([[self.entries[i][j].scale(c) for j in (0, 1)]
                               for i in (0, 1)])

    def __mul__(self, other) -> "MatrixOperator":
        if not isinstance(other, MatrixOperator):
            return self.scale(other)
        e, f = self.entries, other.entries
        return MatrixOperator([
            [compose(e[i][0], f[0][j]) + compose(e[i][1], f[1][j]) for j in (0, 1)]
            for i in (0, 1)])

    __rmul__ = scale

    def __pow__(self, k: int) -> "MatrixOperator":
        out = MatrixOperator.identity(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, MatrixOperator)
                and self.entries == other.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def apply(self, spinor: Tuple[Poly, Poly]) -> Tuple[Poly, Poly]:
        up, lo = spinor
        e = self.entries
        return (e[0][0].apply_poly(up) + e[0][1].apply_poly(lo),
                e[1][0].apply_poly(up) + e[1][1].apply_poly(lo))

    def order(self) -> int:
        return max(e.order() for row in self.entries for e in row)

    def __repr__(self) -> str:
        e = self.entries
        return (f"MatrixOperator([[{e[0][0]}, {e[0][1]}],"
                f" [{e[1][0]}, {e[1][1]}]])")


def matrix_commutator(a: MatrixOperator, b: MatrixOperator) -> MatrixOperator:
    return a * b - b * a


def matrix_anticommutator(a: MatrixOperator, b: MatrixOperator) -> MatrixOperator:
    return a * b + b * a


def to_matrix_operator(op: LinOperator) -> MatrixOperator:
    """Replace the anticommuting pair by raising/lowering matrices.

    Spinor layout: upper component = coefficient of the odd variable, lower
    component = even part, so multiplication by theta becomes the raising
    matrix and the odd derivative the lowering one.
    """
    if not op.ctx.theta:
        raise ContextMismatchError("operator has no odd variable")
    ctx = OpContext(op.ctx.vars, q=op.ctx.q)
    z = LinOperator.zero(ctx)
    blocks = [[z, z], [z, z]]
    names = op.ctx.all_vars
    for w, c in op.terms.items():
        split = SuperPoly.from_poly(c)
        c0, c1 = split.even, split.odd
        xword = w[:-1]
        e = w[-1]
        base = LinOperator(ctx, {xword: ctx.const(1)})
        m0 = LinOperator.mult(ctx, c0) * base if not c0.is_zero() else z
        m1 = LinOperator.mult(ctx, c1) * base if not c1.is_zero() else z
        if e == 0:
            add = [[m0, m1], [z, m0]]
        else:
            add = [[m1, z], [m0, z]]
        blocks = [[blocks[i][j] + add[i][j] for j in (0, 1)] for i in (0, 1)]
    return MatrixOperator(blocks)
