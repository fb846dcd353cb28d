"""Finite-dimensional polynomial spaces and exact action matrices.

A SpaceSpec names a lattice region (interval, spinor pair, triangle,
rectangle, wedge, simplex); its basis is enumerated in graded order with the
even sector first, and the closed-form dimension is cross-checked against the
enumeration at construction time.  action_matrix applies an operator to each
basis monomial: either every image stays inside and an exact matrix comes
back, or the offending monomials are returned with their out-of-space parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from .operators import LinOperator, MatrixOperator, OpContext
from .poly import Poly
from .scalars import Scalar, ZERO

# basis label: exponent tuple over the space variables, plus the odd flag
Label = Tuple[Tuple[int, ...], int]


class DimensionMismatchError(AssertionError):
    """Enumerated basis size disagrees with the closed-form dimension."""


@dataclass(frozen=True)
class SpaceSpec:
    kind: str                     # interval|spinor|triangle|rectangle|wedge|simplex
    params: Tuple[int, ...]
    vars: Tuple[str, ...] = ()

    def __post_init__(self):
        kinds = {"interval": 1, "spinor": 2, "triangle": 1, "rectangle": 2,
                 "wedge": 2, "simplex": 2}
        if self.kind not in kinds:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if len(self.params) != kinds[self.kind]:
            raise ValueError(f"{self.kind} takes {kinds[self.kind]} parameters")
        # the spinor pair allows an empty odd row (M = -1)
        low = -1 if self.kind == "spinor" else 0
        if self.params[0] < 0 or any(p < low for p in self.params) or \
                (self.kind in ("wedge", "simplex") and self.params[0] < 1):
            raise ValueError(f"bad parameters {self.params} for {self.kind}")
        if not self.vars:
            default = {
                "interval": ("x",), "spinor": ("x",),
                "triangle": ("x", "y"), "rectangle": ("x", "y"),
                "wedge": ("x", "y"),
                "simplex": tuple(f"x{i}" for i in range(1, self.params[0] + 1)),
            }[self.kind]
            object.__setattr__(self, "vars", default)
        if self.kind == "simplex" and len(self.vars) != self.params[0]:
            raise ValueError("simplex variable list must have k entries")
        if dimension(self) != len(self.labels()):
            raise DimensionMismatchError(str(self))

    # -- enumeration -----------------------------------------------------

    def labels(self) -> List[Label]:
        """Graded-lex basis labels, even sector before the odd one."""
        k = self.kind
        p = self.params
        if k == "interval":
            return [((i,), 0) for i in range(p[0] + 1)]
        if k == "spinor":
            ev = [((i,), 0) for i in range(p[0] + 1)]
            od = [((i,), 1) for i in range(p[1] + 1)]
            return ev + od
        if k == "rectangle":
            exps = [(i, j) for i in range(p[0] + 1) for j in range(p[1] + 1)]
        elif k == "triangle":
            exps = [(i, j) for i in range(p[0] + 1) for j in range(p[0] + 1 - i)]
        elif k == "wedge":
            r, n = p
            exps = [(i, j) for i in range(n + 1) for j in range((n - i) // r + 1)]
        else:  # simplex
            kk, n = p
            exps: List[Tuple[int, ...]] = [()]
            for _ in range(kk):
                exps = [e + (j,) for e in exps for j in range(n + 1 - sum(e))]
        exps.sort(key=lambda e: (sum(e), tuple(reversed(e))))
        return [(e, 0) for e in exps]

    def is_spinor(self) -> bool:
        return self.kind == "spinor"

    def __str__(self) -> str:
        return f"{self.kind}:{','.join(map(str, self.params))}"


def dimension(s: SpaceSpec) -> int:
    """Closed-form dimension; raises when the enumeration disagrees."""
    k, p = s.kind, s.params
    if k == "interval":
        return p[0] + 1
    if k == "spinor":
        return p[0] + p[1] + 2
    if k == "triangle":
        n = p[0]
        return (n + 1) * (n + 2) // 2
    if k == "rectangle":
        return (p[0] + 1) * (p[1] + 1)
    if k == "simplex":
        from math import comb
        return comb(p[0] + p[1], p[0])
    # wedge: enumeration is authoritative; the quadratic closed form is
    # asserted for the parameter ranges whose alpha constant is tabulated
    r, n = p
    count = sum((n - i) // r + 1 for i in range(n + 1))
    alpha = _wedge_alpha(r, n)
    if alpha is not None:
        formula = Fraction(n * n + (r + 2) * n + alpha, 2 * r)
        if formula != count:
            raise DimensionMismatchError(
                f"wedge({r},{n}): enumerated {count}, closed form {formula}")
    return count


def _wedge_alpha(r: int, n: int) -> int | None:
    if r == 1:
        return 2
    if r == 2:
        return 3 if n % 2 else 4
    if r == 3:
        return 4 if (n + 1) % 3 == 0 else 6
    if r == 4:
        if (n + 1) % 4 == 0:
            return 5
        if (n + 3) % 4 == 0:
            return 9
        return 8
    return None


def enumerate_basis(s: SpaceSpec, ctx: OpContext) -> List[Poly]:
    """Basis monomials as polynomials over the operator context."""
    names = ctx.all_vars
    out = []
    for exp, odd in s.labels():
        e = [0] * len(names)
        for v, k in zip(s.vars, exp):
            e[names.index(v)] = k
        if odd:
            if not ctx.theta:
                raise ValueError("odd basis element in an even-only context")
            e[names.index("theta")] = 1
        out.append(Poly.monomial(names, tuple(e), 1, ctx.nil))
    return out


@dataclass
class Escape:
    source: Label
    monomial: Tuple[int, ...]
    coeff: Scalar


@dataclass
class ActionResult:
    space: SpaceSpec
    labels: List[Label]
    matrix: List[List[Scalar]] | None      # rows/cols indexed by labels
    escapes: List[Escape] = field(default_factory=list)

    @property
    def preserved(self) -> bool:
        return self.matrix is not None


def _decompose(image: Poly, s: SpaceSpec, ctx: OpContext,
               index: Dict[Label, int]) -> Tuple[Dict[int, Scalar], List[Tuple[Tuple[int, ...], Scalar]]]:
    names = ctx.all_vars
    positions = [names.index(v) for v in s.vars]
    theta_pos = names.index("theta") if ctx.theta else None
    inside: Dict[int, Scalar] = {}
    outside: List[Tuple[Tuple[int, ...], Scalar]] = []
    for e, c in image.terms.items():
        exp = tuple(e[p] for p in positions)
        odd = e[theta_pos] if theta_pos is not None else 0
        if sum(e) != sum(exp) + odd:
            outside.append((e, c))        # image uses variables outside the space
            continue
        key = (exp, odd)
        if key in index:
            inside[index[key]] = c
        else:
            outside.append((e, c))
    return inside, outside


def action_matrix(op: Union[LinOperator, MatrixOperator], s: SpaceSpec) -> ActionResult:
    if isinstance(op, MatrixOperator):
        return _matrix_action(op, s)
    ctx = op.ctx
    labels = s.labels()
    index = {lab: i for i, lab in enumerate(labels)}
    basis = enumerate_basis(s, ctx)
    dim = len(labels)
    cols: List[Dict[int, Scalar]] = []
    escapes: List[Escape] = []
    for lab, mono in zip(labels, basis):
        image = op.apply_poly(mono)
        inside, outside = _decompose(image, s, ctx, index)
        cols.append(inside)
        escapes.extend(Escape(lab, e, c) for e, c in outside)
    if escapes:
        return ActionResult(s, labels, None, escapes)
    matrix = [[cols[j].get(i, ZERO) for j in range(dim)] for i in range(dim)]
    return ActionResult(s, labels, matrix)


def _matrix_action(op: MatrixOperator, s: SpaceSpec) -> ActionResult:
    """Action on a spinor space in two-component form (upper = odd sector)."""
    if not s.is_spinor():
        raise ValueError("matrix operators act on spinor spaces")
    ctx = op.ctx
    labels = s.labels()
    index = {lab: i for i, lab in enumerate(labels)}
    zero = Poly.zero(ctx.all_vars)
    xi = ctx.all_vars.index(s.vars[0])
    dim = len(labels)
    cols: List[Dict[int, Scalar]] = []
    escapes: List[Escape] = []
    nmax = {0: s.params[0], 1: s.params[1]}
    for lab in labels:
        (exp,), odd = lab
        mono = Poly.monomial(ctx.all_vars, tuple(exp if j == xi else 0
                                                 for j in range(len(ctx.all_vars))))
        spinor = (mono, zero) if odd else (zero, mono)
        up, lo = op.apply(spinor)
        inside: Dict[int, Scalar] = {}
        for part, sector in ((up, 1), (lo, 0)):
            for e, c in part.terms.items():
                key = ((e[xi],), sector)
                if sum(e) == e[xi] and e[xi] <= nmax[sector]:
                    inside[index[key]] = c
                else:
                    escapes.append(Escape(lab, e + (sector,), c))
        cols.append(inside)
    if escapes:
        return ActionResult(s, labels, None, escapes)
    matrix = [[cols[j].get(i, ZERO) for j in range(dim)] for i in range(dim)]
    return ActionResult(s, labels, matrix)


def preserves(op: Union[LinOperator, MatrixOperator], s: SpaceSpec) -> bool:
    return action_matrix(op, s).preserved


def flag_preserves(op: Union[LinOperator, MatrixOperator],
                   flag: Sequence[SpaceSpec]) -> bool:
    dims = [dimension(s) for s in flag]
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("flag members must strictly increase in dimension")
    return all(preserves(op, s) for s in flag)


def parse_space(text: str) -> SpaceSpec:
    """Parse the command-line syntax: int:4, spin:3,2, tri:3, rect:2,3,
    wedge:2,4, simplex:3,2."""
    head, _, rest = text.partition(":")
    kinds = {"int": "interval", "spin": "spinor", "tri": "triangle",
             "rect": "rectangle", "wedge": "wedge", "simplex": "simplex"}
    if head not in kinds:
        raise ValueError(f"unknown space syntax {text!r}")
    params = tuple(int(p) for p in rest.split(",") if p != "")
    return SpaceSpec(kinds[head], params)
