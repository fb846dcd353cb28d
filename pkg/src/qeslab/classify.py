"""Grading classification and the double-preservation case catalogue.

The second-order operator families are parameterized by named coefficients
(one per ordered generator pair, plus linear and constant terms).  The case
catalogue (data/cases.json) stores each rule's linear predicate and concluded
invariant spaces as data; match_cases instantiates free integer parameters,
and verify_case samples random satisfying assignments and confirms every
concluded space through the action-matrix oracle.

The J-sign note from the enveloping module applies here too: the catalogue's
coefficients multiply products of generators in the printed order, with the
superalgebra's central generator carrying the body-convention sign.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .enveloping import J_BODY_SIGN, grading, word_is_exact
from .linalg import nullspace, rank
from .operators import LinOperator, compose
from .reps import GeneratorSet, RepSpec, make_rep
from .scalars import ONE, Scalar, ZERO, nhat, qnumber
from .spaces import SpaceSpec, action_matrix, preserves

# --------------------------------------------------------------------------
# coefficient bases: name -> generator word (composed in the printed order)

OSP_WORDS: Dict[str, Tuple[str, ...]] = {
    "c_++": ("T+", "T+"), "c_+0": ("T+", "T0"), "c_+-": ("T+", "T-"),
    "c_0-": ("T0", "T-"), "c_--": ("T-", "T-"),
    "c_+J": ("T+", "J"), "c_0J": ("T0", "J"), "c_-J": ("T-", "J"),
    "c_+1b": ("T+", "Qb1"), "c_+2": ("T+", "Q2"), "c_+1": ("T+", "Q1"),
    "c_+2b": ("T+", "Qb2"), "c_01": ("T0", "Q1"), "c_02b": ("T0", "Qb2"),
    "c_-1": ("T-", "Q1"), "c_-2b": ("T-", "Qb2"),
    "c_+": ("T+",), "c_0": ("T0",), "c_-": ("T-",), "c_J": ("J",),
    "c_1": ("Q1",), "c_2": ("Q2",), "c_1b": ("Qb1",), "c_2b": ("Qb2",),
    "c": (),
}

SL2_WORDS: Dict[str, Tuple[str, ...]] = {
    "c_++": ("J+", "J+"), "c_+0": ("J+", "J0"), "c_+-": ("J+", "J-"),
    "c_0-": ("J0", "J-"), "c_--": ("J-", "J-"),
    "c_+": ("J+",), "c_0": ("J0",), "c_-": ("J-",), "c": (),
}


def coefficient_words(spec: RepSpec) -> Dict[str, Tuple[str, ...]]:
    """The named second-order coefficient basis of one algebra family."""
    if spec.algebra == "osp22":
        return dict(OSP_WORDS)
    if spec.algebra in ("sl2", "sl2q"):
        return dict(SL2_WORDS)
    if spec.algebra == "sl3":
        tags = ["13", "12", "23", "32", "d", "td", "31", "21"]
        out: Dict[str, Tuple[str, ...]] = {}
        for i, a in enumerate(tags):
            for b in tags[i:]:
                out[f"c_{a}.{b}"] = (f"J{a}", f"J{b}")
        for a in tags:
            out[f"c_{a}"] = (f"J{a}",)
        out["c"] = ()
        return out
    if spec.algebra == "sl2xsl2":
        tags = ["+", "0", "-"]
        out = {}
        for i, a in enumerate(tags):
            for b in tags[i:]:
                out[f"c_xx_{a}{b}"] = (f"Jx{a}", f"Jx{b}")
                out[f"c_yy_{a}{b}"] = (f"Jy{a}", f"Jy{b}")
        for a in tags:
            for b in tags:
                out[f"c_xy_{a}{b}"] = (f"Jx{a}", f"Jy{b}")
        for a in tags:
            out[f"c_x_{a}"] = (f"Jx{a}",)
            out[f"c_y_{a}"] = (f"Jy{a}",)
        out["c"] = ()
        return out
    if spec.algebra == "gl2_semi":
        ids = list(range(1, 6 + spec.r))
        out = {}
        for i in ids:
            for j in ids:
                if i <= j:
                    out[f"c_{i}.{j}"] = (f"J{i}", f"J{j}")
        for i in ids:
            out[f"c_{i}"] = (f"J{i}",)
        out["c"] = ()
        return out
    raise ValueError(f"no coefficient catalogue for {spec.algebra}")


@dataclass
class CoeffAssignment:
    spec: RepSpec
    values: Dict[str, Scalar]

    def __post_init__(self):
        names = coefficient_words(self.spec)
        unknown = set(self.values) - set(names)
        if unknown:
            raise KeyError(f"unknown coefficient names: {sorted(unknown)}")
        self.values = {k: Scalar.of(v) for k, v in self.values.items()
                       if not Scalar.of(v).is_zero()}

    def get(self, name: str) -> Scalar:
        return self.values.get(name, ZERO)

    def operator(self, gens: GeneratorSet | None = None) -> LinOperator:
        gens = gens or make_rep(self.spec)
        flip = J_BODY_SIGN.get(self.spec.algebra)
        words = coefficient_words(self.spec)
        out = LinOperator.zero(gens.ctx)
        for name, c in self.values.items():
            word = words[name]
            if flip:
                c = c * Scalar((-1) ** sum(1 for g in word if g == flip))
            out = out + gens.word_op(word).scale(c)
        return out

    def env_words(self) -> Dict[Tuple[str, ...], Scalar]:
        words = coefficient_words(self.spec)
        return {words[name]: c for name, c in self.values.items()}

    def to_json(self) -> dict:
        return {name: str(c) for name, c in sorted(self.values.items())}

    @classmethod
    def from_json(cls, spec: RepSpec, data: Dict[str, str]) -> "CoeffAssignment":
        return cls(spec, {k: Scalar.parse(v) for k, v in data.items()})


# --------------------------------------------------------------------------
# grading classification

@dataclass
class ClassReport:
    kind: str                              # quasi | exact | neither-details
    positive_words: List[str]
    subkinds: Dict[str, bool] = field(default_factory=dict)
    matched_rules: List[dict] = field(default_factory=list)
    confirmed_spaces: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"kind": self.kind, "positive_words": self.positive_words,
                "subkinds": self.subkinds, "matched_rules": self.matched_rules,
                "confirmed_spaces": self.confirmed_spaces}


def classify_grading(assignment: CoeffAssignment, gens: GeneratorSet | None = None) -> ClassReport:
    """Exact-solvability verdict word by word, per the family's grading rule."""
    spec = assignment.spec
    gens = gens or make_rep(spec)
    positive: List[str] = []
    all_exact = True
    subkind_names = {"sl2xsl2": ("x", "y", "total")}.get(spec.algebra, ())
    sub: Dict[str, bool] = {v: True for v in subkind_names}
    zero_total = True
    zero_vector = True
    for word_names, c in assignment.env_words().items():
        word = tuple((nm, word_names.count(nm)) for nm in gens.names
                     if nm in word_names)
        gx, gy, tot = grading(word, gens)
        if tot != 0:
            zero_total = False
        if (gx, gy) != (0, 0):
            zero_vector = False
        if not word_is_exact(word, gens):
            all_exact = False
            if tot > 0:
                positive.append("*".join(word_names) if word_names else "1")
        for v in subkind_names:
            if not word_is_exact(word, gens, v):
                sub[v] = False
    kind = "exact" if all_exact else "quasi"
    report = ClassReport(kind, positive, sub)
    if spec.algebra == "sl3":
        report.subkinds["homogeneous_flag"] = zero_total
        report.subkinds["preserves_any_space"] = zero_vector
    if spec.algebra == "sl2xsl2":
        report.subkinds = {"type_2x": sub["x"], "type_2y": sub["y"],
                           "first_type_attached": sub["total"]}
        report.kind = "exact" if (sub["x"] or sub["y"]) else "quasi"
    return report


# --------------------------------------------------------------------------
# catalogue loading and predicate evaluation

def load_catalogue() -> dict:
    with resources.files("qeslab.data").joinpath("cases.json").open() as fh:
        return json.load(fh)


@dataclass
class CaseRule:
    algebra: str
    id: str
    free: List[str]
    free_max: Dict[str, dict]
    requires_zero: List[str]
    requires_nonzero: List[str]
    equations: List[dict]                  # normalized: {forall|None, terms}
    conclusions: List[dict]
    noninteger_solve: Optional[dict] = None
    as_printed: bool = True
    note: str = ""

    @classmethod
    def from_json(cls, algebra: str, data: dict) -> "CaseRule":
        eqs = []
        for eq in data.get("equations", []):
            if isinstance(eq, dict):
                eqs.append({"forall": eq.get("forall"), "terms": eq["terms"]})
            else:
                eqs.append({"forall": None, "terms": eq})
        return cls(algebra, data["id"], data.get("free", []),
                   data.get("free_max", {}), data.get("requires_zero", []),
                   data.get("requires_nonzero", []), eqs,
                   data["conclusions"], data.get("noninteger_solve"),
                   data.get("as_printed", True), data.get("note", ""))


def rules_for(spec: RepSpec) -> List[CaseRule]:
    cat = load_catalogue()["catalogues"].get(spec.algebra, [])
    out = []
    for data in cat:
        data = json.loads(json.dumps(data))   # deep copy
        if spec.algebra == "gl2_semi":
            data = json.loads(json.dumps(data).replace("c_4.R", f"c_4.{5 + spec.r}"))
        out.append(CaseRule.from_json(spec.algebra, data))
    return out


def _affine(expr: Dict[str, str], env: Dict[str, Scalar]) -> Scalar:
    out = ZERO
    for token, weight in expr.items():
        w = Scalar(Fraction(weight))
        out = out + w * env[token]
    return out


def _param_env(spec: RepSpec, params: Dict[str, object],
               index: Optional[Tuple[str, int]] = None) -> Dict[str, Scalar]:
    env: Dict[str, Scalar] = {"1": ONE, "r": Scalar(spec.r)}
    for key in ("n", "m", "k", "N"):
        if key in params:
            env[key] = Scalar.of(params[key])
    if "n" in params:
        env["n/r"] = Scalar.of(params["n"]) / Scalar(spec.r)
    if index is not None:
        name, val = index
        env[name] = Scalar(val)
        env[f"{name}*r"] = Scalar(val * spec.r)
    if spec.algebra == "sl2q" and "m" in params:
        mm = params["m"]
        if isinstance(mm, Scalar):
            mm = int(mm.re)
        env["q_m"] = qnumber(int(mm), spec.q)
        env["q_nhat"] = nhat(int(Scalar.of(params["n"]).re), spec.q)
    return env


def _equation_rows(rule: CaseRule, spec: RepSpec, params: Dict[str, object],
                   names: Sequence[str]) -> List[List[Scalar]]:
    """Instantiated linear forms (one row per scalar equation) over names."""
    rows = []
    idx = {nm: i for i, nm in enumerate(names)}
    for eq in rule.equations:
        if eq["forall"] is None:
            instances = [None]
        else:
            last_expr = eq["forall"]["last"]
            env0 = _param_env(spec, params)
            if "N_div_r" in last_expr:
                last = int(Scalar.of(params["N"]).re) // spec.r
                last = last * Fraction(last_expr["N_div_r"])
            else:
                last = _affine(last_expr, env0).re
            instances = [(eq["forall"]["index"], j) for j in range(int(last) + 1)]
        for inst in instances:
            env = _param_env(spec, params, inst)
            row = [ZERO] * len(names)
            for cname, expr in eq["terms"]:
                row[idx[cname]] = row[idx[cname]] + _affine(expr, env)
            rows.append(row)
    for cname in rule.requires_zero:
        row = [ZERO] * len(names)
        row[idx[cname]] = ONE
        rows.append(row)
    return rows


def _space_from_conclusion(con: dict, spec: RepSpec, params: Dict[str, object],
                           extra: Dict[str, int] | None = None) -> Optional[SpaceSpec]:
    env = _param_env(spec, params)
    for key, val in (extra or {}).items():
        env[key] = Scalar(val)
    vals = []
    for p_expr in con["p"]:
        v = _affine(p_expr, env).re
        if v.denominator != 1:
            return None
        vals.append(int(v))
    kind = con.get("family", con["kind"])
    if kind == "interval" and vals[0] >= 0:
        return SpaceSpec("interval", (vals[0],))
    if kind == "spinor" and vals[0] >= 0 and vals[1] >= -1:
        return SpaceSpec("spinor", tuple(vals))
    if kind == "triangle" and vals[0] >= 0:
        return SpaceSpec("triangle", (vals[0],))
    if kind == "rectangle" and min(vals) >= 0:
        return SpaceSpec("rectangle", tuple(vals))
    if kind == "wedge" and vals[0] >= 1 and vals[1] >= 0:
        return SpaceSpec("wedge", tuple(vals))
    return None


def conclusion_spaces(rule: CaseRule, spec: RepSpec, params: Dict[str, object],
                      flag_prefix: int = 5) -> List[Tuple[str, object]]:
    """Concrete (description, SpaceSpec or check-tag) list for one instance."""
    out: List[Tuple[str, object]] = []
    for con in rule.conclusions:
        kind = con["kind"]
        if kind in ("interval", "spinor", "triangle", "rectangle", "wedge"):
            s = _space_from_conclusion(con, spec, params)
            if s is not None:
                out.append((str(s), s))
        elif kind == "flag":
            for i in range(flag_prefix):
                s = _space_from_conclusion(con, spec, params, {con["index"]: i})
                if s is not None:
                    out.append((f"{s} (flag member {i})", s))
        elif kind == "sequence":
            env = _param_env(spec, params)
            last = int(_affine(con["last"], env).re)
            for i in range(min(last, flag_prefix - 1) + 1):
                s = _space_from_conclusion(con, spec, params, {con["index"]: i})
                if s is not None:
                    out.append((f"{s} (sequence member {i})", s))
        elif kind == "flag2":
            i1, i2 = con["indices"]
            for a in range(flag_prefix - 2):
                for b in range(flag_prefix - 2 - a):
                    s = _space_from_conclusion(con, spec, params, {i1: a, i2: b})
                    if s is not None:
                        out.append((f"{s} (family member {a},{b})", s))
        elif kind == "spinor_unbounded_even":
            out.append((f"unbounded-even spinor rows M={con['p'][0]}", ("unbounded_even", con)))
    return out


def _check_unbounded_even(op: LinOperator, con: dict, spec: RepSpec,
                          params: Dict[str, object]) -> bool:
    """Images of spin(N, M) stay within spin(N+2, M): the odd row is capped
    while the even degree may grow freely."""
    env = _param_env(spec, params)
    M = int(_affine(con["p"][0], env).re)
    n0 = int(Scalar.of(params["n"]).re)
    for N in (max(n0, M) + 3, max(n0, M) + 5):
        small = SpaceSpec("spinor", (N, M))
        big = SpaceSpec("spinor", (N + 2, M))
        from .spaces import enumerate_basis
        idx = {lab: i for i, lab in enumerate(big.labels())}
        for mono in enumerate_basis(small, op.ctx):
            image = op.apply_poly(mono)
            from .spaces import _decompose
            _, outside = _decompose(image, big, op.ctx, idx)
            if outside:
                return False
    return True


def match_cases(assignment: CoeffAssignment, bound: int = 12) -> List[dict]:
    """Every catalogued rule whose predicate the assignment satisfies exactly,
    with all integer parameter instantiations up to the bound."""
    spec = assignment.spec
    names = sorted(coefficient_words(spec))
    vec = [assignment.get(nm) for nm in names]
    matches = []
    for rule in rules_for(spec):
        if any(not assignment.get(nm).is_zero() for nm in rule.requires_zero):
            continue
        if any(assignment.get(nm).is_zero() for nm in rule.requires_nonzero):
            continue
        if rule.noninteger_solve is not None:
            hit = _solve_noninteger(rule, assignment, names)
            if hit is not None:
                matches.append(hit)
            continue
        base = {"n": spec.n, "m": spec.m}
        combos: List[Dict[str, object]] = [dict(base)]
        for fp in rule.free:
            new = []
            for combo in combos:
                for v in range(bound + 1):
                    c2 = dict(combo)
                    c2[fp] = v
                    new.append(c2)
            combos = new
        for params in combos:
            if not _free_in_range(rule, spec, params):
                continue
            rows = _equation_rows(rule, spec, params, names)
            if all(_dot(row, vec).is_zero() for row in rows):
                matches.append({
                    "id": rule.id,
                    "params": {k: str(Scalar.of(v)) for k, v in params.items()
                               if k in rule.free},
                    "conclusions": [d for d, _ in
                                    conclusion_spaces(rule, spec, params)],
                })
    return matches


def _free_in_range(rule: CaseRule, spec: RepSpec, params: Dict[str, object]) -> bool:
    for fp, expr in rule.free_max.items():
        env = _param_env(spec, params)
        hi = _affine(expr, env).re
        if Fraction(params[fp]) > hi:
            return False
    return True


def _dot(row: Sequence[Scalar], vec: Sequence[Scalar]) -> Scalar:
    out = ZERO
    for a, b in zip(row, vec):
        if not a.is_zero() and not b.is_zero():
            out = out + a * b
    return out


def _solve_noninteger(rule: CaseRule, assignment: CoeffAssignment,
                      names: Sequence[str]) -> Optional[dict]:
    """Free parameter determined by one equation; fires when non-integer."""
    spec = assignment.spec
    var = rule.noninteger_solve["var"]
    terms = rule.noninteger_solve["equation"]
    base = {"n": spec.n, "m": spec.m}
    # write the equation as A + B*var = 0 over the assignment's coefficients
    env0 = _param_env(spec, dict(base, **{var: 0}))
    env1 = _param_env(spec, dict(base, **{var: 1}))
    a = b = ZERO
    for cname, expr in terms:
        c = assignment.get(cname)
        v0 = _affine(expr, env0)
        v1 = _affine(expr, env1)
        a = a + v0 * c
        b = b + (v1 - v0) * c
    if b.is_zero():
        return None
    val = -a / b
    if not val.is_rational() or val.re.denominator == 1:
        return None     # integer solutions belong to the sibling rule
    params = dict(base, **{var: val})
    return {"id": rule.id, "params": {var: str(val)},
            "conclusions": [d for d, _ in conclusion_spaces(rule, spec, params)]}


# --------------------------------------------------------------------------
# sampling and the oracle sweep

def sample_assignment(rule: CaseRule, spec: RepSpec, params: Dict[str, object],
                      rng: random.Random) -> CoeffAssignment:
    """Random rational assignment satisfying the rule's instantiated predicate."""
    names = sorted(coefficient_words(spec))
    rows = _equation_rows(rule, spec, params, names)
    basis = nullspace(rows, ncols=len(names))
    for _ in range(200):
        coeffs: Dict[str, Scalar] = {nm: ZERO for nm in names}
        for v in basis:
            w = Scalar(Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])))
            if w.is_zero():
                continue
            for nm, c in zip(names, v):
                coeffs[nm] = coeffs[nm] + w * c
        if all(not coeffs[nm].is_zero() for nm in rule.requires_nonzero):
            return CoeffAssignment(spec, coeffs)
    raise RuntimeError(f"could not sample a nondegenerate assignment for {rule.id}")


def verify_case(rule: CaseRule, spec: RepSpec, params: Dict[str, object],
                trials: int = 25, seed: int = 0, flag_prefix: int = 5) -> dict:
    """Sample satisfying assignments; confirm every concluded space."""
    gens = make_rep(spec)
    targets = conclusion_spaces(rule, spec, params, flag_prefix)
    counterexamples = []
    for t in range(trials):
        rng = random.Random((seed, rule.id, str(params), t).__str__())
        asg = sample_assignment(rule, spec, params, rng)
        op = asg.operator(gens)
        for desc, target in targets:
            if isinstance(target, SpaceSpec):
                res = action_matrix(op, target)
                if not res.preserved:
                    esc = res.escapes[0]
                    counterexamples.append({
                        "trial": t, "space": desc,
                        "witness": f"{esc.source} -> {esc.monomial} "
                                   f"(coeff {esc.coeff})",
                        "assignment": asg.to_json()})
            else:
                _, con = target
                if not _check_unbounded_even(op, con, spec, params):
                    counterexamples.append({"trial": t, "space": desc,
                                            "witness": "odd-row overflow",
                                            "assignment": asg.to_json()})
    return {"rule": rule.id, "algebra": spec.algebra,
            "params": {k: str(Scalar.of(v)) for k, v in params.items()},
            "trials": trials, "targets": [d for d, _ in targets],
            "as_printed": rule.as_printed, "note": rule.note,
            "counterexamples": counterexamples,
            "ok": not counterexamples}


def constrained_param_count(rule: CaseRule, spec: RepSpec,
                            params: Dict[str, object]) -> int:
    """Exact dimension of the operator family cut out by a rule's predicate."""
    from .enveloping import flatten_ops
    gens = make_rep(spec)
    names = sorted(coefficient_words(spec))
    rows = _equation_rows(rule, spec, params, names)
    basis = nullspace(rows, ncols=len(names))
    ops = []
    for v in basis:
        asg = CoeffAssignment(spec, {nm: c for nm, c in zip(names, v)})
        ops.append(asg.operator(gens))
    r = rank(flatten_ops(ops))
    if spec.algebra == "sl2q":
        r += 1
    return r


def find_rule(spec: RepSpec, rule_id: str) -> CaseRule:
    for rule in rules_for(spec):
        if rule.id == rule_id:
            return rule
    raise KeyError(f"no rule {rule_id!r} for {spec.algebra}")
