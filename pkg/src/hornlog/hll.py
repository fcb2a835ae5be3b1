"""The zoned sequent calculus for Horn sequents, its checker, and the
compiler from checked derivations to tree-like Horn programs.

Nine rules: two axioms (identity and a single implication step), a regrouping
no-op, a frame rule that tensors the same product onto input and goal, the
two-premise choice rule, the three bang rules, and cut.  Proof nodes store
their full conclusion sequent so every inference is checked locally against
its schema, giving precise failure positions.

The compiler runs by structural recursion: axioms become one-vertex or
one-edge programs, the choice rule becomes a strong fork, cut becomes
composition, and everything else passes the premise program through.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .programs import HornProgram, compose, single_edge, single_vertex, strong_fork
from .syntax import (
    Frame,
    HornFormula,
    HornSequent,
    OplusImplication,
    PlainImplication,
    SimpleProduct,
    formula_text,
    parse_formula,
    parse_product,
    parse_sequent,
    product_equiv,
    sequent_text,
)


class HllRule(Enum):
    I = "I"
    LTENSOR = "LTENSOR"
    H = "H"
    M = "M"
    OPLUS_H = "OPLUS_H"
    LBANG = "LBANG"
    WBANG = "WBANG"
    CBANG = "CBANG"
    CUT = "CUT"


_ARITY = {
    HllRule.I: 0,
    HllRule.H: 0,
    HllRule.LTENSOR: 1,
    HllRule.M: 1,
    HllRule.LBANG: 1,
    HllRule.WBANG: 1,
    HllRule.CBANG: 1,
    HllRule.OPLUS_H: 2,
    HllRule.CUT: 2,
}


@dataclass(frozen=True)
class HllProof:
    rule: HllRule
    conclusion: HornSequent
    premises: tuple["HllProof", ...] = ()
    principal: HornFormula | None = None  # OPLUS_H, LBANG, WBANG, CBANG
    frame: SimpleProduct | Frame | None = None  # M (product), OPLUS_H (frame)

    def cut_product(self) -> SimpleProduct:
        if self.rule is not HllRule.CUT:
            raise ValueError("not a cut node")
        return self.premises[0].conclusion.goal


@dataclass(frozen=True)
class CheckFailure:
    path: tuple[int, ...]  # premise indices from the root
    rule: str
    reason: str

    def __str__(self) -> str:
        where = "root" if not self.path else ".".join(str(i) for i in self.path)
        return f"{self.rule} at {where}: {self.reason}"


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failure: CheckFailure | None = None

    def __str__(self) -> str:
        return "valid" if self.ok else str(self.failure)


def _zone_minus(zone: tuple[HornFormula, ...], f: HornFormula) -> tuple[HornFormula, ...] | None:
    out = list(zone)
    try:
        out.remove(f)
    except ValueError:
        return None
    return tuple(out)


def _zone_plus(zone: tuple[HornFormula, ...], f: HornFormula) -> tuple[HornFormula, ...]:
    return tuple(sorted(zone + (f,), key=formula_text))


def _merge(z1: tuple[HornFormula, ...], z2: tuple[HornFormula, ...]) -> tuple[HornFormula, ...]:
    return tuple(sorted(z1 + z2, key=formula_text))


def _check_node(node: HllProof) -> str | None:
    """None when the node instantiates its rule schema; otherwise the mismatch."""
    c = node.conclusion
    rule = node.rule
    if len(node.premises) != _ARITY[rule]:
        return f"{rule.value} takes {_ARITY[rule]} premises, got {len(node.premises)}"

    if rule is HllRule.I:
        if c.linear or c.banged:
            return "identity sequent must have empty zones"
        if not product_equiv(c.input, c.goal):
            return "identity requires input = goal"
        return None

    if rule is HllRule.H:
        if c.banged or len(c.linear) != 1:
            return "axiom needs exactly one linear formula and no banged zone"
        f = c.linear[0]
        if not isinstance(f, PlainImplication):
            return "axiom formula must be a plain implication"
        if not product_equiv(f.antecedent, c.input):
            return "axiom input must be the implication's antecedent"
        if not product_equiv(f.consequent, c.goal):
            return "axiom goal must be the implication's consequent"
        return None

    if rule is HllRule.LTENSOR:
        p = node.premises[0].conclusion
        if not product_equiv(p.input, c.input):
            return "regrouping must keep the input multiset"
        if p.linear != c.linear or p.banged != c.banged or p.goal != c.goal:
            return "regrouping must keep zones and goal"
        return None

    if rule is HllRule.M:
        p = node.premises[0].conclusion
        v = node.frame
        if not isinstance(v, SimpleProduct):
            return "frame rule needs a non-empty frame product"
        if c.input != p.input.tensor(v):
            return f"conclusion input must be premise input tensored with {v}"
        if c.goal != p.goal.tensor(v):
            return f"conclusion goal must be premise goal tensored with {v}"
        if p.linear != c.linear or p.banged != c.banged:
            return "frame rule must keep both zones"
        return None

    if rule is HllRule.OPLUS_H:
        f = node.principal
        if not isinstance(f, OplusImplication):
            return "choice rule needs a choice implication as principal"
        v = node.frame if node.frame is not None else Frame()
        if isinstance(v, SimpleProduct):
            v = Frame(v.entries)
        gamma = _zone_minus(c.linear, f)
        if gamma is None:
            return f"principal {formula_text(f)} not in the linear zone"
        if c.input != f.antecedent.tensor(v):
            return f"conclusion input must be the antecedent tensored with frame {v}"
        p1, p2 = (p.conclusion for p in node.premises)
        for p in (p1, p2):
            if p.linear != gamma:
                return "premise linear zones must be the conclusion's minus the principal"
            if p.banged != c.banged:
                return "premise banged zones must match the conclusion"
            if p.goal != c.goal:
                return "premise goals must match the conclusion"
        left, right = f.left.tensor(v), f.right.tensor(v)
        if not (
            (p1.input == left and p2.input == right)
            or (p1.input == right and p2.input == left)
        ):
            return "premise inputs must be the two consequents tensored with the frame"
        return None

    if rule is HllRule.LBANG:
        p = node.premises[0].conclusion
        a = node.principal
        if a is None:
            return "bang rule needs its principal formula"
        banged_rest = _zone_minus(c.banged, a)
        if banged_rest is None or banged_rest != p.banged:
            return "conclusion banged zone must be the premise's plus the principal"
        linear_rest = _zone_minus(p.linear, a)
        if linear_rest is None or linear_rest != c.linear:
            return "premise must carry the principal linearly"
        if p.input != c.input or p.goal != c.goal:
            return "input and goal must be unchanged"
        return None

    if rule is HllRule.WBANG:
        p = node.premises[0].conclusion
        a = node.principal
        if a is None:
            return "weakening needs its principal formula"
        if _zone_minus(c.banged, a) != p.banged:
            return "conclusion banged zone must be the premise's plus the principal"
        if p.linear != c.linear or p.input != c.input or p.goal != c.goal:
            return "everything but the banged zone must be unchanged"
        return None

    if rule is HllRule.CBANG:
        p = node.premises[0].conclusion
        a = node.principal
        if a is None:
            return "contraction needs its principal formula"
        if a not in c.banged:
            return "principal must stay in the conclusion's banged zone"
        if p.banged != _zone_plus(c.banged, a):
            return "premise banged zone must be the conclusion's plus one principal copy"
        if p.linear != c.linear or p.input != c.input or p.goal != c.goal:
            return "everything but the banged zone must be unchanged"
        return None

    if rule is HllRule.CUT:
        p1, p2 = (p.conclusion for p in node.premises)
        if p2.input != p1.goal:
            return "second premise input must be the first premise's goal"
        if c.input != p1.input:
            return "conclusion input must be the first premise's input"
        if c.goal != p2.goal:
            return "conclusion goal must be the second premise's goal"
        if c.linear != _merge(p1.linear, p2.linear):
            return "conclusion linear zone must merge the premises'"
        if c.banged != _merge(p1.banged, p2.banged):
            return "conclusion banged zone must merge the premises'"
        return None

    raise AssertionError(rule)


def check_hll_proof(proof: HllProof) -> CheckResult:
    """Verify every node against its rule schema; report the first failure."""
    stack: list[tuple[HllProof, tuple[int, ...]]] = [(proof, ())]
    while stack:
        node, path = stack.pop()
        reason = _check_node(node)
        if reason is not None:
            return CheckResult(False, CheckFailure(path, node.rule.value, reason))
        stack.extend((p, path + (i,)) for i, p in enumerate(node.premises))
    return CheckResult(True)


def compile_hll_to_program(proof: HllProof) -> HornProgram:
    """Build the strong-solution witness a checked derivation describes."""
    result = check_hll_proof(proof)
    if not result.ok:
        raise ValueError(f"cannot compile an invalid proof: {result}")
    return _compile(proof)


def _compile(node: HllProof) -> HornProgram:
    rule = node.rule
    if rule is HllRule.I:
        return single_vertex()
    if rule is HllRule.H:
        f = node.conclusion.linear[0]
        assert isinstance(f, PlainImplication)
        return single_edge(f)
    if rule in (HllRule.LTENSOR, HllRule.M, HllRule.LBANG, HllRule.WBANG, HllRule.CBANG):
        return _compile(node.premises[0])
    if rule is HllRule.OPLUS_H:
        f = node.principal
        assert isinstance(f, OplusImplication)
        v = node.frame if node.frame is not None else Frame()
        if isinstance(v, SimpleProduct):
            v = Frame(v.entries)
        p1, p2 = node.premises
        y1 = _premise_consequent(f, v, p1.conclusion.input)
        y2 = _premise_consequent(f, v, p2.conclusion.input)
        return strong_fork(f.antecedent, y1, y2, _compile(p1), _compile(p2))
    if rule is HllRule.CUT:
        return compose(_compile(node.premises[0]), _compile(node.premises[1]))
    raise AssertionError(rule)


def _premise_consequent(f: OplusImplication, v: Frame, premise_input: SimpleProduct) -> SimpleProduct:
    for y in (f.left, f.right):
        if premise_input == y.tensor(v):
            return y
    raise AssertionError("checked choice node has an unmatched premise input")


def compiled_leaf_count(node: HllProof) -> int:
    """The leaf count the compiler must produce: forks add, cuts multiply."""
    rule = node.rule
    if rule in (HllRule.I, HllRule.H):
        return 1
    if rule is HllRule.OPLUS_H:
        return sum(compiled_leaf_count(p) for p in node.premises)
    if rule is HllRule.CUT:
        return compiled_leaf_count(node.premises[0]) * compiled_leaf_count(node.premises[1])
    return compiled_leaf_count(node.premises[0])


# --- Node builders (conclusions computed, for construction sites) -------------


def i_axiom(x: SimpleProduct) -> HllProof:
    return HllProof(HllRule.I, HornSequent(x, (), (), x))


def h_axiom(f: PlainImplication) -> HllProof:
    return HllProof(HllRule.H, HornSequent(f.antecedent, (f,), (), f.consequent))


def ltensor(premise: HllProof) -> HllProof:
    return HllProof(HllRule.LTENSOR, premise.conclusion, (premise,))


def frame_rule(premise: HllProof, v: SimpleProduct) -> HllProof:
    c = premise.conclusion
    conclusion = HornSequent(c.input.tensor(v), c.linear, c.banged, c.goal.tensor(v))
    return HllProof(HllRule.M, conclusion, (premise,), frame=v)


def oplus_h(premise1: HllProof, premise2: HllProof, f: OplusImplication, v: Frame) -> HllProof:
    c1 = premise1.conclusion
    conclusion = HornSequent(
        f.antecedent.tensor(v), _zone_plus(c1.linear, f), c1.banged, c1.goal
    )
    return HllProof(HllRule.OPLUS_H, conclusion, (premise1, premise2), principal=f, frame=v)


def lbang(premise: HllProof, a: HornFormula) -> HllProof:
    c = premise.conclusion
    linear = _zone_minus(c.linear, a)
    if linear is None:
        raise ValueError(f"premise does not carry {formula_text(a)} linearly")
    conclusion = HornSequent(c.input, linear, _zone_plus(c.banged, a), c.goal)
    return HllProof(HllRule.LBANG, conclusion, (premise,), principal=a)


def wbang(premise: HllProof, a: HornFormula) -> HllProof:
    c = premise.conclusion
    conclusion = HornSequent(c.input, c.linear, _zone_plus(c.banged, a), c.goal)
    return HllProof(HllRule.WBANG, conclusion, (premise,), principal=a)


def cbang(premise: HllProof, a: HornFormula) -> HllProof:
    c = premise.conclusion
    banged = _zone_minus(c.banged, a)
    if banged is None or a not in banged:
        raise ValueError(f"premise needs two banged copies of {formula_text(a)}")
    conclusion = HornSequent(c.input, c.linear, banged, c.goal)
    return HllProof(HllRule.CBANG, conclusion, (premise,), principal=a)


def cut(premise1: HllProof, premise2: HllProof) -> HllProof:
    c1, c2 = premise1.conclusion, premise2.conclusion
    if c2.input != c1.goal:
        raise ValueError("cut premises do not chain")
    conclusion = HornSequent(
        c1.input, _merge(c1.linear, c2.linear), _merge(c1.banged, c2.banged), c2.goal
    )
    return HllProof(HllRule.CUT, conclusion, (premise1, premise2))


# --- Serialization -------------------------------------------------------------


def hll_proof_to_json(proof: HllProof) -> str:
    return json.dumps(_to_data(proof), indent=2) + "\n"


def _to_data(node: HllProof) -> dict:
    data: dict = {"rule": node.rule.value, "conclusion": sequent_text(node.conclusion)}
    if node.principal is not None:
        data["principal"] = formula_text(node.principal)
    if node.frame is not None and not (isinstance(node.frame, Frame) and node.frame.is_empty):
        frame = node.frame
        data["frame"] = str(frame.to_product() if isinstance(frame, Frame) else frame)
    if node.premises:
        data["premises"] = [_to_data(p) for p in node.premises]
    return data


def hll_proof_from_json(text: str) -> HllProof:
    return _from_data(json.loads(text))


def _from_data(data: dict) -> HllProof:
    rule = HllRule(data["rule"])
    conclusion = parse_sequent(data["conclusion"])
    premises = tuple(_from_data(p) for p in data.get("premises", []))
    principal = parse_formula(data["principal"]) if "principal" in data else None
    frame: SimpleProduct | Frame | None = None
    if "frame" in data:
        frame = parse_product(data["frame"])
    elif rule is HllRule.OPLUS_H:
        frame = Frame()
    if rule is HllRule.OPLUS_H and isinstance(frame, SimpleProduct):
        frame = Frame(frame.entries)
    return HllProof(rule, conclusion, premises, principal=principal, frame=frame)
