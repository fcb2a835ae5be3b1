"""Cut-free derivations in the two-sided fragment, their normalizer, and the
translation into the zoned calculus.

Sequents here are a flat context multiset over a single product goal.  Context
members are products, implications (linear or banged), and choice products
``(Y1 + Y2)`` that exist only between the left-choice rule that expands them
and the implication-choice rule that introduces them.  Each choice product
carries an integer tag so the two rules pair by occurrence even when equal
formulas coexist.

``push_oplus_down`` commutes every left-choice inference downwards until it
sits immediately above the implication-choice inference that consumes its
principal.  Commuting past a context-sharing left-choice step needs the
standard invertibility transformation (``specialize``), which replaces a
tagged choice product by one of its components throughout a subproof.

``translate_ll_to_hll`` normalizes and then maps rule-for-rule into the zoned
calculus, reading a flat context as input-product/linear/banged zones.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Union

from . import hll
from .hll import HllProof
from .syntax import (
    Frame,
    FormatError,
    HornFormula,
    HornSequent,
    OplusImplication,
    PlainImplication,
    SimpleProduct,
    TokenStream,
    _parse_bare_product,
    _parse_formula_rest,
    _parse_operand,
    formula_text,
    parse_product,
    product_text,
    tensor_all,
)


class ProofStructureError(ValueError):
    """A proof object is malformed beyond schema mismatch (corrupt input)."""


# --- Context formulas --------------------------------------------------------


@dataclass(frozen=True)
class LlProduct:
    product: SimpleProduct

    def __str__(self) -> str:
        return product_text(self.product)


@dataclass(frozen=True)
class LlImp:
    formula: HornFormula

    def __str__(self) -> str:
        return formula_text(self.formula)


@dataclass(frozen=True)
class LlBang:
    # Payload is normally an implication; a banged product is representable
    # so the checker can reject it against the side condition.
    formula: Union[HornFormula, SimpleProduct]

    def __str__(self) -> str:
        inner = (
            product_text(self.formula)
            if isinstance(self.formula, SimpleProduct)
            else formula_text(self.formula)
        )
        return f"!({inner})"


@dataclass(frozen=True)
class LlOplusProduct:
    """A pending choice ``(Y1 + Y2)`` with its occurrence tag."""

    left: SimpleProduct
    right: SimpleProduct
    tag: int

    def __post_init__(self):
        if product_text(self.right) < product_text(self.left):
            first, second = self.right, self.left
            object.__setattr__(self, "left", first)
            object.__setattr__(self, "right", second)

    def component(self, side: int) -> SimpleProduct:
        if side not in (1, 2):
            raise ValueError("side must be 1 or 2")
        return self.left if side == 1 else self.right

    def __str__(self) -> str:
        return f"({product_text(self.left)} + {product_text(self.right)})#{self.tag}"


LlFormula = Union[LlProduct, LlImp, LlBang, LlOplusProduct]


def ll_formula_text(f: LlFormula) -> str:
    return str(f)


def _context_sorted(formulas) -> tuple[LlFormula, ...]:
    return tuple(sorted(formulas, key=ll_formula_text))


@dataclass(frozen=True)
class LlSequent:
    context: tuple[LlFormula, ...]
    goal: SimpleProduct

    def __post_init__(self):
        object.__setattr__(self, "context", _context_sorted(self.context))

    def __str__(self) -> str:
        return ll_sequent_text(self)

    def minus(self, f: LlFormula) -> tuple[LlFormula, ...] | None:
        out = list(self.context)
        try:
            out.remove(f)
        except ValueError:
            return None
        return tuple(out)

    def count(self, f: LlFormula) -> int:
        return sum(1 for g in self.context if g == f)


def _ctx_minus(context: tuple[LlFormula, ...], f: LlFormula) -> tuple[LlFormula, ...] | None:
    out = list(context)
    try:
        out.remove(f)
    except ValueError:
        return None
    return tuple(out)


class LlRule(Enum):
    I = "I"
    LTENSOR = "LTENSOR"
    RTENSOR = "RTENSOR"
    LIMP = "LIMP"
    LIMPOPLUS = "LIMPOPLUS"
    LOPLUS = "LOPLUS"
    LBANG = "LBANG"
    WBANG = "WBANG"
    CBANG = "CBANG"


_LL_ARITY = {
    LlRule.I: 0,
    LlRule.LTENSOR: 1,
    LlRule.LBANG: 1,
    LlRule.WBANG: 1,
    LlRule.CBANG: 1,
    LlRule.RTENSOR: 2,
    LlRule.LIMP: 2,
    LlRule.LIMPOPLUS: 2,
    LlRule.LOPLUS: 2,
}


@dataclass(frozen=True)
class LlProof:
    rule: LlRule
    conclusion: LlSequent
    premises: tuple["LlProof", ...] = ()
    principal: LlFormula | None = None
    # LTENSOR records how the principal product splits in the premise.
    split: tuple[SimpleProduct, SimpleProduct] | None = None


@dataclass(frozen=True)
class LlCheckFailure:
    path: tuple[int, ...]
    rule: str
    reason: str

    def __str__(self) -> str:
        where = "root" if not self.path else ".".join(str(i) for i in self.path)
        return f"{self.rule} at {where}: {self.reason}"


@dataclass(frozen=True)
class LlCheckResult:
    ok: bool
    failure: LlCheckFailure | None = None

    def __str__(self) -> str:
        return "valid" if self.ok else str(self.failure)


def _check_ll_node(node: LlProof) -> str | None:
    c = node.conclusion
    rule = node.rule
    if len(node.premises) != _LL_ARITY[rule]:
        return f"{rule.value} takes {_LL_ARITY[rule]} premises, got {len(node.premises)}"

    if rule is LlRule.I:
        if len(c.context) != 1 or not isinstance(c.context[0], LlProduct):
            return "identity context must be a single product"
        if c.context[0].product != c.goal:
            return "identity requires context product = goal"
        return None

    if rule is LlRule.LTENSOR:
        if not isinstance(node.principal, LlProduct) or node.split is None:
            return "product regrouping needs its principal product and split"
        x, y = node.split
        if x.tensor(y) != node.principal.product:
            return "split does not recombine to the principal product"
        rest = _ctx_minus(c.context, node.principal)
        if rest is None:
            return "principal product not in the conclusion context"
        p = node.premises[0].conclusion
        expected = _context_sorted(rest + (LlProduct(x), LlProduct(y)))
        if p.context != expected:
            return "premise context must split the principal product"
        if p.goal != c.goal:
            return "goal must be unchanged"
        return None

    if rule is LlRule.RTENSOR:
        p1, p2 = (p.conclusion for p in node.premises)
        if c.goal != p1.goal.tensor(p2.goal):
            return "goal must be the tensor of the premise goals"
        if c.context != _context_sorted(p1.context + p2.context):
            return "context must merge the premise contexts"
        return None

    if rule is LlRule.LIMP:
        f = node.principal
        if not isinstance(f, LlImp) or not isinstance(f.formula, PlainImplication):
            return "left implication needs a plain implication principal"
        imp = f.formula
        p1, p2 = (p.conclusion for p in node.premises)
        if p1.goal != imp.antecedent:
            return "first premise must prove the antecedent"
        consequent = LlProduct(imp.consequent)
        p2_rest = _ctx_minus(p2.context, consequent)
        if p2_rest is None:
            return "second premise context must carry the consequent product"
        if p2.goal != c.goal:
            return "goal must come from the second premise"
        expected = _context_sorted(p1.context + p2_rest + (f,))
        if c.context != expected:
            return "conclusion context must merge premises around the principal"
        return None

    if rule is LlRule.LIMPOPLUS:
        f = node.principal
        if not isinstance(f, LlImp) or not isinstance(f.formula, OplusImplication):
            return "implication-choice needs a choice implication principal"
        imp = f.formula
        p1, p2 = (p.conclusion for p in node.premises)
        if p1.goal != imp.antecedent:
            return "first premise must prove the antecedent"
        pending = [
            g
            for g in p2.context
            if isinstance(g, LlOplusProduct) and g.left == imp.left and g.right == imp.right
        ]
        if not pending:
            return "second premise context must carry the pending choice product"
        if p2.goal != c.goal:
            return "goal must come from the second premise"
        # Content-equal occurrences may coexist under different tags; the
        # conclusion determines which one was consumed.
        for occurrence in pending:
            expected = _context_sorted(p1.context + _ctx_minus(p2.context, occurrence) + (f,))
            if c.context == expected:
                return None
        return "conclusion context must merge premises around the principal"

    if rule is LlRule.LOPLUS:
        occ = node.principal
        if not isinstance(occ, LlOplusProduct):
            return "left choice needs a pending choice product principal"
        rest = _ctx_minus(c.context, occ)
        if rest is None:
            return "principal choice product not in the conclusion context"
        p1, p2 = (p.conclusion for p in node.premises)
        if p1.context != _context_sorted(rest + (LlProduct(occ.left),)):
            return "first premise context must expand to the left component"
        if p2.context != _context_sorted(rest + (LlProduct(occ.right),)):
            return "second premise context must expand to the right component"
        if p1.goal != c.goal or p2.goal != c.goal:
            return "premise goals must match the conclusion"
        return None

    if rule in (LlRule.LBANG, LlRule.WBANG, LlRule.CBANG):
        a = node.principal
        if not isinstance(a, LlBang):
            return "bang rules need a banged principal"
        if isinstance(a.formula, SimpleProduct):
            return "only implications may be banged"
        p = node.premises[0].conclusion
        if p.goal != c.goal:
            return "goal must be unchanged"
        rest = _ctx_minus(c.context, a)
        if rest is None:
            return "banged principal not in the conclusion context"
        if rule is LlRule.LBANG:
            expected = _context_sorted(rest + (LlImp(a.formula),))
        elif rule is LlRule.WBANG:
            expected = _context_sorted(rest)
        else:  # CBANG
            expected = _context_sorted(rest + (a, a))
        if p.context != expected:
            return "premise context does not match the bang schema"
        return None

    raise AssertionError(rule)


def check_ll_proof(proof: LlProof) -> LlCheckResult:
    stack: list[tuple[LlProof, tuple[int, ...]]] = [(proof, ())]
    while stack:
        node, path = stack.pop()
        reason = _check_ll_node(node)
        if reason is not None:
            return LlCheckResult(False, LlCheckFailure(path, node.rule.value, reason))
        stack.extend((p, path + (i,)) for i, p in enumerate(node.premises))
    return LlCheckResult(True)


# --- Node builders ------------------------------------------------------------


def ll_i(x: SimpleProduct) -> LlProof:
    return LlProof(LlRule.I, LlSequent((LlProduct(x),), x))


def ll_ltensor(premise: LlProof, x: SimpleProduct, y: SimpleProduct) -> LlProof:
    principal = LlProduct(x.tensor(y))
    rest = _ctx_minus(premise.conclusion.context, LlProduct(x))
    if rest is None:
        raise ValueError(f"premise lacks product {x}")
    rest = _ctx_minus(rest, LlProduct(y))
    if rest is None:
        raise ValueError(f"premise lacks product {y}")
    conclusion = LlSequent(rest + (principal,), premise.conclusion.goal)
    return LlProof(LlRule.LTENSOR, conclusion, (premise,), principal=principal, split=(x, y))


def ll_rtensor(premise1: LlProof, premise2: LlProof) -> LlProof:
    c1, c2 = premise1.conclusion, premise2.conclusion
    conclusion = LlSequent(c1.context + c2.context, c1.goal.tensor(c2.goal))
    return LlProof(LlRule.RTENSOR, conclusion, (premise1, premise2))


def ll_limp(premise1: LlProof, premise2: LlProof, imp: PlainImplication) -> LlProof:
    c1, c2 = premise1.conclusion, premise2.conclusion
    if c1.goal != imp.antecedent:
        raise ValueError("first premise must prove the antecedent")
    rest = _ctx_minus(c2.context, LlProduct(imp.consequent))
    if rest is None:
        raise ValueError("second premise lacks the consequent product")
    conclusion = LlSequent(c1.context + rest + (LlImp(imp),), c2.goal)
    return LlProof(LlRule.LIMP, conclusion, (premise1, premise2), principal=LlImp(imp))


def ll_limpoplus(premise1: LlProof, premise2: LlProof, imp: OplusImplication, tag: int) -> LlProof:
    c1, c2 = premise1.conclusion, premise2.conclusion
    if c1.goal != imp.antecedent:
        raise ValueError("first premise must prove the antecedent")
    occurrence = LlOplusProduct(imp.left, imp.right, tag)
    rest = _ctx_minus(c2.context, occurrence)
    if rest is None:
        raise ValueError(f"second premise lacks the pending choice {occurrence}")
    conclusion = LlSequent(c1.context + rest + (LlImp(imp),), c2.goal)
    return LlProof(LlRule.LIMPOPLUS, conclusion, (premise1, premise2), principal=LlImp(imp))


def ll_loplus(premise1: LlProof, premise2: LlProof, occurrence: LlOplusProduct) -> LlProof:
    c1, c2 = premise1.conclusion, premise2.conclusion
    if c1.goal != c2.goal:
        raise ValueError("premise goals differ")
    rest1 = _ctx_minus(c1.context, LlProduct(occurrence.left))
    rest2 = _ctx_minus(c2.context, LlProduct(occurrence.right))
    if rest1 is None or rest2 is None or _context_sorted(rest1) != _context_sorted(rest2):
        raise ValueError("premise contexts do not share a frame for the choice")
    conclusion = LlSequent(rest1 + (occurrence,), c1.goal)
    return LlProof(LlRule.LOPLUS, conclusion, (premise1, premise2), principal=occurrence)


def ll_lbang(premise: LlProof, formula: HornFormula) -> LlProof:
    c = premise.conclusion
    rest = _ctx_minus(c.context, LlImp(formula))
    if rest is None:
        raise ValueError(f"premise lacks linear {formula_text(formula)}")
    banged = LlBang(formula)
    conclusion = LlSequent(rest + (banged,), c.goal)
    return LlProof(LlRule.LBANG, conclusion, (premise,), principal=banged)


def ll_wbang(premise: LlProof, formula: HornFormula) -> LlProof:
    banged = LlBang(formula)
    conclusion = LlSequent(premise.conclusion.context + (banged,), premise.conclusion.goal)
    return LlProof(LlRule.WBANG, conclusion, (premise,), principal=banged)


def ll_cbang(premise: LlProof, formula: HornFormula) -> LlProof:
    banged = LlBang(formula)
    c = premise.conclusion
    rest = _ctx_minus(c.context, banged)
    if rest is None or banged not in rest:
        raise ValueError(f"premise needs two banged copies of {formula_text(formula)}")
    conclusion = LlSequent(rest, c.goal)
    return LlProof(LlRule.CBANG, conclusion, (premise,), principal=banged)


_REBUILDERS = {
    LlRule.LTENSOR: lambda node, ps: ll_ltensor(ps[0], *node.split),
    LlRule.RTENSOR: lambda node, ps: ll_rtensor(ps[0], ps[1]),
    LlRule.LIMP: lambda node, ps: ll_limp(ps[0], ps[1], node.principal.formula),
    LlRule.LOPLUS: lambda node, ps: ll_loplus(ps[0], ps[1], node.principal),
    LlRule.LBANG: lambda node, ps: ll_lbang(ps[0], node.principal.formula),
    LlRule.WBANG: lambda node, ps: ll_wbang(ps[0], node.principal.formula),
    LlRule.CBANG: lambda node, ps: ll_cbang(ps[0], node.principal.formula),
}


def _rebuild(node: LlProof, premises: tuple[LlProof, ...]) -> LlProof:
    """The same inference applied to replacement premises."""
    if node.rule is LlRule.LIMPOPLUS:
        tag = _consumed_tag(node)
        return ll_limpoplus(premises[0], premises[1], node.principal.formula, tag)
    return _REBUILDERS[node.rule](node, premises)


def _consumed_tag(node: LlProof) -> int:
    """The tag of the pending occurrence an implication-choice node consumes.

    Content-equal occurrences may coexist under different tags; the consumed
    one is the tag present in the second premise but absent from the
    conclusion.
    """
    imp = node.principal.formula
    surviving = {
        g.tag for g in node.conclusion.context if isinstance(g, LlOplusProduct)
    }
    consumed = [
        g.tag
        for g in node.premises[1].conclusion.context
        if isinstance(g, LlOplusProduct)
        and g.left == imp.left
        and g.right == imp.right
        and g.tag not in surviving
    ]
    if len(consumed) != 1:
        raise ProofStructureError(
            "implication-choice node must consume exactly one pending occurrence"
        )
    return consumed[0]


# --- The normalizer -----------------------------------------------------------


def _context_has_tag(sequent: LlSequent, tag: int) -> bool:
    return any(isinstance(g, LlOplusProduct) and g.tag == tag for g in sequent.context)


def _occurrence_with_tag(sequent: LlSequent, tag: int) -> LlOplusProduct:
    for g in sequent.context:
        if isinstance(g, LlOplusProduct) and g.tag == tag:
            return g
    raise ProofStructureError(f"tag {tag} missing from context")


def _check_tag_linearity(node: LlProof):
    seen: set[int] = set()
    duplicated = set()
    for g in node.conclusion.context:
        if isinstance(g, LlOplusProduct):
            if g.tag in seen:
                duplicated.add(g.tag)
            seen.add(g.tag)
    if duplicated:
        raise ProofStructureError(f"choice tags duplicated in one context: {sorted(duplicated)}")
    for p in node.premises:
        _check_tag_linearity(p)


def specialize(proof: LlProof, tag: int, side: int) -> LlProof:
    """Invert every left-choice step for a tag, committing to one component.

    The result proves the same sequent with the tagged choice product replaced
    by its chosen side, and contains no left-choice node for the tag.
    """
    if not _context_has_tag(proof.conclusion, tag):
        raise ProofStructureError(f"cannot specialize: tag {tag} absent from conclusion")
    if proof.rule is LlRule.LOPLUS and proof.principal.tag == tag:
        return proof.premises[side - 1]
    new_premises = tuple(
        specialize(p, tag, side) if _context_has_tag(p.conclusion, tag) else p
        for p in proof.premises
    )
    if not any(_context_has_tag(p.conclusion, tag) for p in proof.premises):
        raise ProofStructureError(f"tag {tag} vanished above its expansion (corrupt proof)")
    return _rebuild(proof, new_premises)


def _is_adjacent(parent: LlProof, child_index: int) -> bool:
    """Whether a left-choice premise sits directly on its consuming inference."""
    child = parent.premises[child_index]
    return (
        parent.rule is LlRule.LIMPOPLUS
        and child_index == 1
        and child.rule is LlRule.LOPLUS
        and _consumed_tag(parent) == child.principal.tag
    )


def unadjacent_choice_paths(proof: LlProof) -> list[tuple[int, ...]]:
    found: list[tuple[int, ...]] = []

    def visit(node: LlProof, path: tuple[int, ...]):
        for i, p in enumerate(node.premises):
            if p.rule is LlRule.LOPLUS and not _is_adjacent(node, i):
                found.append(path + (i,))
            visit(p, path + (i,))
    if proof.rule is LlRule.LOPLUS:
        found.append(())
    visit(proof, ())
    return found


def _subproof(proof: LlProof, path: tuple[int, ...]) -> LlProof:
    node = proof
    for i in path:
        node = node.premises[i]
    return node


def _replace_subproof(proof: LlProof, path: tuple[int, ...], replacement: LlProof) -> LlProof:
    if not path:
        return replacement
    index = path[0]
    premises = list(proof.premises)
    premises[index] = _replace_subproof(premises[index], path[1:], replacement)
    return _rebuild(proof, tuple(premises))


def _commute_once(parent: LlProof, child_index: int) -> LlProof:
    """Swap a left-choice premise with the inference below it.

    Both orders derive the same conclusion; side premises are shared between
    the two rebuilt branches, and a sibling left-choice step is inverted via
    specialize.
    """
    loplus = parent.premises[child_index]
    occ: LlOplusProduct = loplus.principal
    pi1, pi2 = loplus.premises

    if parent.rule in (LlRule.LTENSOR, LlRule.LBANG, LlRule.WBANG, LlRule.CBANG):
        branches = (_rebuild(parent, (pi1,)), _rebuild(parent, (pi2,)))
    elif parent.rule in (LlRule.RTENSOR, LlRule.LIMP, LlRule.LIMPOPLUS):
        other_index = 1 - child_index
        other = parent.premises[other_index]

        def with_premise(p: LlProof) -> LlProof:
            ps = [None, None]
            ps[child_index] = p
            ps[other_index] = other
            return _rebuild(parent, tuple(ps))

        branches = (with_premise(pi1), with_premise(pi2))
    elif parent.rule is LlRule.LOPLUS:
        other_index = 1 - child_index
        other = parent.premises[other_index]

        def with_premise(p: LlProof, side: int) -> LlProof:
            # The sibling still carries our pending choice; commit it to the
            # same component before re-applying the parent inference.
            sibling = specialize(other, occ.tag, side)
            ps = [None, None]
            ps[child_index] = p
            ps[other_index] = sibling
            return _rebuild(parent, tuple(ps))

        branches = (with_premise(pi1, 1), with_premise(pi2, 2))
    else:
        raise ProofStructureError(
            f"no commuting conversion for a left choice under {parent.rule.value}"
        )
    result = ll_loplus(branches[0], branches[1], occ)
    if result.conclusion != parent.conclusion:
        raise ProofStructureError("commuting conversion changed the conclusion")
    return result


def push_oplus_down(proof: LlProof, on_step=None) -> LlProof:
    """Commute left-choice inferences down to their consuming implications.

    Repeatedly picks the unadjacent left-choice node closest to the conclusion
    (ties by leftmost path) and commutes it one step down.  Picking the one
    furthest from the conclusion instead livelocks on stacked choices: pushing
    an outer choice past an adjacent inner one displaces the inner one, and
    the two then swap forever.  The result proves the same conclusion, with
    every left-choice node the immediate second premise of the
    implication-choice node consuming its tag.

    ``on_step``, when given, is called with the whole proof after each
    conversion (test instrumentation).
    """
    result = check_ll_proof(proof)
    if not result.ok:
        raise ValueError(f"cannot normalize an invalid proof: {result}")
    _check_tag_linearity(proof)

    guard = 0
    limit = 4 * (_proof_size(proof) + 1) ** 3
    while True:
        all_paths = unadjacent_choice_paths(proof)
        if any(not p for p in all_paths):
            raise ProofStructureError("left-choice at the root has no consumer below it")
        paths = [p for p in all_paths if p]
        if not paths:
            return proof
        target = min(paths, key=lambda p: (len(p), p))
        parent_path, child_index = target[:-1], target[-1]
        parent = _subproof(proof, parent_path)
        proof = _replace_subproof(proof, parent_path, _commute_once(parent, child_index))
        if on_step is not None:
            on_step(proof)
        guard += 1
        if guard > limit:
            raise ProofStructureError("normalization exceeded its conversion budget")


def _proof_size(proof: LlProof) -> int:
    return 1 + sum(_proof_size(p) for p in proof.premises)


def loplus_distance_sum(proof: LlProof) -> int:
    """Sum over left-choice nodes of their edge distance to their consumer.

    The measure the conversions drive down; adjacency contributes 1 per node.
    """
    total = 0

    def visit(node: LlProof, ancestors: list[tuple[LlProof, int]]):
        nonlocal total
        for i, p in enumerate(node.premises):
            if p.rule is LlRule.LOPLUS:
                tag = p.principal.tag
                distance = None
                chain = ancestors + [(node, i)]
                for steps, (lower, premise_index) in enumerate(reversed(chain), start=1):
                    if (
                        lower.rule is LlRule.LIMPOPLUS
                        and premise_index == 1
                        and _consumed_tag(lower) == tag
                    ):
                        distance = steps
                        break
                if distance is None:
                    raise ProofStructureError(f"left-choice tag {tag} has no consumer below")
                total += distance
            visit(p, ancestors + [(node, i)])

    visit(proof, [])
    return total


# --- Horn reading and translation ----------------------------------------------


def horn_reading(sequent: LlSequent) -> HornSequent:
    """Zone a flat context: products tensor into the input, implications split
    by bang.  Fails on pending choice products and on empty product part."""
    products: list[SimpleProduct] = []
    linear: list[HornFormula] = []
    banged: list[HornFormula] = []
    for g in sequent.context:
        if isinstance(g, LlProduct):
            products.append(g.product)
        elif isinstance(g, LlImp):
            linear.append(g.formula)
        elif isinstance(g, LlBang):
            if isinstance(g.formula, SimpleProduct):
                raise ValueError("banged product has no zoned reading")
            banged.append(g.formula)
        else:
            raise ValueError(f"pending choice {g} has no zoned reading")
    if not products:
        raise ValueError("context has no product part")
    return HornSequent(tensor_all(products), tuple(linear), tuple(banged), sequent.goal)


def _context_products(context: tuple[LlFormula, ...]) -> Frame:
    total: Counter[str] = Counter()
    for g in context:
        if isinstance(g, LlProduct):
            total += g.product.counter()
    return Frame.from_counter(total)


def _framed(proof: HllProof, frame: Frame) -> HllProof:
    return proof if frame.is_empty else hll.frame_rule(proof, frame.to_product())


def translate_ll_to_hll(proof: LlProof) -> HllProof:
    """Normalize, then simulate each inference in the zoned calculus.

    The output checks valid and concludes exactly the zoned reading of the
    input's conclusion.
    """
    normalized = push_oplus_down(proof)
    translated = _translate(normalized)
    expected = horn_reading(proof.conclusion)
    if translated.conclusion != expected:
        raise AssertionError(
            f"translation drifted: {translated.conclusion} != {expected}"
        )
    return translated


def _translate(node: LlProof) -> HllProof:
    rule = node.rule

    if rule is LlRule.I:
        return hll.i_axiom(node.conclusion.goal)

    if rule is LlRule.LTENSOR:
        # Regrouping is invisible in the canonical reading; keep the rule
        # as an explicit no-op step.
        return hll.ltensor(_translate(node.premises[0]))

    if rule is LlRule.RTENSOR:
        pi1, pi2 = node.premises
        w1 = _context_products(pi1.conclusion.context)
        z2 = pi2.conclusion.goal
        proves = _framed(_translate(pi2), w1)  # ... |- Z2 (x) W1
        uses = hll.frame_rule(_translate(pi1), z2)  # W1 (x) Z2, ... |- Z1 (x) Z2
        return hll.cut(proves, uses)

    if rule is LlRule.LIMP:
        imp: PlainImplication = node.principal.formula
        pi1, pi2 = node.premises
        inner = hll.cut(_translate(pi1), hll.h_axiom(imp))
        rest = _ctx_minus(pi2.conclusion.context, LlProduct(imp.consequent))
        w2 = _context_products(rest)
        return hll.cut(_framed(inner, w2), _translate(pi2))

    if rule is LlRule.LIMPOPLUS:
        imp: OplusImplication = node.principal.formula
        pi0, loplus = node.premises
        if loplus.rule is not LlRule.LOPLUS or _consumed_tag(node) != loplus.principal.tag:
            raise ProofStructureError(
                "implication-choice without its adjacent left choice; normalize first"
            )
        pi1, pi2 = loplus.premises
        rest1 = _ctx_minus(pi1.conclusion.context, LlProduct(imp.left))
        v = _context_products(rest1)
        choice = hll.oplus_h(_translate(pi1), _translate(pi2), imp, v)
        return hll.cut(_framed(_translate(pi0), v), choice)

    if rule is LlRule.LOPLUS:
        raise ProofStructureError("left choice surfaced outside its consuming inference")

    if rule in (LlRule.LBANG, LlRule.WBANG, LlRule.CBANG):
        a: HornFormula = node.principal.formula
        sub = _translate(node.premises[0])
        if rule is LlRule.LBANG:
            return hll.lbang(sub, a)
        if rule is LlRule.WBANG:
            return hll.wbang(sub, a)
        return hll.cbang(sub, a)

    raise AssertionError(rule)


# --- Text formats ----------------------------------------------------------------


def ll_sequent_text(s: LlSequent) -> str:
    context = ", ".join(str(g) for g in s.context)
    left = context + " " if context else ""
    return f"{left}|- {product_text(s.goal)}"


def parse_ll_formula(text: str) -> LlFormula:
    ts = TokenStream(text)
    f = _parse_ll_formula(ts)
    ts.done()
    return f


def _parse_ll_formula(ts: TokenStream) -> LlFormula:
    tok = ts.peek()
    if tok.text == "!":
        ts.next()
        ts.expect("(")
        if _looks_like_product_then(ts, ")"):
            inner: Union[HornFormula, SimpleProduct] = _parse_bare_product(ts)
        else:
            inner = _parse_formula_rest(ts, _parse_operand(ts))
        ts.expect(")")
        return LlBang(inner)
    if tok.text == "(":
        ts.next()
        first = _parse_bare_product(ts)
        nxt = ts.next()
        if nxt.text == "+":
            second = _parse_bare_product(ts)
            ts.expect(")")
            ts.expect("#")
            num = ts.next()
            if num.kind != "num":
                raise FormatError("expected a tag number after '#'", num.position)
            return LlOplusProduct(first, second, int(num.text))
        if nxt.text == ")":
            if ts.peek().text == "-o":
                return LlImp(_parse_formula_rest(ts, first))
            return LlProduct(first)
        raise FormatError(f"expected '+' or ')', found {nxt.text!r}", nxt.position)
    product = _parse_bare_product(ts)
    if ts.peek().text == "-o":
        return LlImp(_parse_formula_rest(ts, product))
    return LlProduct(product)


def _looks_like_product_then(ts: TokenStream, closing: str) -> bool:
    """Lookahead: does a bare product followed by `closing` start here?"""
    index = ts.index
    try:
        _parse_bare_product(ts)
        result = ts.peek().text == closing
    except FormatError:
        result = False
    ts.index = index
    return result


def parse_ll_sequent(text: str) -> LlSequent:
    ts = TokenStream(text)
    context: list[LlFormula] = []
    if ts.peek().text != "|-":
        context.append(_parse_ll_formula(ts))
        while ts.peek().text == ",":
            ts.next()
            context.append(_parse_ll_formula(ts))
    ts.expect("|-")
    goal = _parse_bare_product(ts)
    ts.done()
    return LlSequent(tuple(context), goal)


def ll_proof_to_json(proof: LlProof) -> str:
    return json.dumps(_ll_to_data(proof), indent=2) + "\n"


def _ll_to_data(node: LlProof) -> dict:
    data: dict = {"rule": node.rule.value, "conclusion": ll_sequent_text(node.conclusion)}
    if node.principal is not None:
        data["principal"] = str(node.principal)
    if node.split is not None:
        data["split"] = [product_text(node.split[0]), product_text(node.split[1])]
    if node.premises:
        data["premises"] = [_ll_to_data(p) for p in node.premises]
    return data


def ll_proof_from_json(text: str) -> LlProof:
    return _ll_from_data(json.loads(text))


def _ll_from_data(data: dict) -> LlProof:
    rule = LlRule(data["rule"])
    conclusion = parse_ll_sequent(data["conclusion"])
    premises = tuple(_ll_from_data(p) for p in data.get("premises", []))
    principal = parse_ll_formula(data["principal"]) if "principal" in data else None
    split = None
    if "split" in data:
        split = (parse_product(data["split"][0]), parse_product(data["split"][1]))
    return LlProof(rule, conclusion, premises, principal=principal, split=split)
