"""Tree-like Horn programs and their strong-computation semantics.

A program is a rooted binary tree whose edges carry plain implications.  A
divergent vertex (two children) must label both edges with the same
antecedent; the pair jointly stands for the choice implication
``X -o (Y1 + Y2)`` and models a nondeterministic branch.

Running a program on an input product assigns each vertex the product
obtained by rewriting along its path; an edge whose antecedent is missing
makes the whole subtree undefined.  A program solves a sequent when every
leaf reaches the goal using only the sequent's formulas, with each linear
occurrence used exactly once on every root-to-leaf path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .syntax import (
    HornFormula,
    HornSequent,
    OplusImplication,
    PlainImplication,
    SimpleProduct,
    apply_implication,
    formula_text,
    match_antecedent,
    parse_formula,
    product_equiv,
)

Edge = tuple[int, int]  # (parent, child)


@dataclass(frozen=True)
class HornProgram:
    root: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, PlainImplication], ...]  # parent, child, label

    @staticmethod
    def build(root: int, edges: Iterable[tuple[int, int, PlainImplication]]) -> "HornProgram":
        edges = tuple(edges)
        children: dict[int, list[tuple[int, PlainImplication]]] = {}
        seen_child: set[int] = set()
        for parent, child, label in edges:
            if not isinstance(label, PlainImplication):
                raise ValueError(f"edge ({parent},{child}) must carry a plain implication")
            if child == root or child in seen_child:
                raise ValueError(f"vertex {child} has two parents (not a tree)")
            seen_child.add(child)
            children.setdefault(parent, []).append((child, label))
        vertices = [root]
        index = 0
        while index < len(vertices):
            v = vertices[index]
            index += 1
            out = children.get(v, [])
            if len(out) > 2:
                raise ValueError(f"vertex {v} has {len(out)} children; at most 2 allowed")
            if len(out) == 2:
                (c1, f1), (c2, f2) = out
                if f1.antecedent != f2.antecedent:
                    raise ValueError(
                        f"divergent vertex {v} edges must share an antecedent "
                        f"({formula_text(f1)} vs {formula_text(f2)})"
                    )
            vertices.extend(c for c, _ in out)
        if len(vertices) != len(seen_child) + 1:
            unreachable = seen_child - set(vertices)
            raise ValueError(f"vertices not reachable from the root: {sorted(unreachable)}")
        return HornProgram(root, tuple(vertices), edges)

    @cached_property
    def children(self) -> dict[int, tuple[tuple[int, PlainImplication], ...]]:
        out: dict[int, list[tuple[int, PlainImplication]]] = {v: [] for v in self.vertices}
        for parent, child, label in self.edges:
            out[parent].append((child, label))
        return {v: tuple(cs) for v, cs in out.items()}

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.preorder() if not self.children[v])

    def preorder(self) -> Iterator[int]:
        stack = [self.root]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(child for child, _ in reversed(self.children[v]))

    def is_divergent(self, v: int) -> bool:
        return len(self.children[v]) == 2

    def used_formula(self, parent: int, child: int) -> HornFormula:
        """The formula charged for an edge: the label itself, or the joint
        choice implication on both edges of a divergent vertex."""
        out = self.children[parent]
        for c, label in out:
            if c == child:
                break
        else:
            raise KeyError(f"no edge ({parent}, {child})")
        if len(out) == 2:
            (_, f1), (_, f2) = out
            return OplusImplication(f1.antecedent, f1.consequent, f2.consequent)
        return label

    def path_to(self, v: int) -> tuple[int, ...]:
        parents = {child: parent for parent, child, _ in self.edges}
        path = [v]
        while path[-1] != self.root:
            path.append(parents[path[-1]])
        return tuple(reversed(path))


def single_vertex() -> HornProgram:
    return HornProgram.build(0, ())


def single_edge(f: PlainImplication) -> HornProgram:
    return HornProgram.build(0, ((0, 1, f),))


def chain(formulas: Iterable[PlainImplication]) -> HornProgram:
    edges = [(i, i + 1, f) for i, f in enumerate(formulas)]
    return HornProgram.build(0, edges)


@dataclass(frozen=True)
class Evaluation:
    """Per-vertex strong-computation values; None marks undefined."""

    out: dict[int, SimpleProduct | None]

    def defined_everywhere(self) -> bool:
        return all(value is not None for value in self.out.values())


def evaluate(program: HornProgram, w: SimpleProduct) -> Evaluation:
    out: dict[int, SimpleProduct | None] = {program.root: w}
    for v in program.preorder():
        value = out[v]
        for child, label in program.children[v]:
            out[child] = None if value is None else apply_implication(value, label)
    return Evaluation(out)


# --- Strong-solution verification --------------------------------------------

LEAF_MISMATCH = "LEAF_MISMATCH"
FOREIGN_FORMULA = "FOREIGN_FORMULA"
LINEAR_COUNT = "LINEAR_COUNT"


@dataclass(frozen=True)
class Violation:
    kind: str
    vertex: int | None = None
    edge: Edge | None = None
    formula: HornFormula | None = None
    count: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        parts = [self.kind]
        if self.vertex is not None:
            parts.append(f"vertex={self.vertex}")
        if self.edge is not None:
            parts.append(f"edge={self.edge[0]}->{self.edge[1]}")
        if self.formula is not None:
            parts.append(f"formula={formula_text(self.formula)}")
        if self.count is not None:
            parts.append(f"count={self.count}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


@dataclass(frozen=True)
class StrongSolutionReport:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def __str__(self) -> str:
        if self.ok:
            return "strong solution"
        return "; ".join(str(v) for v in self.violations)


def verify_strong_solution(program: HornProgram, sequent: HornSequent) -> StrongSolutionReport:
    """Check the three strong-solution conditions against a sequent.

    (1) every leaf value is defined and equals the goal; (2) every edge's
    charged formula is drawn from the sequent; (3) on each root-to-leaf path,
    every linear occurrence is charged exactly once (a divergent pair counts
    once, for whichever branch the path takes).  Formulas that also appear in
    the banged zone may be charged any number of additional times.
    """
    violations: list[Violation] = []
    evaluation = evaluate(program, sequent.input)
    for leaf in program.leaves:
        value = evaluation.out[leaf]
        if value is None:
            violations.append(Violation(LEAF_MISMATCH, vertex=leaf, detail="undefined"))
        elif not product_equiv(value, sequent.goal):
            violations.append(
                Violation(LEAF_MISMATCH, vertex=leaf, detail=f"evaluates to {value}")
            )

    available = set(sequent.linear) | set(sequent.banged)
    for parent, child, _ in program.edges:
        used = program.used_formula(parent, child)
        if used not in available:
            violations.append(Violation(FOREIGN_FORMULA, edge=(parent, child), formula=used))

    linear_need: dict[HornFormula, int] = {}
    for f in sequent.linear:
        linear_need[f] = linear_need.get(f, 0) + 1
    banged_set = set(sequent.banged)

    def walk(v: int, used_counts: dict[HornFormula, int]):
        if not program.children[v]:
            for f, need in linear_need.items():
                got = used_counts.get(f, 0)
                if got != need and not (f in banged_set and got > need):
                    violations.append(Violation(LINEAR_COUNT, vertex=v, formula=f, count=got))
            return
        for child, _ in program.children[v]:
            used = program.used_formula(v, child)
            used_counts[used] = used_counts.get(used, 0) + 1
            walk(child, used_counts)
            used_counts[used] -= 1

    walk(program.root, {})
    return StrongSolutionReport(not violations, tuple(violations))


# --- Builders -----------------------------------------------------------------


def compose(p1: HornProgram, p2: HornProgram) -> HornProgram:
    """Graft a fresh copy of p2 onto every leaf of p1."""
    edges: list[tuple[int, int, PlainImplication]] = []
    fresh = [0]

    def allocate() -> int:
        fresh[0] += 1
        return fresh[0] - 1

    mapping1 = {v: allocate() for v in p1.preorder()}
    edges.extend((mapping1[a], mapping1[b], f) for a, b, f in p1.edges)
    for leaf in p1.leaves:
        mapping2 = {p2.root: mapping1[leaf]}
        for v in p2.preorder():
            if v != p2.root:
                mapping2[v] = allocate()
        edges.extend((mapping2[a], mapping2[b], f) for a, b, f in p2.edges)
    return HornProgram.build(mapping1[p1.root], edges)


def strong_fork(
    x: SimpleProduct,
    y1: SimpleProduct,
    y2: SimpleProduct,
    p1: HornProgram,
    p2: HornProgram,
) -> HornProgram:
    """A new root branching into p1 and p2 via ``x -o y1`` and ``x -o y2``."""
    edges: list[tuple[int, int, PlainImplication]] = []
    fresh = [1]

    def copy_in(p: HornProgram) -> int:
        mapping = {}
        for v in p.preorder():
            mapping[v] = fresh[0]
            fresh[0] += 1
        edges.extend((mapping[a], mapping[b], f) for a, b, f in p.edges)
        return mapping[p.root]

    root1 = copy_in(p1)
    root2 = copy_in(p2)
    edges.insert(0, (0, root1, PlainImplication(x, y1)))
    edges.insert(1, (0, root2, PlainImplication(x, y2)))
    return HornProgram.build(0, edges)


# --- Bounded witness search -----------------------------------------------------

_WIN = "win"
_FAIL = "fail"


def prove_bounded(sequent: HornSequent, max_depth: int) -> HornProgram | None:
    """Exhaustive search for a strong-solution witness of height <= max_depth.

    States are (current product, remaining linear multiset); plain rewrites are
    tried before choice branches, candidates ordered by printed form, linear
    formulas consumed and banged ones kept.  A choice formula succeeds only if
    both branches do.  Absence within the depth bound proves nothing.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    banged = tuple(sorted(set(sequent.banged), key=formula_text))
    goal = sequent.goal

    # memo: state -> ("win", program, height) | ("fail", budget tried)
    memo: dict[tuple, tuple] = {}

    def candidates(linear: tuple[HornFormula, ...]):
        seen = []
        for source, formulas in (("linear", linear), ("banged", banged)):
            for i, f in enumerate(formulas):
                if source == "linear" and i > 0 and formulas[i - 1] == f:
                    continue  # duplicate occurrence, same successor state
                seen.append((formula_text(f), source, f))
        seen.sort(key=lambda item: (item[0], item[1] != "linear"))
        return seen

    def remove_one(linear: tuple[HornFormula, ...], f: HornFormula) -> tuple[HornFormula, ...]:
        index = linear.index(f)
        return linear[:index] + linear[index + 1:]

    def search(product: SimpleProduct, linear: tuple[HornFormula, ...], budget: int):
        state = (product, linear)
        known = memo.get(state)
        if known is not None:
            if known[0] == _WIN and known[2] <= budget:
                return known[1]
            if known[0] == _FAIL and budget <= known[1]:
                return None
        if not linear and product_equiv(product, goal):
            result = single_vertex()
            memo[state] = (_WIN, result, 0)
            return result
        plain_moves = []
        fork_moves = []
        for _, source, f in candidates(linear):
            if isinstance(f, PlainImplication):
                plain_moves.append((source, f))
            else:
                fork_moves.append((source, f))
        if budget >= 1:
            for source, f in plain_moves:
                nxt = apply_implication(product, f)
                if nxt is None:
                    continue
                rest = remove_one(linear, f) if source == "linear" else linear
                sub = search(nxt, rest, budget - 1)
                if sub is not None:
                    result = compose(single_edge(f), sub)
                    memo[state] = (_WIN, result, _height(result))
                    return result
            for source, f in fork_moves:
                residual = match_antecedent(product, f.antecedent)
                if residual is None:
                    continue
                rest = remove_one(linear, f) if source == "linear" else linear
                left = search(f.left.tensor(residual), rest, budget - 1)
                if left is None:
                    continue
                right = search(f.right.tensor(residual), rest, budget - 1)
                if right is None:
                    continue
                result = strong_fork(f.antecedent, f.left, f.right, left, right)
                memo[state] = (_WIN, result, _height(result))
                return result
        prior = memo.get(state)
        if prior is None or (prior[0] == _FAIL and prior[1] < budget):
            memo[state] = (_FAIL, budget)
        return None

    witness = search(sequent.input, sequent.linear, max_depth)
    if witness is not None:
        report = verify_strong_solution(witness, sequent)
        assert report.ok, f"prover returned a bad witness: {report}"
    return witness


def _height(program: HornProgram) -> int:
    depth = {program.root: 0}
    best = 0
    for v in program.preorder():
        for child, _ in program.children[v]:
            depth[child] = depth[v] + 1
            best = max(best, depth[child])
    return best


program_height = _height


# --- Serialization ---------------------------------------------------------------


def program_to_json(program: HornProgram) -> str:
    data = {
        "root": program.root,
        "vertices": list(program.vertices),
        "edges": [
            {"parent": parent, "child": child, "label": formula_text(label)}
            for parent, child, label in program.edges
        ],
    }
    return json.dumps(data, indent=2) + "\n"


def program_from_json(text: str) -> HornProgram:
    data = json.loads(text)
    edges = []
    for e in data["edges"]:
        label = parse_formula(e["label"])
        if not isinstance(label, PlainImplication):
            raise ValueError(f"edge label must be a plain implication: {e['label']}")
        edges.append((int(e["parent"]), int(e["child"]), label))
    program = HornProgram.build(int(data["root"]), edges)
    declared = sorted(int(v) for v in data.get("vertices", []))
    if declared and declared != sorted(program.vertices):
        raise ValueError("vertex list does not match the edge list")
    return program


def program_to_dot(program: HornProgram) -> str:
    lines = ["digraph horn_program {"]
    for v in program.vertices:
        shape = "doublecircle" if v == program.root else "circle"
        lines.append(f'  v{v} [label="{v}", shape={shape}];')
    for parent, child, label in program.edges:
        lines.append(f'  v{parent} -> v{child} [label="{formula_text(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
