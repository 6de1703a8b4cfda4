"""Reduction of a sequence of types to the sentence type.

Two rewrite rules act on adjacent items::

    A, [A -> B]   =>  B     (EvalLeft)
    [B <- A], A   =>  B     (EvalRight)

A schema such as ``\\X. [[X -> X] <- X]`` is first instantiated at a type that
both of its neighbouring constituents can reduce to.  All derivations are found
with a chart; the one whose splits are leftmost is reported, together with the
total number of derivations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .types import (CONNECTIVE_PLACEHOLDER, SENTENCE, LeftArrow, RightArrow, TypeExpr, free_vars,
                    is_schema, show, substitute)

EVAL_LEFT = "EvalLeft"
EVAL_RIGHT = "EvalRight"
INSTANTIATE = "ConnectiveInstantiation"


class ReductionError(ValueError):
    pass


class ReductionStuck(ReductionError):
    def __init__(self, position: int, remaining: Sequence[TypeExpr]):
        self.position = position
        self.remaining = tuple(remaining)
        shown = ", ".join(show(t) for t in remaining)
        super().__init__(f"stuck at item {position}; irreducible sequence: {shown}")


class UnificationError(ReductionError):
    def __init__(self, position: int, left: Sequence[TypeExpr], right: Sequence[TypeExpr]):
        self.position = position
        self.left = tuple(left)
        self.right = tuple(right)
        super().__init__(
            f"connective at item {position} has no common type for its contexts: "
            f"left {{{', '.join(map(show, left))}}}, right {{{', '.join(map(show, right))}}}")


@dataclass(frozen=True)
class Step:
    position: int
    rule: str
    before: tuple[TypeExpr, ...]
    after: tuple[TypeExpr, ...]
    binding: Optional[tuple[tuple[str, TypeExpr], ...]] = None

    def label(self) -> str:
        if self.rule == INSTANTIATE:
            inner = ", ".join(f"{v}:={show(t)}" for v, t in self.binding)
            return f"{INSTANTIATE}({inner})"
        return self.rule


@dataclass(frozen=True)
class ReductionTrace:
    initial: tuple[TypeExpr, ...]
    steps: tuple[Step, ...]
    final: TypeExpr
    ambiguity: int = 1

    @property
    def eval_count(self) -> int:
        return sum(s.rule != INSTANTIATE for s in self.steps)

    def render(self) -> str:
        lines = ["  ".join(show(t) for t in self.initial)]
        for s in self.steps:
            lines.append(f"{s.label():<36} @{s.position}: " + "  ".join(show(t) for t in s.after))
        return "\n".join(lines)


@dataclass(eq=False)
class _Leaf:
    index: int
    type: TypeExpr
    binding: Optional[tuple[tuple[str, TypeExpr], ...]] = None


@dataclass(eq=False)
class _Node:
    rule: str
    type: TypeExpr
    left: object
    right: object


def combine(a: TypeExpr, b: TypeExpr) -> list[tuple[str, TypeExpr]]:
    out = []
    if isinstance(b, LeftArrow) and b.domain == a:
        out.append((EVAL_LEFT, b.codomain))
    if isinstance(a, RightArrow) and a.domain == b:
        out.append((EVAL_RIGHT, a.codomain))
    return out


def _chart(types, leaf_options):
    """cell[(i, j)] maps a type to (derivation count, leftmost derivation)."""
    n = len(types)
    cell: dict[tuple[int, int], dict] = {}
    for i in range(n):
        cell[(i, i)] = {t: (1, leaf) for t, leaf in leaf_options[i].items()}
    for width in range(2, n + 1):
        for i in range(n - width + 1):
            j = i + width - 1
            here: dict = {}
            for k in range(i, j):
                for a, (ca, da) in cell[(i, k)].items():
                    for b, (cb, db) in cell[(k + 1, j)].items():
                        for rule, c in combine(a, b):
                            count, best = here.get(c, (0, None))
                            here[c] = (count + ca * cb, best or _Node(rule, c, da, db))
            cell[(i, j)] = here
    return cell


def _adjacent(cell, n, c):
    left = {t for i in range(c) for t in cell[(i, c - 1)]} if c > 0 else set()
    right = {t for j in range(c + 1, n) for t in cell[(c + 1, j)]} if c < n - 1 else set()
    return left, right


def _order(ts: set) -> list:
    return sorted(ts, key=show)


def reduce(types: Sequence[TypeExpr], connective_schema: Optional[TypeExpr] = None,
           target: TypeExpr = SENTENCE) -> ReductionTrace:
    types = tuple(types)
    if not types:
        raise ReductionError("nothing to reduce")
    if connective_schema is not None:
        types = tuple(connective_schema if t == CONNECTIVE_PLACEHOLDER else t for t in types)
    schemas = [i for i, t in enumerate(types) if is_schema(t)]
    for c in schemas:
        if len(free_vars(types[c])) != 1:
            raise ReductionError(f"schema at item {c} must bind exactly one variable")

    leaf_options = [{} if i in schemas else {t: _Leaf(i, t)} for i, t in enumerate(types)]
    n = len(types)
    cell = _chart(types, leaf_options)
    for _ in range(n):
        grown = False
        for c in schemas:
            left, right = _adjacent(cell, n, c)
            var = next(iter(free_vars(types[c])))
            for x in _order(left & right):
                inst = substitute(types[c], {var: x})
                if inst not in leaf_options[c]:
                    leaf_options[c][inst] = _Leaf(c, inst, ((var, x),))
                    grown = True
        if not grown:
            break
        cell = _chart(types, leaf_options)

    top = cell[(0, n - 1)]
    if target not in top:
        for c in schemas:
            left, right = _adjacent(cell, n, c)
            if left and right and not left & right:
                raise UnificationError(c, _order(left), _order(right))
        raise _stuck(types, cell, n)
    count, tree = top[target]
    return ReductionTrace(types, _linearize(types, tree), target, count)


def _stuck(types, cell, n) -> ReductionStuck:
    """Cover the sequence by the longest constituents from the left."""
    remaining, i, position = [], 0, None
    while i < n:
        for j in range(n - 1, i - 1, -1):
            if cell[(i, j)]:
                remaining.append(_order(set(cell[(i, j)]))[0])
                if position is None and i > 0:
                    position = i
                i = j + 1
                break
        else:
            remaining.append(types[i])
            position = i if position is None else position
            i += 1
    return ReductionStuck(position or 0, remaining)


def _linearize(types, tree) -> tuple[Step, ...]:
    parent: dict[int, _Node] = {}
    leaves: list[_Leaf] = []

    def walk(node):
        if isinstance(node, _Leaf):
            leaves.append(node)
            return
        parent[id(node.left)] = node
        parent[id(node.right)] = node
        walk(node.left)
        walk(node.right)

    walk(tree)
    leaves.sort(key=lambda leaf: leaf.index)
    steps = []
    current = list(types)
    for leaf in leaves:
        if leaf.binding is not None:
            before = tuple(current)
            current[leaf.index] = leaf.type
            steps.append(Step(leaf.index, INSTANTIATE, before, tuple(current), leaf.binding))
    seq: list = list(leaves)
    while len(seq) > 1:
        for k in range(len(seq) - 1):
            p = parent.get(id(seq[k]))
            if p is not None and p.left is seq[k] and p.right is seq[k + 1]:
                before = tuple(x.type for x in seq)
                seq[k:k + 2] = [p]
                steps.append(Step(k, p.rule, before, tuple(x.type for x in seq)))
                break
        else:
            raise AssertionError("derivation tree could not be linearized")
    return tuple(steps)


def check_trace(trace: ReductionTrace) -> None:
    """Replay every step and confirm it is one rewrite of the sequence before it."""
    current = trace.initial
    for s in trace.steps:
        if s.before != current:
            raise ReductionError(f"step at {s.position} does not start where the previous ended")
        k = s.position
        if s.rule == INSTANTIATE:
            expected = current[:k] + (substitute(current[k], dict(s.binding)),) + current[k + 1:]
        else:
            results = dict(combine(current[k], current[k + 1]))
            if s.rule not in results:
                raise ReductionError(f"{s.rule} does not apply at {k}")
            expected = current[:k] + (results[s.rule],) + current[k + 2:]
        if s.after != expected:
            raise ReductionError(f"step at {k} records the wrong result")
        current = expected
    if current != (trace.final,):
        raise ReductionError("trace does not end in its final type")
