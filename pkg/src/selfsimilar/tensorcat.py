"""The unitless monoidal category generated by S = N under disjoint union.

Objects are binary trees with leaves S; an arrow X -> Y is a matrix of partial
injections indexed by (target leaf, source leaf).  Tree shape is kept, so
``S*(S*S)`` and ``(S*S)*S`` are different objects and the associator between
them is a genuine arrow.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from . import pinj
from .pinj import PartialInjection


class ShapeMismatch(ValueError):
    pass


class MatrixInvariantError(ValueError):
    """A column is not functional or a row is not injective."""


class NoUnitObject(LookupError):
    """The category has no unit object."""


class NotInvertible(ValueError):
    pass


@dataclass(frozen=True)
class TensorObject:
    left: Optional["TensorObject"] = None
    right: Optional["TensorObject"] = None

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise ValueError("a tensor object is a leaf or has two factors")

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @cached_property
    def leaf_count(self) -> int:
        return 1 if self.is_leaf else self.left.leaf_count + self.right.leaf_count

    def __mul__(self, other: "TensorObject") -> "TensorObject":
        return TensorObject(self, other)

    def __str__(self) -> str:
        if self.is_leaf:
            return "S"
        return f"({self.left}*{self.right})"


S = TensorObject()


def unit_object():
    raise NoUnitObject("S-tensor powers form a unitless monoidal category")


def parse_object(text: str) -> TensorObject:
    """Parse ``S``, ``S*S``, ``(S*S)*S``...; ``*`` (or ``⊗``) associates to the right."""
    src = text.replace("⊗", "*").replace(" ", "")
    pos = 0

    def atom():
        nonlocal pos
        if src.startswith("S", pos):
            pos += 1
            return S
        if src.startswith("(", pos):
            pos += 1
            inner = expr()
            if not src.startswith(")", pos):
                raise ValueError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            return inner
        if src.startswith("I", pos):
            unit_object()
        raise ValueError(f"unexpected input at {pos} in {text!r}")

    def expr():
        nonlocal pos
        left = atom()
        if src.startswith("*", pos):
            pos += 1
            return TensorObject(left, expr())
        return left

    obj = expr()
    if pos != len(src):
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return obj


@dataclass(frozen=True)
class TensorArrow:
    source: TensorObject
    target: TensorObject
    components: tuple[tuple[tuple[int, int], PartialInjection], ...] = ()
    _lookup: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        self._lookup.update(self.components)

    def __getitem__(self, key: tuple[int, int]) -> PartialInjection:
        return self._lookup.get(key, pinj.empty())

    def column(self, i: int) -> list[tuple[int, PartialInjection]]:
        return [(j, f) for (j, k), f in self.components if k == i]

    def apply(self, leaf: int, n: int) -> Optional[tuple[int, int]]:
        """Evaluate on the tagged point ``(leaf, n)``."""
        for j, f in self.column(leaf):
            m = pinj.apply(f, n)
            if m is not None:
                return j, m
        return None

    def __matmul__(self, other: "TensorArrow") -> "TensorArrow":
        return t_compose(self, other)

    def render(self) -> str:
        head = f"{self.source} -> {self.target}"
        rows = []
        for j in range(self.target.leaf_count):
            cells = [_cell(self[(j, i)]) for i in range(self.source.leaf_count)]
            rows.append(f"  row {j}: " + " | ".join(cells))
        return "\n".join([head] + rows)

    def __str__(self) -> str:
        return self.render()


def _cell(f: PartialInjection) -> str:
    if f.is_empty():
        return "0"
    if f == pinj.identity():
        return "1"
    return "{" + f.inline() + "}"


def arrow(source: TensorObject, target: TensorObject,
          entries: Mapping[tuple[int, int], PartialInjection], check: bool = True) -> TensorArrow:
    """Build a matrix arrow, dropping empty entries and checking the matrix invariants."""
    items = []
    for (j, i), f in sorted(entries.items()):
        if not (0 <= j < target.leaf_count and 0 <= i < source.leaf_count):
            raise ShapeMismatch(f"entry {(j, i)} outside a {target.leaf_count}x{source.leaf_count} matrix")
        if not f.is_empty():
            items.append(((j, i), f))
    if check:
        _check_matrix(items)
    return TensorArrow(source, target, tuple(items))


def _check_matrix(items) -> None:
    for a in range(len(items)):
        (ja, ia), f = items[a]
        for b in range(a + 1, len(items)):
            (jb, ib), g = items[b]
            if ia == ib and pinj.domain_overlap(f, g) is not None:
                raise MatrixInvariantError(f"column {ia} is not functional: rows {ja}, {jb}")
            if ja == jb and pinj.image_overlap(f, g) is not None:
                raise MatrixInvariantError(f"row {ja} is not injective: columns {ia}, {ib}")


def endo(f: PartialInjection) -> TensorArrow:
    """A partial injection on N seen as an arrow S -> S."""
    return arrow(S, S, {(0, 0): f}, check=False)


def t_identity(x: TensorObject) -> TensorArrow:
    one = pinj.identity()
    return arrow(x, x, {(i, i): one for i in range(x.leaf_count)}, check=False)


def t_compose(g: TensorArrow, f: TensorArrow) -> TensorArrow:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise ShapeMismatch(f"cannot compose {g.source} <- ... with ... -> {f.target}")
    cols: dict[int, list[tuple[int, PartialInjection]]] = {}
    for (j, i), fi in f.components:
        cols.setdefault(j, []).append((i, fi))
    acc: dict[tuple[int, int], PartialInjection] = {}
    for (k, j), gk in g.components:
        for i, fi in cols.get(j, ()):
            piece = pinj.compose(gk, fi)
            if piece.is_empty():
                continue
            # pieces for different middle leaves are orthogonal by the matrix invariants
            acc[(k, i)] = pinj.orthogonal_union(acc[(k, i)], piece) if (k, i) in acc else piece
    return arrow(f.source, g.target, acc, check=False)


def t_dagger(f: TensorArrow) -> TensorArrow:
    return arrow(f.target, f.source, {(i, j): pinj.dagger(c) for (j, i), c in f.components}, check=False)


def t_tensor(f: TensorArrow, g: TensorArrow) -> TensorArrow:
    ns, nt = f.source.leaf_count, f.target.leaf_count
    entries = dict(f.components)
    entries.update({(j + nt, i + ns): c for (j, i), c in g.components})
    return arrow(f.source * g.source, f.target * g.target, entries, check=False)


def t_inverse(f: TensorArrow) -> TensorArrow:
    inv = t_dagger(f)
    if t_compose(inv, f) != t_identity(f.source) or t_compose(f, inv) != t_identity(f.target):
        raise NotInvertible("arrow is not a bijection on tagged points")
    return inv


def tau(x: TensorObject, y: TensorObject, z: TensorObject) -> TensorArrow:
    """Associator ``x*(y*z) -> (x*y)*z``; leaf order is unchanged."""
    src, tgt = x * (y * z), (x * y) * z
    one = pinj.identity()
    return arrow(src, tgt, {(i, i): one for i in range(src.leaf_count)}, check=False)


def sigma(x: TensorObject, y: TensorObject) -> TensorArrow:
    """Symmetry ``x*y -> y*x``."""
    nx, ny = x.leaf_count, y.leaf_count
    one = pinj.identity()
    entries = {(ny + i, i): one for i in range(nx)}
    entries.update({(j, nx + j): one for j in range(ny)})
    return arrow(x * y, y * x, entries, check=False)


def first_difference(lhs: TensorArrow, rhs: TensorArrow) -> Optional[dict]:
    """A tagged input where two parallel arrows disagree, with both outputs; None if equal."""
    if lhs.source != rhs.source or lhs.target != rhs.target:
        raise ShapeMismatch("arrows are not parallel")
    best = None
    for i in range(lhs.source.leaf_count):
        for j in range(lhs.target.leaf_count):
            n = pinj.first_difference(lhs[(j, i)], rhs[(j, i)])
            if n is not None and (best is None or (n, i) < (best[1], best[0])):
                best = (i, n)
    if best is None:
        return None
    i, n = best
    a, b = lhs.apply(i, n), rhs.apply(i, n)
    return {"leaf": i, "n": n, "lhs": list(a) if a else None, "rhs": list(b) if b else None}
