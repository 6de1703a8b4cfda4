"""Grammatical types: base names, the unit, pairing and the two abstractions.

Concrete syntax::

    NP                      base type
    I                       unit
    A * B                   pairing (right associative)
    [A -> B]                abstraction consuming an A on the left
    [B <- A]                abstraction consuming an A on the right
    \\X. [[X -> X] <- X]     schema; ``ΛX.`` and ``forall X.`` also work
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class TypeSyntaxError(SyntaxError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position
        self.offset = position + 1


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Tensor:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class LeftArrow:
    """``[domain -> codomain]``: the argument sits to the left."""
    domain: "TypeExpr"
    codomain: "TypeExpr"


@dataclass(frozen=True)
class RightArrow:
    """``[codomain <- domain]``: the argument sits to the right."""
    codomain: "TypeExpr"
    domain: "TypeExpr"


@dataclass(frozen=True)
class Var:
    name: str


TypeExpr = Union[Base, Unit, Tensor, LeftArrow, RightArrow, Var]

SENTENCE = Base("S")
NOUN_PHRASE = Base("NP")
CONNECTIVE_PLACEHOLDER = Base("C")


def show(t: TypeExpr) -> str:
    if isinstance(t, Base):
        return t.name
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Unit):
        return "I"
    if isinstance(t, Tensor):
        left = show(t.left)
        if isinstance(t.left, Tensor):
            left = f"({left})"
        return f"{left} * {show(t.right)}"
    if isinstance(t, LeftArrow):
        return f"[{show(t.domain)} -> {show(t.codomain)}]"
    return f"[{show(t.codomain)} <- {show(t.domain)}]"


def show_schema(t: TypeExpr) -> str:
    names = sorted(free_vars(t))
    head = "".join(f"\\{n}. " for n in names)
    return head + show(t)


def free_vars(t: TypeExpr) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Base, Unit)):
        return set()
    parts = (t.left, t.right) if isinstance(t, Tensor) else (t.domain, t.codomain)
    return free_vars(parts[0]) | free_vars(parts[1])


def is_schema(t: TypeExpr) -> bool:
    return bool(free_vars(t))


def substitute(t: TypeExpr, binding: dict[str, TypeExpr]) -> TypeExpr:
    if isinstance(t, Var):
        return binding.get(t.name, t)
    if isinstance(t, (Base, Unit)):
        return t
    if isinstance(t, Tensor):
        return Tensor(substitute(t.left, binding), substitute(t.right, binding))
    if isinstance(t, LeftArrow):
        return LeftArrow(substitute(t.domain, binding), substitute(t.codomain, binding))
    return RightArrow(substitute(t.codomain, binding), substitute(t.domain, binding))


_TOKEN = re.compile(r"\s*(->|<-|→|←|\\|Λ|forall\b|[A-Za-z_][A-Za-z0-9_']*|[\[\]()*.⊗])")


def _tokens(text: str) -> list[tuple[str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TypeSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        tok = {"→": "->", "←": "<-", "⊗": "*", "Λ": "\\", "forall": "\\"}.get(m.group(1), m.group(1))
        out.append((tok, m.start(1)))
        pos = m.end()
    return out


def parse_type(text: str) -> TypeExpr:
    toks = _tokens(text)
    i = 0
    bound: set[str] = set()

    def peek():
        return toks[i][0] if i < len(toks) else None

    def here():
        return toks[i][1] if i < len(toks) else len(text)

    def take(expected=None):
        nonlocal i
        if i >= len(toks):
            raise TypeSyntaxError(f"expected {expected or 'a type'} but input ended", text, len(text))
        tok = toks[i]
        if expected is not None and tok[0] != expected:
            raise TypeSyntaxError(f"expected {expected!r}, found {tok[0]!r}", text, tok[1])
        i += 1
        return tok

    def atom():
        tok, pos = take()
        if tok == "[":
            first = expr()
            arrow = peek()
            if arrow not in ("->", "<-"):
                if arrow is None:
                    raise TypeSyntaxError("unclosed '['", text, pos)
                raise TypeSyntaxError("expected '->' or '<-'", text, here())
            take()
            second = expr()
            if peek() != "]":
                if peek() is None:
                    raise TypeSyntaxError("unclosed '['", text, pos)
                raise TypeSyntaxError("expected ']'", text, here())
            take()
            return LeftArrow(first, second) if arrow == "->" else RightArrow(first, second)
        if tok == "(":
            inner = expr()
            if peek() is None:
                raise TypeSyntaxError("unclosed '('", text, pos)
            take(")")
            return inner
        if tok == "I":
            return Unit()
        if re.match(r"[A-Za-z_]", tok):
            return Var(tok) if tok in bound else Base(tok)
        raise TypeSyntaxError(f"unexpected {tok!r}", text, pos)

    def expr():
        left = atom()
        if peek() == "*":
            take()
            return Tensor(left, expr())
        return left

    while peek() == "\\":
        take()
        name, pos = take()
        if not re.match(r"[A-Za-z_]", name):
            raise TypeSyntaxError("expected a variable name", text, pos)
        bound.add(name)
        take(".")
    result = expr()
    if i != len(toks):
        raise TypeSyntaxError(f"unexpected {toks[i][0]!r}", text, toks[i][1])
    return result
