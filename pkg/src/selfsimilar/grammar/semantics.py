"""Finite-dimensional vector meanings for typed words.

Every type gets a real vector space: a base type gets the dimension from the
lexicon, the unit is one dimensional, and pairing and both abstractions get the
product of their parts.  Both abstraction spaces are laid out row-major over
(argument, result), so ``[A -> B]`` and ``[B <- A]`` share coordinates and
evaluation on either side is the same contraction.  Setting
``identify_evaluations=False`` stores ``[B <- A]`` as (result, argument) instead.

A sentence is held as its list of factor vectors; the meaning of the whole
sequence is their tensor product and every evaluation contracts two neighbours.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce as fold
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .reduce import EVAL_LEFT, INSTANTIATE, ReductionTrace, reduce
from .types import (Base, LeftArrow, RightArrow, Tensor, TypeExpr, Unit, Var, free_vars, is_schema,
                    parse_type, show, show_schema)

TOLERANCE = 1e-9


class TypeMismatch(TypeError):
    pass


class DimensionMismatch(ValueError):
    pass


class TraceMismatch(ValueError):
    pass


class UnknownWord(KeyError):
    pass


@dataclass(frozen=True)
class Meaning:
    type: TypeExpr
    coordinates: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coordinates", np.asarray(self.coordinates, dtype=float).ravel())

    def __len__(self) -> int:
        return len(self.coordinates)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coordinates))


def dim(t: TypeExpr, base_dims: Mapping[str, int]) -> int:
    if isinstance(t, Base):
        if t.name not in base_dims:
            raise DimensionMismatch(f"no dimension assigned to base type {t.name}")
        return int(base_dims[t.name])
    if isinstance(t, Unit):
        return 1
    if isinstance(t, Var):
        raise DimensionMismatch(f"type variable {t.name} has no dimension")
    if isinstance(t, Tensor):
        return dim(t.left, base_dims) * dim(t.right, base_dims)
    return dim(t.domain, base_dims) * dim(t.codomain, base_dims)


def inner_product(x: Meaning, y: Meaning) -> float:
    if x.type != y.type:
        raise TypeMismatch(f"cannot compare {show(x.type)} with {show(y.type)}")
    return float(np.dot(x.coordinates, y.coordinates))


def tensor(x: Meaning, y: Meaning) -> Meaning:
    return Meaning(Tensor(x.type, y.type), np.kron(x.coordinates, y.coordinates))


def name(f: np.ndarray, a: TypeExpr, b: TypeExpr, base_dims: Mapping[str, int]) -> Meaning:
    """The element of ``[a -> b]`` for the matrix ``f`` (shape dim b x dim a)."""
    f = np.asarray(f, dtype=float)
    da, db = dim(a, base_dims), dim(b, base_dims)
    if f.shape != (db, da):
        raise DimensionMismatch(f"expected a {db}x{da} matrix, got {f.shape}")
    return Meaning(LeftArrow(a, b), f.T.ravel())


def unname(m: Meaning, base_dims: Mapping[str, int]) -> np.ndarray:
    if not isinstance(m.type, (LeftArrow, RightArrow)):
        raise TypeMismatch(f"{show(m.type)} is not an abstraction type")
    da, db = dim(m.type.domain, base_dims), dim(m.type.codomain, base_dims)
    return m.coordinates.reshape(da, db).T.copy()


def eval_matrix(da: int, db: int) -> np.ndarray:
    """Matrix of evaluation ``A * [A -> B] -> B`` on the paired space."""
    e = np.zeros((db, da, da, db))
    for a in range(da):
        for b in range(db):
            e[b, a, a, b] = 1.0
    return e.reshape(db, da * da * db)


def isometry_check(f: np.ndarray, tol: float = TOLERANCE) -> bool:
    f = np.asarray(f, dtype=float)
    gram = f.conj().T @ f
    return bool(np.allclose(gram, np.eye(gram.shape[0]), atol=tol, rtol=0.0))


@dataclass(frozen=True)
class Entry:
    word: str
    type: TypeExpr
    meaning: Optional[Meaning]
    scale: float = 1.0
    maps: Mapping[TypeExpr, np.ndarray] = field(default_factory=dict, compare=False)

    @property
    def is_connective(self) -> bool:
        return is_schema(self.type)


@dataclass(frozen=True)
class Lexicon:
    base_dims: Mapping[str, int]
    entries: Mapping[str, Entry]
    identify_evaluations: bool = True

    @classmethod
    def from_dict(cls, data: Mapping, identify_evaluations: bool = True) -> "Lexicon":
        base_dims = {k: int(v) for k, v in data["base_dims"].items()}
        entries = {}
        for word, spec in data["entries"].items():
            t = parse_type(spec["type"])
            if is_schema(t):
                maps = {parse_type(k): np.asarray(v, dtype=float)
                        for k, v in spec.get("maps", {}).items()}
                entries[word] = Entry(word, t, None, 1.0, maps)
                continue
            vec = np.asarray(spec["vector"], dtype=float)
            if len(vec) != dim(t, base_dims):
                raise DimensionMismatch(f"{word}: {len(vec)} coordinates for {show(t)} "
                                        f"of dimension {dim(t, base_dims)}")
            scale = float(np.linalg.norm(vec))
            if scale == 0:
                raise ValueError(f"{word}: zero vector has no unit-norm meaning")
            entries[word] = Entry(word, t, Meaning(t, vec / scale), scale)
        return cls(base_dims, entries, identify_evaluations)

    @classmethod
    def load(cls, path, identify_evaluations: bool = True) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), identify_evaluations)

    def lookup(self, word: str) -> Entry:
        for key in (word, word.replace("_", " "), word.replace(" ", "_")):
            if key in self.entries:
                return self.entries[key]
        raise UnknownWord(word)

    def types(self, words: Sequence[str]) -> list[TypeExpr]:
        return [self.lookup(w).type for w in words]

    def dim(self, t: TypeExpr) -> int:
        return dim(t, self.base_dims)

    def connective_meaning(self, entry: Entry, instance: TypeExpr) -> Meaning:
        """Meaning of a connective at one instance of its schema, normalised to unit length."""
        (var,) = free_vars(entry.type)
        x = _binding_for(entry.type, instance, var)
        d = self.dim(x)
        bilinear = entry.maps.get(x)
        if bilinear is None:
            bilinear = np.zeros((d, d * d))
            for i in range(d):
                bilinear[i, i * d + i] = 1.0
        bilinear = np.asarray(bilinear, dtype=float)
        if bilinear.shape != (d, d * d):
            raise DimensionMismatch(f"connective map for {show(x)} must be {d}x{d * d}")
        # bilinear[o, l*d + r] combines a left x_l and a right y_r into output o
        t = bilinear.reshape(d, d, d)
        if self.identify_evaluations:
            coords = np.einsum("olr->rlo", t)
        else:
            coords = np.einsum("olr->lor", t)
        coords = coords.ravel()
        return Meaning(instance, coords / np.linalg.norm(coords))


def _binding_for(schema: TypeExpr, instance: TypeExpr, var: str) -> TypeExpr:
    found: dict[str, TypeExpr] = {}

    def match(s, t) -> bool:
        if isinstance(s, Var):
            return found.setdefault(s.name, t) == t
        if type(s) is not type(t):
            return False
        if isinstance(s, (Base, Unit)):
            return s == t
        if isinstance(s, Tensor):
            return match(s.left, t.left) and match(s.right, t.right)
        return match(s.domain, t.domain) and match(s.codomain, t.codomain)

    if not match(schema, instance) or var not in found:
        raise TraceMismatch(f"{show(instance)} is not an instance of {show_schema(schema)}")
    return found[var]


def _apply_eval(rule: str, left: Meaning, right: Meaning, lex: Lexicon) -> Meaning:
    if rule == EVAL_LEFT:
        arg, fn = left, right
        if not isinstance(fn.type, LeftArrow) or fn.type.domain != arg.type:
            raise TraceMismatch(f"cannot evaluate {show(fn.type)} on a left {show(arg.type)}")
        da, db = lex.dim(fn.type.domain), lex.dim(fn.type.codomain)
        out = np.einsum("a,ab->b", arg.coordinates, fn.coordinates.reshape(da, db))
    else:
        fn, arg = left, right
        if not isinstance(fn.type, RightArrow) or fn.type.domain != arg.type:
            raise TraceMismatch(f"cannot evaluate {show(fn.type)} on a right {show(arg.type)}")
        da, db = lex.dim(fn.type.domain), lex.dim(fn.type.codomain)
        if lex.identify_evaluations:
            out = np.einsum("ab,a->b", fn.coordinates.reshape(da, db), arg.coordinates)
        else:
            out = np.einsum("ba,a->b", fn.coordinates.reshape(db, da), arg.coordinates)
    return Meaning(fn.type.codomain, out)


def evaluate_meanings(words: Sequence[str], lexicon: Lexicon, trace: ReductionTrace,
                      stop_after: Optional[int] = None) -> list[Meaning]:
    """The factor meanings after the first ``stop_after`` steps of ``trace`` (all by default)."""
    entries = [lexicon.lookup(w) for w in words]
    if tuple(e.type for e in entries) != trace.initial:
        raise TraceMismatch("trace was not produced from these words")
    steps = trace.steps if stop_after is None else trace.steps[:stop_after]
    if stop_after is not None and not 0 <= stop_after <= len(trace.steps):
        raise TraceMismatch(f"stop_after must lie in [0, {len(trace.steps)}]")
    state: list[Optional[Meaning]] = [e.meaning for e in entries]
    types = list(trace.initial)
    for s in steps:
        k = s.position
        if tuple(types) != s.before:
            raise TraceMismatch(f"step at {k} does not fit the current sequence")
        if s.rule == INSTANTIATE:
            state[k] = lexicon.connective_meaning(entries[k], s.after[k])
            types[k] = s.after[k]
            continue
        if state[k] is None or state[k + 1] is None:
            raise TraceMismatch(f"connective at {k} was used before being instantiated")
        state[k:k + 2] = [_apply_eval(s.rule, state[k], state[k + 1], lexicon)]
        types[k:k + 2] = [state[k].type]
    pending = [i for i, m in enumerate(state) if m is None]
    if pending:
        raise TraceMismatch(f"uninstantiated connective at {pending[0]}")
    return state


def evaluate_meaning(words, lexicon, trace, stop_after=None) -> Meaning:
    """The tensor product of :func:`evaluate_meanings`."""
    return fold(tensor, evaluate_meanings(words, lexicon, trace, stop_after))


def split(sentence) -> list[str]:
    return sentence.split() if isinstance(sentence, str) else list(sentence)


def parse_sentence(sentence, lexicon: Lexicon) -> tuple[list[str], ReductionTrace]:
    words = split(sentence)
    return words, reduce(lexicon.types(words))


def stage_factors(sentence, lexicon: Lexicon, stage: Optional[int] = None) -> list[Meaning]:
    """Factors of ``sentence`` with ``stage`` evaluation steps still to go (None: fully reduced)."""
    words, trace = parse_sentence(sentence, lexicon)
    if stage is None or stage == 0:
        return evaluate_meanings(words, lexicon, trace)
    if not 0 <= stage <= trace.eval_count:
        raise TraceMismatch(f"stage {stage} outside [0, {trace.eval_count}]")
    return evaluate_meanings(words, lexicon, trace, len(trace.steps) - stage)


def compare(sentence1, sentence2, lexicon: Lexicon, stage: Optional[int] = None) -> float:
    """Inner product of two sentences, each with ``stage`` evaluation steps left to do."""
    xs = stage_factors(sentence1, lexicon, stage)
    ys = stage_factors(sentence2, lexicon, stage)
    if [x.type for x in xs] != [y.type for y in ys]:
        shown = lambda ms: " * ".join(show(m.type) for m in ms)
        raise TypeMismatch(f"stage {stage} leaves {shown(xs)} against {shown(ys)}")
    return float(np.prod([inner_product(x, y) for x, y in zip(xs, ys)]))


def compare_phrases(phrase1, phrase2, lexicon: Lexicon, target: TypeExpr) -> float:
    """Inner product of two phrases each reduced to ``target``; single words are taken as they are."""
    def meaning(phrase):
        words = split(phrase)
        if len(words) == 1:
            return lexicon.lookup(words[0]).meaning
        trace = reduce(lexicon.types(words), target=target)
        return evaluate_meaning(words, lexicon, trace)
    return inner_product(meaning(phrase1), meaning(phrase2))


def shipped_lexicon_path(name: str = "toy") -> Path:
    return Path(__file__).resolve().parent.parent / "data" / f"{name}.json"


def load_shipped(name: str = "toy", identify_evaluations: bool = True) -> Lexicon:
    return Lexicon.load(shipped_lexicon_path(name), identify_evaluations)
