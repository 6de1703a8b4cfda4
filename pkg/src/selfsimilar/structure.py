"""Self-similar structures on S = N and the constructions they induce.

A self-similar structure is a pair of mutually inverse arrows
``code: S*S -> S`` and ``decode: S -> S*S``.  Every interior point of the
Cantor set gives one: the stream splits N into two infinite chains and
``decode`` sends ``n`` to ``(rank of n in its chain, chain)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import pinj
from .pinj import AffineClause, PartialInjection
from .streams import BinaryStream, BoundaryStreamError
from .tensorcat import (S, TensorArrow, TensorObject, arrow, endo, sigma, t_compose,
                        t_dagger, t_identity, t_tensor, tau)


class StructureError(ValueError):
    """code and decode are not mutually inverse."""


@dataclass(frozen=True)
class SelfSimilarStructure:
    code: TensorArrow
    decode: TensorArrow
    stream: Optional[BinaryStream] = field(default=None, compare=False)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.code.source != S * S or self.code.target != S:
            raise StructureError("code must be an arrow S*S -> S")
        if self.decode.source != S or self.decode.target != S * S:
            raise StructureError("decode must be an arrow S -> S*S")

    def validate(self) -> "SelfSimilarStructure":
        if t_compose(self.code, self.decode) != t_identity(S):
            raise StructureError("code . decode is not the identity on S")
        if t_compose(self.decode, self.code) != t_identity(S * S):
            raise StructureError("decode . code is not the identity on S*S")
        return self

    @property
    def is_dagger(self) -> bool:
        return t_dagger(self.code) == self.decode

    def describe(self) -> str:
        if self.label:
            return self.label
        return self.stream.literal() if self.stream is not None else "custom"


def decode_components(stream: BinaryStream) -> tuple[PartialInjection, PartialInjection]:
    """The two chains of ``stream`` as order-preserving maps onto N."""
    if not stream.is_interior:
        raise BoundaryStreamError(f"{stream.literal()} is eventually constant")
    prefix, period = stream.prefix, stream.period
    base, per = len(prefix), len(period)
    parts = []
    for bit in (0, 1):
        exceptions = {}
        rank = 0
        for n, b in enumerate(prefix):
            if b == bit:
                exceptions[n] = rank
                rank += 1
        per_count = period.count(bit)
        clauses = []
        for i, b in enumerate(period):
            if b == bit:
                clauses.append(AffineClause.through(base + i, per, rank, per_count))
                rank += 1
        parts.append(pinj.make(exceptions, clauses))
    return parts[0], parts[1]


def decode_of_stream(stream: BinaryStream) -> SelfSimilarStructure:
    d0, d1 = decode_components(stream)
    decode = arrow(S, S * S, {(0, 0): d0, (1, 0): d1})
    return SelfSimilarStructure(t_dagger(decode), decode, stream=stream).validate()


def from_literal(literal: str) -> SelfSimilarStructure:
    return decode_of_stream(BinaryStream.parse(literal))


def corrupted(ss: SelfSimilarStructure, f: Optional[PartialInjection] = None) -> SelfSimilarStructure:
    """``ss`` with its code post-composed by ``f`` (default: the first generator); not validated."""
    f = f if f is not None else polycyclic_generators(ss)[0]
    label = f"{ss.describe()} (code corrupted)"
    return SelfSimilarStructure(t_compose(endo(f), ss.code), ss.decode, stream=ss.stream, label=label)


@lru_cache(maxsize=None)
def generalized_decode(ss: SelfSimilarStructure, x: TensorObject) -> TensorArrow:
    """Isomorphism ``S -> x`` built by repeatedly decoding."""
    if x.is_leaf:
        return t_identity(S)
    inner = t_tensor(generalized_decode(ss, x.left), generalized_decode(ss, x.right))
    return t_compose(inner, ss.decode)


@lru_cache(maxsize=None)
def generalized_code(ss: SelfSimilarStructure, x: TensorObject) -> TensorArrow:
    if x.is_leaf:
        return t_identity(S)
    inner = t_tensor(generalized_code(ss, x.left), generalized_code(ss, x.right))
    return t_compose(ss.code, inner)


def convolution(ss: SelfSimilarStructure, f: TensorArrow) -> PartialInjection:
    """Collapse an arrow between tensor powers of S to a single map on N."""
    whole = t_compose(generalized_code(ss, f.target), t_compose(f, generalized_decode(ss, f.source)))
    return whole[(0, 0)]


@lru_cache(maxsize=4096)
def internal_tensor(ss: SelfSimilarStructure, f: PartialInjection, g: PartialInjection) -> PartialInjection:
    return convolution(ss, t_tensor(endo(f), endo(g)))


@lru_cache(maxsize=None)
def tau_ss(ss: SelfSimilarStructure) -> PartialInjection:
    return convolution(ss, tau(S, S, S))


@lru_cache(maxsize=None)
def sigma_ss(ss: SelfSimilarStructure) -> PartialInjection:
    return convolution(ss, sigma(S, S))


def polycyclic_generators(ss: SelfSimilarStructure) -> tuple[PartialInjection, PartialInjection]:
    """The code arrow restricted to each tensor factor."""
    return ss.code[(0, 0)], ss.code[(0, 1)]


def matrix_rep(ss: SelfSimilarStructure, f: PartialInjection) -> TensorArrow:
    """The 2x2 matrix of ``f`` in the basis given by ``ss``."""
    return t_compose(ss.decode, t_compose(endo(f), ss.code))


def change_of_basis(ss1: SelfSimilarStructure, ss2: SelfSimilarStructure) -> PartialInjection:
    """The unique morphism of structures ``ss1 -> ss2``."""
    return t_compose(ss2.code, ss1.decode)[(0, 0)]


def moved_point(f: PartialInjection) -> Optional[tuple[int, Optional[int]]]:
    """Smallest ``n`` with ``f(n) != n`` as ``(n, f(n))``, or None when ``f`` is the identity."""
    n = pinj.first_difference(f, pinj.identity())
    return None if n is None else (n, pinj.apply(f, n))
