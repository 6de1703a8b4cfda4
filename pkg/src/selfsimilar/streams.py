"""Eventually periodic binary streams (points of the Cantor set).

A stream is written ``prefix|period`` over {0,1}; ``|01`` is the alternating
point and ``0011010100|01`` agrees with the prime indicator up to n = 14.
"""
from __future__ import annotations

import random
from dataclasses import dataclass


class BoundaryStreamError(ValueError):
    """The stream is eventually constant, so one of its two chains is finite."""


@dataclass(frozen=True)
class BinaryStream:
    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(b not in (0, 1) for b in self.prefix + self.period):
            raise ValueError("streams are over the alphabet {0, 1}")

    @classmethod
    def of(cls, prefix, period) -> "BinaryStream":
        """Canonical stream: primitive period, shortest prefix."""
        prefix, period = tuple(int(b) for b in prefix), tuple(int(b) for b in period)
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and period == period[:d] * (n // d):
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix, period = prefix[:-1], period[-1:] + period[:-1]
        return cls(prefix, period)

    @classmethod
    def parse(cls, literal: str) -> "BinaryStream":
        if literal.count("|") != 1:
            raise ValueError(f"stream literal must look like 'prefix|period': {literal!r}")
        prefix, period = literal.strip().split("|")
        if not period or set(prefix + period) - {"0", "1"}:
            raise ValueError(f"bad stream literal: {literal!r}")
        return cls.of(prefix, period)

    def nth(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def bits(self, count: int) -> list[int]:
        return [self.nth(n) for n in range(count)]

    @property
    def is_interior(self) -> bool:
        return 0 in self.period and 1 in self.period

    def literal(self) -> str:
        return "".join(map(str, self.prefix)) + "|" + "".join(map(str, self.period))

    def __str__(self) -> str:
        return self.literal()


ALTERNATING = BinaryStream.of((), (0, 1))


def random_interior_streams(count: int, seed: int, max_prefix: int = 4, max_period: int = 4) -> list[BinaryStream]:
    """Distinct canonical interior streams drawn from a seeded generator."""
    rng = random.Random(seed)
    found: list[BinaryStream] = []
    while len(found) < count:
        prefix = [rng.randrange(2) for _ in range(rng.randrange(max_prefix + 1))]
        period = [rng.randrange(2) for _ in range(rng.randrange(2, max_period + 1))]
        s = BinaryStream.of(prefix, period)
        if s.is_interior and s not in found:
            found.append(s)
    return found
