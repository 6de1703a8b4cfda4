"""Partial injections on the natural numbers with exact, decidable equality.

A map is a finite table of exceptional points together with a finite set of
affine clauses.  A clause with domain modulus ``m``, residue ``r``, threshold
``t``, image modulus ``m'`` and offset ``r'`` sends every ``n >= t`` with
``n = r (mod m)`` to ``m' * (n - r) // m + r'``.

This class is closed under composition, converse and disjoint union, and every
member has a unique canonical form, so equality of maps is equality of their
canonical data.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Optional


class OverlapError(ValueError):
    """Two maps that were expected to be orthogonal share domain or image points."""


class NotInjectiveError(ValueError):
    """The supplied pieces do not describe a partial injection."""


@dataclass(frozen=True, order=True)
class AffineClause:
    dom_modulus: int
    dom_residue: int
    dom_threshold: int
    img_modulus: int
    img_offset: int

    def __post_init__(self):
        m, r, t = self.dom_modulus, self.dom_residue, self.dom_threshold
        if m < 1 or self.img_modulus < 1:
            raise ValueError(f"moduli must be positive: {self}")
        if not 0 <= r < m:
            raise ValueError(f"residue out of range: {self}")
        if t < r or (t - r) % m:
            raise ValueError(f"threshold must lie in the residue class: {self}")
        if self(t) < 0:
            raise ValueError(f"clause maps below zero: {self}")

    @classmethod
    def through(cls, start: int, step: int, value: int, slope: int) -> "AffineClause":
        """Clause sending ``start + step*k`` to ``value + slope*k`` for ``k >= 0``."""
        q, r = divmod(start, step)
        return cls(step, r, start, slope, value - slope * q)

    @property
    def start(self) -> int:
        return self.dom_threshold

    @property
    def first_value(self) -> int:
        return self(self.dom_threshold)

    def contains(self, n: int) -> bool:
        return n >= self.dom_threshold and (n - self.dom_residue) % self.dom_modulus == 0

    def __call__(self, n: int) -> int:
        return self.img_modulus * ((n - self.dom_residue) // self.dom_modulus) + self.img_offset

    def preimage(self, x: int) -> Optional[int]:
        k, rem = divmod(x - self.first_value, self.img_modulus)
        if rem or k < 0:
            return None
        return self.dom_threshold + self.dom_modulus * k

    def converse(self) -> "AffineClause":
        return AffineClause.through(self.first_value, self.img_modulus, self.dom_threshold, self.dom_modulus)

    def then(self, other: "AffineClause") -> Optional["AffineClause"]:
        """The clause ``other . self`` (apply ``self`` first), or None if nothing connects."""
        s1, m1, v1, a1 = self.dom_threshold, self.dom_modulus, self.first_value, self.img_modulus
        s2, m2, v2, a2 = other.dom_threshold, other.dom_modulus, other.first_value, other.img_modulus
        # solve a1*i = s2 - v1 (mod m2), with v1 + a1*i >= s2 and i >= 0
        d = gcd(a1, m2)
        diff = s2 - v1
        if diff % d:
            return None
        period = m2 // d
        i0 = (diff // d) * pow(a1 // d, -1, period) % period if period > 1 else 0
        lowest = max(0, -((v1 - s2) // a1))
        # least i >= lowest with i = i0 (mod period)
        i_min = i0 + period * max(0, -(-(lowest - i0) // period))
        j0 = (v1 + a1 * i_min - s2) // m2
        return AffineClause.through(s1 + m1 * i_min, m1 * period, v2 + a2 * j0, a2 * (a1 // d))

    def points(self, stop: int) -> Iterator[int]:
        return iter(range(self.dom_threshold, stop, self.dom_modulus))

    def render(self) -> str:
        sign = "+" if self.img_offset >= 0 else "-"
        return (f"(mod {self.dom_modulus}, res {self.dom_residue}, from {self.dom_threshold})"
                f" => k*{self.img_modulus} {sign} {abs(self.img_offset)}")


@dataclass(frozen=True)
class PartialInjection:
    """Canonical partial injection.  Build instances with :func:`make` or the helpers below."""

    exceptions: tuple[tuple[int, int], ...] = ()
    clauses: tuple[AffineClause, ...] = ()
    _table: dict = field(default_factory=dict, compare=False, repr=False, hash=False)
    _by_residue: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        self._table.update(self.exceptions)
        self._by_residue.update((c.dom_residue, c) for c in self.clauses)

    @property
    def modulus(self) -> int:
        """Common domain modulus of the clauses (1 when there are none)."""
        return self.clauses[0].dom_modulus if self.clauses else 1

    @property
    def bound(self) -> int:
        """Every input at or above this is handled by a clause or undefined for good."""
        keys = [n + 1 for n, _ in self.exceptions] + [c.dom_threshold for c in self.clauses]
        return max(keys, default=0)

    def __call__(self, n: int) -> Optional[int]:
        return apply(self, n)

    def __matmul__(self, other: "PartialInjection") -> "PartialInjection":
        return compose(self, other)

    @property
    def dagger(self) -> "PartialInjection":
        return dagger(self)

    def is_empty(self) -> bool:
        return not self.exceptions and not self.clauses

    def in_domain(self, n: int) -> bool:
        return apply(self, n) is not None

    def render(self) -> str:
        if self.is_empty():
            return "empty"
        lines = [f"{n}->{m}" for n, m in self.exceptions]
        lines += [c.render() for c in self.clauses]
        return "\n".join(lines)

    def inline(self) -> str:
        return self.render().replace("\n", "; ")

    def __str__(self) -> str:
        return self.inline()


def apply(f: PartialInjection, n: int) -> Optional[int]:
    """Value of ``f`` at ``n``, or None when ``n`` is outside the domain."""
    if n < 0:
        return None
    hit = f._table.get(n)
    if hit is not None:
        return hit
    if not f.clauses:
        return None
    c = f._by_residue.get(n % f.modulus)
    if c is not None and n >= c.dom_threshold:
        return c(n)
    return None


def _raw_apply(exceptions: Mapping[int, int], clauses: Iterable[AffineClause], n: int) -> Optional[int]:
    if n in exceptions:
        return exceptions[n]
    for c in clauses:
        if c.contains(n):
            return c(n)
    return None


def _shrink(modulus: int, tail: list) -> tuple[int, list]:
    """Drop prime factors from the modulus while the per-class affine maps allow it."""
    primes, rest, d = [], modulus, 2
    while d * d <= rest:
        if rest % d == 0:
            primes.append(d)
            while rest % d == 0:
                rest //= d
        d += 1
    if rest > 1:
        primes.append(rest)
    for p in primes:
        while modulus % p == 0:
            coarse = modulus // p
            merged = []
            for rho in range(coarse):
                parts = [tail[rho + j * coarse] for j in range(p)]
                if all(e is None for e in parts):
                    merged.append(None)
                    continue
                if any(e is None for e in parts):
                    break
                slope, base = parts[0]
                if slope % p or any(a != slope or b != base + j * (slope // p)
                                    for j, (a, b) in enumerate(parts)):
                    break
                merged.append((slope // p, base))
            else:
                modulus, tail = coarse, merged
                continue
            break
    return modulus, tail


def _canonical(exceptions: Mapping[int, int], clauses: list[AffineClause]) -> PartialInjection:
    if not clauses:
        return PartialInjection(tuple(sorted(exceptions.items())))
    modulus = lcm(*(c.dom_modulus for c in clauses))
    top = max(max(c.dom_threshold for c in clauses), max(exceptions, default=-1) + 1)
    # affine map on every class mod `modulus`: n = modulus*k + rho  ->  slope*k + base
    tail: list = [None] * modulus
    for c in clauses:
        mult = modulus // c.dom_modulus
        for j in range(mult):
            tail[c.dom_residue + j * c.dom_modulus] = (c.img_modulus * mult, c.img_modulus * j + c.img_offset)
    modulus, tail = _shrink(modulus, tail)

    below = dict(exceptions)
    for c in clauses:
        for n in c.points(top):
            below[n] = c(n)

    out = []
    covered = set()
    for rho, entry in enumerate(tail):
        if entry is None:
            continue
        slope, base = entry
        n = rho if rho >= top else rho + modulus * -(-(top - rho) // modulus)
        while n - modulus >= 0 and below.get(n - modulus) == slope * ((n - modulus - rho) // modulus) + base:
            n -= modulus
            covered.add(n)
        out.append(AffineClause(modulus, rho, n, slope, base))
    table = tuple(sorted((n, m) for n, m in below.items() if n not in covered))
    return PartialInjection(table, tuple(out))


def _overlapping(f_keys, f_clauses, g_keys, g_clauses) -> Optional[int]:
    """A witness point in both domains, or None when the domains are disjoint."""
    common = set(f_keys) & set(g_keys)
    if common:
        return min(common)
    for keys, clauses in ((f_keys, g_clauses), (g_keys, f_clauses)):
        for n in keys:
            if any(c.contains(n) for c in clauses):
                return n
    for c in f_clauses:
        for d in g_clauses:
            if (c.dom_residue - d.dom_residue) % gcd(c.dom_modulus, d.dom_modulus) == 0:
                # the two progressions meet infinitely often; find a point past both thresholds
                n = max(c.dom_threshold, d.dom_threshold)
                step = c.dom_modulus
                n += (c.dom_residue - n) % step
                while not d.contains(n):
                    n += step
                return n
    return None


def make(exceptions: Optional[Mapping[int, int]] = None, clauses: Iterable[AffineClause] = ()) -> PartialInjection:
    """Validate the pieces of a partial injection and return its canonical form."""
    exceptions = dict(exceptions or {})
    clauses = list(clauses)
    if any(n < 0 or m < 0 for n, m in exceptions.items()):
        raise NotInjectiveError("exception entries must be natural numbers")
    for i, c in enumerate(clauses):
        w = _overlapping(exceptions, clauses[i:i + 1], (), clauses[i + 1:])
        if w is not None:
            raise NotInjectiveError(f"domains overlap at {w}")
    if len(set(exceptions.values())) != len(exceptions):
        raise NotInjectiveError("two exceptions share an image point")
    inverse = {m: n for n, m in exceptions.items()}
    conv = [c.converse() for c in clauses]
    for i in range(len(conv)):
        w = _overlapping(inverse, conv[i:i + 1], (), conv[i + 1:])
        if w is not None:
            raise NotInjectiveError(f"images overlap at {w}")
    return _canonical(exceptions, clauses)


def identity() -> PartialInjection:
    return _IDENTITY


def empty() -> PartialInjection:
    return _EMPTY


def affine(start: int, step: int, value: int, slope: int) -> PartialInjection:
    """The map ``start + step*k -> value + slope*k`` on ``k >= 0``."""
    return _canonical({}, [AffineClause.through(start, step, value, slope)])


def from_pairs(pairs: Mapping[int, int]) -> PartialInjection:
    return make(pairs)


def compose(*maps: PartialInjection) -> PartialInjection:
    """``compose(g, f)`` is ``g`` after ``f``; longer argument lists nest the same way."""
    if not maps:
        return identity()
    result = maps[-1]
    for g in reversed(maps[:-1]):
        result = _compose2(g, result)
    return result


def _compose2(g: PartialInjection, f: PartialInjection) -> PartialInjection:
    if f.is_empty() or g.is_empty():
        return empty()
    exceptions = {}
    for n, x in f.exceptions:
        y = apply(g, x)
        if y is not None:
            exceptions[n] = y
    clauses = []
    for c in f.clauses:
        for x, y in g.exceptions:
            n = c.preimage(x)
            if n is not None:
                exceptions[n] = y
        if not g.clauses:
            continue
        # only g-classes hit by the image progression of c can connect
        mod_g = g.modulus
        cycle = mod_g // gcd(c.img_modulus, mod_g)
        v = c.first_value
        for i in range(cycle):
            d = g._by_residue.get((v + c.img_modulus * i) % mod_g)
            if d is None:
                continue
            joined = c.then(d)
            if joined is not None:
                clauses.append(joined)
    return _canonical(exceptions, _dedupe(clauses))


def _dedupe(clauses: list[AffineClause]) -> list[AffineClause]:
    return sorted(set(clauses))


def dagger(f: PartialInjection) -> PartialInjection:
    """The converse relation."""
    return _canonical({m: n for n, m in f.exceptions}, [c.converse() for c in f.clauses])


def domain_overlap(f: PartialInjection, g: PartialInjection) -> Optional[int]:
    """Least-effort witness of a common domain point, None when the domains are disjoint."""
    return _overlapping(dict(f.exceptions), f.clauses, dict(g.exceptions), g.clauses)


def image_overlap(f: PartialInjection, g: PartialInjection) -> Optional[int]:
    return _overlapping({m: n for n, m in f.exceptions}, [c.converse() for c in f.clauses],
                        {m: n for n, m in g.exceptions}, [c.converse() for c in g.clauses])


def orthogonal_union(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Union of two maps whose domains and images are disjoint."""
    if g.is_empty():
        return f
    if f.is_empty():
        return g
    w = domain_overlap(f, g)
    if w is not None:
        raise OverlapError(f"domains intersect at {w}")
    w = image_overlap(f, g)
    if w is not None:
        raise OverlapError(f"images intersect at {w}")
    return _canonical({**dict(f.exceptions), **dict(g.exceptions)}, list(f.clauses) + list(g.clauses))


def equal(f: PartialInjection, g: PartialInjection) -> bool:
    return f == g


def first_difference(f: PartialInjection, g: PartialInjection) -> Optional[int]:
    """Smallest input where the two maps disagree, or None if they are equal."""
    if f == g:
        return None
    # past both bounds each map is affine on classes of the common modulus;
    # two points per class decide agreement
    stop = max(f.bound, g.bound) + 2 * lcm(f.modulus, g.modulus)
    for n in range(stop):
        if apply(f, n) != apply(g, n):
            return n
    raise AssertionError("distinct canonical forms must differ below the search bound")


def restrict(f: PartialInjection, e: PartialInjection) -> PartialInjection:
    """``f`` restricted to the domain of the partial identity ``e``."""
    return compose(f, e)


def partial_identity_on(f: PartialInjection) -> PartialInjection:
    """The identity on the domain of ``f``."""
    return compose(dagger(f), f)


def graph(f: PartialInjection, stop: int) -> dict[int, int]:
    return {n: m for n in range(stop) if (m := apply(f, n)) is not None}


def parse(text: str) -> PartialInjection:
    """Read the textual notation produced by :meth:`PartialInjection.render`."""
    clause_re = re.compile(
        r"\(mod (\d+), res (\d+), from (\d+)\) => k\*(\d+) ([+-]) (\d+)$")
    exceptions, clauses = {}, []
    for raw in re.split(r"[;\n]", text):
        line = raw.strip()
        if not line or line == "empty":
            continue
        m = clause_re.match(line)
        if m:
            mod, res, start, slope, sign, off = m.groups()
            offset = int(off) if sign == "+" else -int(off)
            clauses.append(AffineClause(int(mod), int(res), int(start), int(slope), offset))
            continue
        if "->" in line:
            a, b = line.split("->")
            exceptions[int(a)] = int(b)
            continue
        raise ValueError(f"unreadable partial injection line: {line!r}")
    return make(exceptions, clauses)


_EMPTY = PartialInjection()
_IDENTITY = _canonical({}, [AffineClause(1, 0, 0, 1, 0)])
