"""Exact checks of the coherence, Frobenius and classical-structure laws.

Every law is a pair of parallel arrows built from a structure and zero to three
sampled endomorphisms of S.  Both sides are compared symbolically, so a pass is
a proof for that instance and a failure comes with the smallest input on which
the two sides disagree.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Sequence, Union

from . import pinj
from .pinj import AffineClause, PartialInjection
from .structure import (SelfSimilarStructure, convolution, internal_tensor, polycyclic_generators,
                        sigma_ss, tau_ss)
from .tensorcat import (S, TensorArrow, endo, first_difference, sigma, t_compose, t_dagger,
                        t_identity, t_tensor, tau)

Arrow = Union[PartialInjection, TensorArrow]
DEFAULT_SEED = 42
PAIR_COUNT = 16
TRIPLE_COUNT = 8
RANDOM_MAPS = 6


@dataclass(frozen=True)
class CheckReport:
    law: str
    status: str
    uses: str
    instances: int
    witness: Optional[dict] = None
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {"law": self.law, "status": self.status, "uses": self.uses,
                "instances": self.instances, "seed": self.seed, "witness": self.witness}


@dataclass(frozen=True)
class Law:
    name: str
    uses: str
    arity: int
    sides: Callable[..., tuple[Arrow, Arrow]] = field(repr=False)


def _c(*arrows: TensorArrow) -> TensorArrow:
    out = arrows[-1]
    for g in reversed(arrows[:-1]):
        out = t_compose(g, out)
    return out


def _x(ss: SelfSimilarStructure, f: PartialInjection, g: PartialInjection) -> PartialInjection:
    return internal_tensor(ss, f, g)


ONE = t_identity(S)
SS = S * S


# structure --------------------------------------------------------------

def _code_decode(ss):
    return t_compose(ss.code, ss.decode), ONE


def _decode_code(ss):
    return t_compose(ss.decode, ss.code), t_identity(SS)


def _dagger_pair(ss):
    return ss.decode, t_dagger(ss.code)


# coherence in S⊗ ---------------------------------------------------------

def _pentagon(ss):
    lhs = _c(t_tensor(tau(S, S, S), ONE), tau(S, S * S, S), t_tensor(ONE, tau(S, S, S)))
    return lhs, t_compose(tau(S * S, S, S), tau(S, S, S * S))


def _hexagon(ss):
    lhs = _c(tau(S, S, S), sigma(SS, S), tau(S, S, S))
    rhs = _c(t_tensor(sigma(S, S), ONE), tau(S, S, S), t_tensor(ONE, sigma(S, S)))
    return lhs, rhs


def _tau_unitary(ss):
    t = tau(S, S, S)
    return t_compose(t_dagger(t), t), t_identity(S * SS)


def _sigma_unitary(ss):
    s = sigma(S, S)
    return t_compose(t_dagger(s), s), t_identity(SS)


# coherence after convolution --------------------------------------------

def _pentagon_ss(ss):
    t, one = tau_ss(ss), pinj.identity()
    return pinj.compose(_x(ss, t, one), t, _x(ss, one, t)), pinj.compose(t, t)


def _hexagon_ss(ss):
    t, s, one = tau_ss(ss), sigma_ss(ss), pinj.identity()
    return pinj.compose(t, s, t), pinj.compose(_x(ss, s, one), t, _x(ss, one, s))


def _tau_ss_unitary(ss):
    t = tau_ss(ss)
    return pinj.compose(pinj.dagger(t), t), pinj.identity()


def _tau_ss_counitary(ss):
    t = tau_ss(ss)
    return pinj.compose(t, pinj.dagger(t)), pinj.identity()


def _sigma_ss_unitary(ss):
    s = sigma_ss(ss)
    return pinj.compose(pinj.dagger(s), s), pinj.identity()


def _sigma_ss_involution(ss):
    s = sigma_ss(ss)
    return pinj.compose(s, s), pinj.identity()


def _tau_ss_canonical(ss):
    return convolution(ss, tau(SS, S, S)), tau_ss(ss)


def _tau_ss_natural(ss, f, g, h):
    t = tau_ss(ss)
    lhs = pinj.compose(t, _x(ss, f, _x(ss, g, h)))
    return lhs, pinj.compose(_x(ss, _x(ss, f, g), h), t)


def _sigma_ss_natural(ss, f, g):
    s = sigma_ss(ss)
    return pinj.compose(s, _x(ss, f, g)), pinj.compose(_x(ss, g, f), s)


def _interchange(ss, f, g):
    lhs = _x(ss, pinj.compose(g, f), pinj.compose(f, g))
    return lhs, pinj.compose(_x(ss, g, f), _x(ss, f, g))


def _convolution_dagger(ss, f, g):
    a = t_tensor(endo(f), endo(g))
    return convolution(ss, t_dagger(a)), pinj.dagger(convolution(ss, a))


# Frobenius ----------------------------------------------------------------

def _lax_associativity(ss):
    lhs = _c(tau(S, S, S), t_tensor(ONE, ss.decode), ss.decode)
    rhs = _c(t_tensor(ss.decode, ONE), ss.decode, endo(tau_ss(ss)))
    return lhs, rhs


def _lax_coassociativity(ss):
    lhs = _c(endo(tau_ss(ss)), ss.code, t_tensor(ONE, ss.code))
    rhs = _c(ss.code, t_tensor(ss.code, ONE), tau(S, S, S))
    return lhs, rhs


def _lax_frobenius(ss):
    lhs = _c(t_tensor(ONE, ss.code), t_dagger(tau(S, S, S)), t_tensor(ss.decode, ONE))
    rhs = _c(ss.decode, endo(pinj.dagger(tau_ss(ss))), ss.code)
    return lhs, rhs


# classical ----------------------------------------------------------------

def _lax_cocommutativity(ss, f, g):
    lhs = _c(sigma(S, S), t_tensor(endo(g), endo(f)), ss.decode)
    rhs = _c(t_tensor(endo(f), endo(g)), ss.decode, endo(sigma_ss(ss)))
    return lhs, rhs


def _lax_commutativity(ss, f, g):
    lhs = t_compose(ss.code, t_tensor(endo(f), endo(g)))
    rhs = _c(endo(sigma_ss(ss)), ss.code, t_tensor(endo(g), endo(f)), sigma(S, S))
    return lhs, rhs


LAWS: dict[str, Law] = {law.name: law for law in [
    Law("code_decode", "code . decode = 1 on S", 0, _code_decode),
    Law("decode_code", "decode . code = 1 on S*S", 0, _decode_code),
    Law("decode_is_dagger", "decode = code^dagger", 0, _dagger_pair),
    Law("pentagon", "tau at four leaves of S*", 0, _pentagon),
    Law("hexagon", "tau(S,S,S), sigma(S*S,S), sigma(S,S)", 0, _hexagon),
    Law("tau_unitary", "tau(S,S,S)", 0, _tau_unitary),
    Law("sigma_unitary", "sigma(S,S)", 0, _sigma_unitary),
    Law("tau_ss_canonical", "conv(tau(S*S,S,S)) = tau_ss", 0, _tau_ss_canonical),
    Law("pentagon_ss", "tau_ss under the internal tensor", 0, _pentagon_ss),
    Law("hexagon_ss", "tau_ss, sigma_ss under the internal tensor", 0, _hexagon_ss),
    Law("tau_ss_unitary", "tau_ss^dagger . tau_ss = 1", 0, _tau_ss_unitary),
    Law("tau_ss_counitary", "tau_ss . tau_ss^dagger = 1", 0, _tau_ss_counitary),
    Law("sigma_ss_unitary", "sigma_ss^dagger . sigma_ss = 1", 0, _sigma_ss_unitary),
    Law("sigma_ss_involution", "sigma_ss . sigma_ss = 1", 0, _sigma_ss_involution),
    Law("tau_ss_natural", "tau_ss against sampled f, g, h", 3, _tau_ss_natural),
    Law("sigma_ss_natural", "sigma_ss against sampled f, g", 2, _sigma_ss_natural),
    Law("internal_tensor_interchange", "internal tensor against composition", 2, _interchange),
    Law("convolution_dagger", "conv(a^dagger) = conv(a)^dagger, a = f*g", 2, _convolution_dagger),
    Law("lax_associativity", "tau(S,S,S) and tau_ss", 0, _lax_associativity),
    Law("lax_coassociativity", "tau(S,S,S) and tau_ss", 0, _lax_coassociativity),
    Law("lax_frobenius", "tau(S,S,S)^-1 and tau_ss^-1", 0, _lax_frobenius),
    Law("strict_classical", "code . decode = 1 on S, strictly", 0, _code_decode),
    Law("lax_cocommutativity", "sigma(S,S) and sigma_ss, sampled f, g", 2, _lax_cocommutativity),
    Law("lax_commutativity", "sigma(S,S) and sigma_ss, sampled f, g", 2, _lax_commutativity),
]}

_STRUCTURE = ["code_decode", "decode_code", "decode_is_dagger"]
_COHERENCE = ["pentagon", "hexagon", "tau_unitary", "sigma_unitary", "tau_ss_canonical",
              "pentagon_ss", "hexagon_ss", "tau_ss_unitary", "tau_ss_counitary",
              "sigma_ss_unitary", "sigma_ss_involution", "tau_ss_natural", "sigma_ss_natural",
              "internal_tensor_interchange", "convolution_dagger"]
_FROBENIUS = ["lax_associativity", "lax_coassociativity", "lax_frobenius"]
_CLASSICAL = ["strict_classical", "lax_cocommutativity", "lax_commutativity"]

SUITES: dict[str, list[str]] = {
    "coherence": _COHERENCE,
    "frobenius": _STRUCTURE + _FROBENIUS + _COHERENCE,
    "classical": _CLASSICAL,
    "all": _STRUCTURE + _FROBENIUS + _COHERENCE + _CLASSICAL,
}


# samples --------------------------------------------------------------------

def random_map(rng: random.Random) -> PartialInjection:
    """A one-clause affine map with a few exceptional points below its start."""
    step, slope = rng.randint(1, 4), rng.randint(1, 4)
    start, value = rng.randint(0, 6), rng.randint(2, 8)
    clause = AffineClause.through(start, step, value, slope)
    keys = rng.sample(range(start), min(start, rng.randint(0, 2)))
    values = rng.sample(range(value), len(keys))
    return pinj.make(dict(zip(keys, values)), [clause])


def sample_maps(ss: SelfSimilarStructure, seed: int = DEFAULT_SEED) -> list[PartialInjection]:
    """Generators, their words up to length 3, the split idempotents, 1 and seeded random maps."""
    p, q = polycyclic_generators(ss)
    letters = [p, q, pinj.dagger(p), pinj.dagger(q)]
    found: list[PartialInjection] = []

    def add(f):
        if not f.is_empty() and f not in found:
            found.append(f)

    for length in (1, 2, 3):
        for word in product(letters, repeat=length):
            add(pinj.compose(*word))
    add(pinj.compose(p, letters[2]))
    add(pinj.compose(q, letters[3]))
    add(pinj.identity())
    rng = random.Random(seed)
    for _ in range(RANDOM_MAPS):
        add(random_map(rng))
    return found


def sample_pairs(maps: Sequence[PartialInjection], seed: int = DEFAULT_SEED,
                 count: int = PAIR_COUNT) -> list[tuple[PartialInjection, ...]]:
    p, q = maps[0], maps[1]
    fixed = [(p, p), (p, q), (pinj.compose(p, pinj.dagger(p)), pinj.compose(q, pinj.dagger(q)))]
    rng = random.Random(seed + 1)
    return fixed + [(rng.choice(maps), rng.choice(maps)) for _ in range(count)]


def sample_triples(maps: Sequence[PartialInjection], seed: int = DEFAULT_SEED,
                   count: int = TRIPLE_COUNT) -> list[tuple[PartialInjection, ...]]:
    rng = random.Random(seed + 2)
    return [(maps[0], maps[1], maps[-1])] + [tuple(rng.choice(maps) for _ in range(3)) for _ in range(count)]


# running ----------------------------------------------------------------------

def compare_sides(lhs: Arrow, rhs: Arrow) -> Optional[dict]:
    """Where two parallel arrows differ, or None when they are equal."""
    if isinstance(lhs, TensorArrow):
        return first_difference(lhs, rhs)
    n = pinj.first_difference(lhs, rhs)
    if n is None:
        return None
    return {"leaf": 0, "n": n, "lhs": pinj.apply(lhs, n), "rhs": pinj.apply(rhs, n)}


def check_instance(ss: SelfSimilarStructure, law: str, args: Sequence[PartialInjection] = ()) -> Optional[dict]:
    lhs, rhs = LAWS[law].sides(ss, *args)
    found = compare_sides(lhs, rhs)
    if found is not None:
        found["args"] = [f.inline() for f in args]
    return found


def run_law(ss: SelfSimilarStructure, law: str, seed: int = DEFAULT_SEED, samples=None) -> CheckReport:
    spec = LAWS[law]
    if spec.arity == 0:
        instances = [()]
    else:
        maps = samples if samples is not None else sample_maps(ss, seed)
        if spec.arity == 1:
            instances = [(f,) for f in maps]
        elif spec.arity == 2:
            instances = sample_pairs(maps, seed)
        else:
            instances = sample_triples(maps, seed)
    for args in instances:
        found = check_instance(ss, law, args)
        if found is not None:
            return CheckReport(law, "fail", spec.uses, len(instances), found, seed)
    return CheckReport(law, "pass", spec.uses, len(instances), None, seed)


def run_suite(ss: SelfSimilarStructure, suite: str = "all", seed: int = DEFAULT_SEED) -> list[CheckReport]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    maps = sample_maps(ss, seed)
    return [run_law(ss, name, seed, maps) for name in SUITES[suite]]


def check_coherence(ss, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    return run_suite(ss, "coherence", seed)


def check_lax_frobenius(ss, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    return run_suite(ss, "frobenius", seed)


def check_lax_classical(ss, samples: Optional[Sequence[PartialInjection]] = None,
                        seed: int = DEFAULT_SEED) -> list[CheckReport]:
    """The classical laws; ``samples`` replaces the default sample set."""
    maps = list(samples) if samples is not None else sample_maps(ss, seed)
    return [run_law(ss, name, seed, maps) for name in _CLASSICAL]


def replay(ss: SelfSimilarStructure, law: str, args: Sequence[str] = ()) -> Optional[dict]:
    """Re-run one law instance from the rendered arguments of a witness."""
    return check_instance(ss, law, [pinj.parse(a) for a in args])
