from math import lcm

import pytest
from hypothesis import given, settings

import oracle
from selfsimilar import pinj
from selfsimilar.pinj import AffineClause, NotInjectiveError, OverlapError
from strategies import maps

P = pinj.affine(0, 1, 0, 2)      # n -> 2n
Q = pinj.affine(0, 1, 1, 2)      # n -> 2n + 1
ID = pinj.identity()
EMPTY = pinj.empty()


def test_apply_examples():
    assert pinj.apply(ID, 7) == 7
    assert pinj.apply(P, 3) == 6
    assert pinj.apply(EMPTY, 5) is None
    assert pinj.apply(P, -1) is None


def test_compose_q_after_p():
    qp = pinj.compose(Q, P)
    assert qp == pinj.affine(0, 1, 1, 4)
    assert oracle.table(qp) == {n: 4 * n + 1 for n in range(oracle.WINDOW)}
    assert oracle.table(qp) == oracle.composed_table(Q, P)


def test_orthogonal_generators():
    assert pinj.compose(pinj.dagger(P), Q) == EMPTY
    assert pinj.compose(pinj.dagger(Q), P) == EMPTY
    assert pinj.compose(pinj.dagger(P), P) == ID
    assert pinj.compose(pinj.dagger(Q), Q) == ID


def test_dagger_of_doubling():
    half = pinj.dagger(P)
    assert oracle.table(half) == {n: n // 2 for n in range(0, oracle.WINDOW, 2)}
    assert pinj.dagger(ID) == ID


def test_split_idempotents_cover_everything():
    pp = pinj.compose(P, pinj.dagger(P))
    qq = pinj.compose(Q, pinj.dagger(Q))
    assert pinj.orthogonal_union(pp, qq) == ID


def test_union_of_generators_overlaps():
    # both generators are total, so their graphs share the domain point 0
    with pytest.raises(OverlapError):
        pinj.orthogonal_union(P, Q)


def test_union_of_converse_generators_overlaps_on_images():
    # the converses have disjoint domains (evens, odds) and equal images, so
    # the union is refused; the halves with images moved apart are fine
    with pytest.raises(OverlapError):
        pinj.orthogonal_union(pinj.dagger(P), pinj.dagger(Q))
    half_even = pinj.dagger(P)
    shifted_odd = pinj.compose(P, pinj.dagger(Q))      # 2k+1 -> 2k
    assert pinj.domain_overlap(half_even, shifted_odd) is None


def test_union_with_empty_and_self():
    f = pinj.make({0: 5}, [AffineClause.through(3, 2, 7, 3)])
    assert pinj.orthogonal_union(f, EMPTY) == f
    assert pinj.orthogonal_union(EMPTY, f) == f
    with pytest.raises(OverlapError):
        pinj.orthogonal_union(P, P)


def test_equal_examples():
    assert pinj.equal(pinj.compose(pinj.dagger(P), P), ID)
    assert not pinj.equal(P, Q)
    assert pinj.first_difference(P, Q) == 0
    assert pinj.equal(Q, Q)


def test_make_rejects_non_injective_data():
    with pytest.raises(NotInjectiveError):
        pinj.make({0: 1, 1: 1})
    with pytest.raises(NotInjectiveError):
        pinj.make({}, [AffineClause.through(0, 1, 0, 1), AffineClause.through(0, 2, 100, 1)])
    with pytest.raises(NotInjectiveError):
        pinj.make({}, [AffineClause.through(0, 2, 0, 1), AffineClause.through(1, 2, 0, 1)])


def test_clause_invariants():
    with pytest.raises(ValueError):
        AffineClause(0, 0, 0, 1, 0)
    with pytest.raises(ValueError):
        AffineClause(3, 3, 3, 1, 0)
    with pytest.raises(ValueError):
        AffineClause(3, 1, 2, 1, 0)
    c = AffineClause.through(7, 3, 2, 5)
    assert (c.dom_modulus, c.dom_residue, c.dom_threshold) == (3, 1, 7)
    assert c(7) == 2 and c(10) == 7
    assert c.converse()(c(13)) == 13


def test_canonical_form_is_unique():
    split = pinj.orthogonal_union(pinj.affine(0, 2, 0, 4), pinj.affine(1, 2, 2, 4))
    assert split == P
    assert split.clauses == P.clauses
    # exceptions that continue a clause are folded back into it
    assert pinj.make({0: 0, 1: 2}, [AffineClause.through(2, 1, 4, 2)]) == P


def test_negative_offsets_keep_converses_closed():
    pred = pinj.dagger(pinj.affine(0, 1, 1, 1))
    assert pinj.apply(pred, 0) is None
    assert pinj.apply(pred, 1) == 0
    assert pred.render() == "(mod 1, res 0, from 1) => k*1 - 1"


def test_big_integers_do_not_wrap():
    big = 10**30
    f = pinj.affine(big, 3, big * 7, 11)
    g = pinj.compose(pinj.dagger(f), f)
    assert pinj.apply(f, big + 3) == big * 7 + 11
    assert pinj.apply(g, big + 3 * 10**20) == big + 3 * 10**20
    assert pinj.apply(g, big - 1) is None


def test_render_and_parse():
    f = pinj.make({0: 9, 2: 4}, [AffineClause.through(3, 2, 10, 3)])
    text = f.render()
    assert pinj.parse(text) == f
    assert pinj.parse(f.inline()) == f
    assert pinj.parse("empty") == EMPTY
    with pytest.raises(ValueError):
        pinj.parse("nonsense")


@given(maps, maps)
def test_compose_matches_pointwise(g, f):
    assert oracle.table(pinj.compose(g, f)) == oracle.composed_table(g, f)


@given(maps)
def test_dagger_matches_converse(f):
    assert oracle.table(pinj.dagger(f)) == oracle.converse_table(f)


@given(maps, maps)
def test_union_matches_pointwise_union(f, g):
    if pinj.domain_overlap(f, g) is not None or pinj.image_overlap(f, g) is not None:
        with pytest.raises(OverlapError):
            pinj.orthogonal_union(f, g)
        return
    both = {**oracle.table(f), **oracle.table(g)}
    assert oracle.table(pinj.orthogonal_union(f, g)) == both


@given(maps, maps)
def test_overlap_witnesses_are_real(f, g):
    w = pinj.domain_overlap(f, g)
    if w is not None:
        assert pinj.apply(f, w) is not None and pinj.apply(g, w) is not None
    else:
        tf, tg = oracle.table(f, 2000), oracle.table(g, 2000)
        assert not set(tf) & set(tg)


@given(maps, maps, maps)
def test_associativity(f, g, h):
    assert pinj.compose(h, pinj.compose(g, f)) == pinj.compose(pinj.compose(h, g), f)


@given(maps, maps)
def test_dagger_laws(f, g):
    assert pinj.dagger(pinj.dagger(f)) == f
    assert pinj.dagger(pinj.compose(g, f)) == pinj.compose(pinj.dagger(f), pinj.dagger(g))


@given(maps)
def test_restricted_idempotents(f):
    assert pinj.compose(f, pinj.dagger(f), f) == f
    e = pinj.partial_identity_on(f)
    assert pinj.compose(e, e) == e
    assert pinj.compose(f, ID) == f == pinj.compose(ID, f)


@given(maps)
def test_canonicalize_is_idempotent(f):
    assert pinj.make(dict(f.exceptions), f.clauses) == f
    assert pinj.parse(f.render()) == f


@given(maps, maps)
@settings(max_examples=60)
def test_equality_is_decided_on_the_finite_window(f, g):
    stop = f.bound + g.bound + 2 * lcm(f.modulus, g.modulus)
    same_on_window = oracle.table(f, stop) == oracle.table(g, stop)
    assert (f == g) == same_on_window
    if f == g:
        assert oracle.table(f) == oracle.table(g)
