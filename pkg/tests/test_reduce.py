from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from selfsimilar.grammar.reduce import (EVAL_LEFT, EVAL_RIGHT, INSTANTIATE, ReductionError,
                                        ReductionStuck, UnificationError, check_trace, combine, reduce)
from selfsimilar.grammar.types import (CONNECTIVE_PLACEHOLDER, LeftArrow, RightArrow, parse_type,
                                       substitute)

NP, S = parse_type("NP"), parse_type("S")
IV = parse_type("[NP -> S]")
TV = parse_type("[[NP -> S] <- NP]")
ADJ = parse_type("[NP <- NP]")
AND = parse_type("\\X. [[X -> X] <- X]")
C = CONNECTIVE_PLACEHOLDER

# the four contexts of a binary connective, each embedded in a whole sentence
CONNECTIVE_CORPUS = {
    "noun phrases": ([NP, TV, NP, AND, NP], NP),
    "transitive verbs": ([NP, TV, AND, TV, NP], TV),
    "adjectives": ([ADJ, ADJ, AND, ADJ, NP, IV], ADJ),
    "sentences": ([NP, TV, NP, AND, NP, TV, NP], S),
}

POSITIVE = [
    [NP, IV],
    [NP, TV, NP],
    [ADJ, NP, IV],
    [NP, TV, ADJ, ADJ, NP],
    [S],
    [S, AND, S],
    [NP, AND, NP, IV],
    [NP, C, NP, IV],
    [NP, IV, AND, NP, TV, NP, AND, NP],
] + [seq for seq, _ in CONNECTIVE_CORPUS.values()]

NEGATIVE = [
    [NP],
    [NP, NP],
    [IV, NP],
    [NP, TV],
    [TV, NP, NP],
    [NP, IV, NP],
    [ADJ],
    [NP, ADJ, IV],
    [NP, TV, NP, AND],
    [AND, NP, IV],
    [S, S],
]


def sub(types):
    return [AND if t == C else t for t in types]


def test_intransitive_sentence():
    trace = reduce([NP, IV])
    assert [s.rule for s in trace.steps] == [EVAL_LEFT]
    assert trace.final == S and trace.ambiguity == 1


def test_transitive_verb_takes_its_object_first():
    trace = reduce([NP, TV, NP])
    assert [(s.rule, s.position) for s in trace.steps] == [(EVAL_RIGHT, 1), (EVAL_LEFT, 0)]
    assert trace.steps[0].after == (NP, IV)


@pytest.mark.parametrize("context", sorted(CONNECTIVE_CORPUS))
def test_connective_contexts(context):
    seq, instance = CONNECTIVE_CORPUS[context]
    trace = reduce(seq)
    first = trace.steps[0]
    assert first.rule == INSTANTIATE
    assert dict(first.binding) == {"X": instance}
    assert first.after[seq.index(AND)] == substitute(AND, {"X": instance})
    assert trace.final == S
    check_trace(trace)


def test_noun_phrase_conjunction_steps():
    trace = reduce([NP, TV, NP, AND, NP])
    assert [s.label() for s in trace.steps] == [
        "ConnectiveInstantiation(X:=NP)", EVAL_RIGHT, EVAL_LEFT, EVAL_RIGHT, EVAL_LEFT]
    # the conjunction becomes one noun phrase before the verb sees it
    assert trace.steps[2].after == (NP, TV, NP)


def test_placeholder_takes_the_given_schema():
    trace = reduce([S, C, S], connective_schema=AND)
    assert trace.steps[0].label() == "ConnectiveInstantiation(X:=S)"
    with pytest.raises(ReductionStuck):
        reduce([S, C, S])


@pytest.mark.parametrize("seq", POSITIVE, ids=range(len(POSITIVE)))
def test_positive_corpus(seq):
    trace = reduce(seq, connective_schema=AND)
    assert trace.final == S
    check_trace(trace)


@pytest.mark.parametrize("seq", NEGATIVE, ids=range(len(NEGATIVE)))
def test_negative_corpus(seq):
    with pytest.raises(ReductionStuck):
        reduce(seq)


def test_stuck_reports_what_is_left():
    with pytest.raises(ReductionStuck) as err:
        reduce([NP, TV])
    assert err.value.remaining == (NP, TV) and err.value.position == 1
    with pytest.raises(ReductionStuck) as err:
        reduce([NP, IV, NP])
    assert err.value.remaining == (S, NP) and err.value.position == 2


def test_connective_contexts_that_disagree():
    with pytest.raises(UnificationError) as err:
        reduce([NP, AND, IV])
    assert err.value.position == 1
    assert err.value.left == (NP,) and err.value.right == (IV,)
    assert isinstance(err.value, ReductionError)


def test_bad_input():
    with pytest.raises(ReductionError):
        reduce([])
    with pytest.raises(ReductionError):
        reduce([NP, parse_type("\\X. \\Y. [[X -> Y] <- X]"), NP])


def test_ambiguity_is_counted():
    assert reduce([ADJ, ADJ, NP, IV]).ambiguity == 1
    # two conjunctions of sentences bracket either way; the leftmost split is
    # kept, so the first sentence is joined last
    trace = reduce([S, AND, S, AND, S])
    assert trace.ambiguity == 2
    assert trace.steps[-2].before == (S, substitute(AND, {"X": S}), S)


def test_check_trace_rejects_tampering():
    trace = reduce([NP, TV, NP])
    broken = type(trace)(trace.initial, trace.steps[::-1], trace.final, trace.ambiguity)
    with pytest.raises(ReductionError):
        check_trace(broken)


def test_render_lists_every_step():
    text = reduce([NP, TV, NP, AND, NP]).render()
    lines = text.splitlines()
    assert lines[0] == "NP  [[NP -> S] <- NP]  NP  [[X -> X] <- X]  NP"
    assert lines[1].startswith("ConnectiveInstantiation(X:=NP)")
    assert len(lines) == 6 and lines[-1].endswith(": S")


# oracle: search every rewrite order, with no chart ----------------------------

@lru_cache(maxsize=None)
def derivable(seq):
    """The set of single types a tuple of closed types can be rewritten to."""
    if len(seq) == 1:
        return frozenset(seq)
    found = set()
    for k in range(len(seq) - 1):
        for _, c in combine(seq[k], seq[k + 1]):
            found |= derivable(seq[:k] + (c,) + seq[k + 2:])
    return frozenset(found)


@lru_cache(maxsize=None)
def derivations(seq, target):
    """Number of binary bracketings of ``seq`` whose evaluation yields ``target``."""
    if len(seq) == 1:
        return int(seq[0] == target)
    total = 0
    for k in range(1, len(seq)):
        for a in derivable(seq[:k]):
            for b in derivable(seq[k:]):
                for _, c in combine(a, b):
                    if c == target:
                        total += derivations(seq[:k], a) * derivations(seq[k:], b)
    return total


POOL = [NP, S, IV, TV, ADJ, parse_type("[S <- NP]"), parse_type("[NP -> NP]")]


@given(st.lists(st.sampled_from(POOL), min_size=1, max_size=6))
def test_chart_agrees_with_exhaustive_rewriting(seq):
    seq = tuple(seq)
    expected = derivations(seq, S)
    if S in derivable(seq):
        trace = reduce(seq)
        check_trace(trace)
        assert trace.ambiguity == expected
    else:
        assert expected == 0
        with pytest.raises(ReductionStuck):
            reduce(seq)


def grow(draw_choices, depth):
    """Expand S into a grammatical sequence by undoing evaluations."""
    def expand(t, d):
        if d == 0 or not draw_choices:
            return [t]
        kind, arg = draw_choices.pop()
        if kind == 0:
            return expand(arg, d - 1) + expand(LeftArrow(arg, t), d - 1)
        return expand(RightArrow(t, arg), d - 1) + expand(arg, d - 1)
    return expand(S, depth)


@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from([NP, S, IV])), max_size=12),
       st.integers(1, 3))
def test_generated_sentences_reduce(choices, depth):
    seq = grow(list(choices), depth)
    trace = reduce(seq)
    assert trace.final == S
    check_trace(trace)
    assert trace.eval_count == len(seq) - 1
