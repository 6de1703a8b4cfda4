import pytest
from hypothesis import given, strategies as st

from selfsimilar.grammar.types import (Base, LeftArrow, RightArrow, Tensor, TypeSyntaxError, Unit, Var,
                                       free_vars, is_schema, parse_type, show, show_schema, substitute)

NP, S = Base("NP"), Base("S")

base = st.sampled_from([NP, S, Base("N"), Unit()])
types = st.recursive(base, lambda inner: st.one_of(
    st.builds(Tensor, inner, inner),
    st.builds(LeftArrow, inner, inner),
    st.builds(RightArrow, inner, inner)), max_leaves=8)


def test_parse_examples():
    assert parse_type("[NP -> S]") == LeftArrow(NP, S)
    assert parse_type("[[NP -> S] <- NP]") == RightArrow(LeftArrow(NP, S), NP)
    assert parse_type("NP * [NP -> S]") == Tensor(NP, LeftArrow(NP, S))
    assert parse_type("I") == Unit()
    assert parse_type("[NP → S]") == parse_type("[NP -> S]")
    assert parse_type("NP ⊗ NP") == Tensor(NP, NP)
    assert parse_type("[S ← NP]") == RightArrow(S, NP)


def test_schemas():
    for text in ("\\X. [[X -> X] <- X]", "ΛX.[[X → X] ← X]", "forall X. [[X -> X] <- X]"):
        t = parse_type(text)
        assert is_schema(t) and free_vars(t) == {"X"}
    t = parse_type("\\X. [[X -> X] <- X]")
    assert substitute(t, {"X": NP}) == RightArrow(LeftArrow(NP, NP), NP)
    assert show_schema(t) == "\\X. [[X -> X] <- X]"
    assert not is_schema(parse_type("[NP -> S]"))


def test_syntax_errors_carry_positions():
    with pytest.raises(TypeSyntaxError) as err:
        parse_type("NP * [NP -> S")
    assert err.value.position == 5
    for bad in ("", "[NP -> ]", "NP S", "[NP S]", "\\. X", "(NP"):
        with pytest.raises(TypeSyntaxError):
            parse_type(bad)


def test_variables_only_inside_schemas():
    # an unbound name is just another base type
    assert parse_type("[X -> X]") == LeftArrow(Base("X"), Base("X"))
    assert parse_type("\\X. [X -> Y]") == LeftArrow(Var("X"), Base("Y"))


@given(types)
def test_show_parse_round_trip(t):
    assert parse_type(show(t)) == t


@given(types, types)
def test_substitution_of_a_closed_type_is_identity(t, u):
    assert substitute(t, {"X": u}) == t
    assert free_vars(t) == set()
