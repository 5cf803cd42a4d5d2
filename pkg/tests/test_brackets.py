import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyckcheck.brackets import (
    BracketAlphabet,
    Letter,
    WordSyntaxError,
    format_word,
    from_parts,
    height,
    involute,
    is_nonnegative,
    is_wf,
    is_wwf,
    parse_word,
    reduce,
    split_wwf,
)
from dyckcheck.oracles import naive_height, naive_is_wf, naive_nonnegative, naive_reduce

letters = st.builds(Letter, st.sampled_from("abc"), st.booleans())
words = st.lists(letters, max_size=14).map(tuple)


def P(text):
    return parse_word(text)


def test_parse_and_format_round_trip():
    w = P("a b' _ c")
    assert w == (Letter("a"), Letter("b", True), Letter("c"))
    assert format_word(w) == "a b' c"
    assert format_word(()) == "_"
    assert parse_word("_") == ()


@pytest.mark.parametrize("bad", ["a''", "'", "a-b", "(a"])
def test_parse_rejects_bad_tokens(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_alphabet_checks_letters():
    alpha = BracketAlphabet(("a", "b"))
    assert alpha.word("a b'") == P("a b'")
    with pytest.raises(WordSyntaxError):
        alpha.word("c")
    with pytest.raises(ValueError):
        BracketAlphabet(("a", "a"))


def test_only_opener_then_closer_cancels():
    assert reduce(P("a a'")) == ()
    assert reduce(P("a' a")) == P("a' a")
    assert reduce(P("a b b' a'")) == ()
    assert reduce(P("a b' b a'")) == P("a b' b a'")
    assert reduce(P("b' a a a' b")) == P("b' a b")


def test_wwf_split():
    assert split_wwf(P("a' b' c d")) == (("b", "a"), ("c", "d"))
    assert split_wwf(P("a b'")) is None
    assert from_parts(("b", "a"), ("c",)) == P("a' b' c")
    assert is_wwf(P("a' a")) and not is_wf(P("a' a"))
    assert is_wf(P("a b b' c"))
    assert not is_nonnegative(P("a a' a'")) and is_nonnegative(P("a b' b"))


@given(words)
def test_reduce_matches_oracle(w):
    assert reduce(w) == naive_reduce(w)
    assert reduce(reduce(w)) == reduce(w)


@given(words, words)
def test_reduce_is_compatible_with_concatenation(u, v):
    assert reduce(u + v) == reduce(reduce(u) + reduce(v))


@given(words)
def test_predicates_match_oracle(w):
    assert height(w) == naive_height(w)
    assert is_nonnegative(w) == naive_nonnegative(w)
    assert is_wf(w) == naive_is_wf(w)
    assert is_wwf(w) == (split_wwf(w) is not None)


@given(words)
def test_involution_laws(w):
    assert involute(involute(w)) == w
    assert reduce(involute(w)) == involute(reduce(w))
    assert height(involute(w)) == -height(w)


@given(words)
def test_word_times_its_involution_cancels_exactly_for_wf_words(w):
    # rd(w) = u' v gives rd(w inv(w)) = u' u, which is empty iff u is
    assert (reduce(w + involute(w)) == ()) == is_wf(w)
    split = split_wwf(w)
    if split is not None:
        u = split[0]
        assert reduce(w + involute(w)) == from_parts(u, ()) + tuple(Letter(a) for a in u)
