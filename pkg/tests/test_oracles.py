import itertools

from helpers import data

from dyckcheck.grammar import load_grammar
from dyckcheck.oracles import (
    brute_tsn,
    enumerate_cfg,
    enumerate_trees,
    naive_height,
    naive_is_wf,
    naive_lcs,
    naive_lcsext,
    naive_nonnegative,
    naive_reduce,
    naive_wf_language,
)


def L(text):
    return tuple((tok[:-1], True) if tok.endswith("'") else (tok, False) for tok in text.split())


def test_naive_reduction():
    assert naive_reduce(L("a a b b' a'")) == L("a")
    assert naive_reduce(L("a' a")) == L("a' a")
    assert naive_height(L("a b' b'")) == -1
    assert naive_nonnegative(L("a a' b")) and not naive_nonnegative(L("a' a"))
    assert naive_is_wf(L("a b b'")) and not naive_is_wf(L("a b'"))
    assert not naive_wf_language([L("a"), L("a b'")])


def test_naive_suffixes():
    assert naive_lcs(["a", "baa"]) == ("a",)
    assert naive_lcs([]) is None
    assert naive_lcsext([]) == ("top",)
    assert naive_lcsext(["ab"]) == ("top",)
    assert naive_lcsext(["a", "baa"]) == ("omega", ("b", "a"))
    assert naive_lcsext(["ab", "cb"]) == ("finite", ())


def test_brute_tsn_prefers_small_subsets():
    assert brute_tsn(["a"]) == frozenset({("a",)})
    assert len(brute_tsn(["a", "ba", "ca", "da"])) == 2


def test_trees_examples():
    assert enumerate_trees({"g": 0}, 3) == [("g", ())]
    assert enumerate_trees({"f": 1, "g": 0}, 2) == [("g", ()), ("f", (("g", ()),))]
    assert enumerate_trees({"f": 2, "g": 0}, 2) == [("g", ()), ("f", (("g", ()), ("g", ())))]


def test_tree_counts():
    # t(d) = 1 + t(d - 1)^2 for one binary and one leaf symbol
    counts = [len(enumerate_trees({"f": 2, "g": 0}, d)) for d in range(1, 5)]
    assert counts == [1, 2, 5, 26]


def test_the_one_bounded_language():
    raw = load_grammar(data("the-one-n2.cfg"))
    words = enumerate_cfg(raw, 8, reduced=False).words
    assert words == {L("b b b b c"), L("a b b b b b' c")}
    for h in range(5, 14):
        k_max = (h - 5) // 2
        expected = {L(" ".join(["a"] * k + ["b"] * 4 + ["b'"] * k + ["c"])) for k in range(k_max + 1)}
        assert enumerate_cfg(raw, h, reduced=False).words == expected


def test_height_one_gives_constants():
    raw = load_grammar(data("dyck.cfg"))
    assert enumerate_cfg(raw, 1).words == {()}
    h2 = enumerate_cfg(raw, 2, reduced=False).words
    assert h2 == {(), L("a a'")}


def test_caps_flag_incompleteness():
    raw = load_grammar(data("dyck.cfg"))
    assert enumerate_cfg(raw, 5).complete
    assert not enumerate_cfg(raw, 6, reduced=False, cap=10).complete
    assert not enumerate_cfg(raw, 6, reduced=False, max_len=4).complete


def test_layers_grow():
    raw = load_grammar(data("dyck.cfg"))
    bl = enumerate_cfg(raw, 4, reduced=False)
    assert len(bl.layers) == 4
    assert all(a <= b for a, b in itertools.pairwise(bl.layers))
    assert bl.layers[-1] == bl.words
