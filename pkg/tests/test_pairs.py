import itertools
import random

import pytest
from hypothesis import given, strategies as st

from autoqc.fsa import Fsa, equivalent, fsa_for_words
from autoqc.pairs import (
    NoImageError,
    NotUniqueError,
    PaddingError,
    PairAlphabet,
    PairError,
    PairFsa,
    compose,
    cross_pair,
    diagonal,
    lift_pair,
    pad_pair,
    pair_fsa_for_pairs,
    project,
    restrict,
    singleton_image,
    unpad_pair,
)
from autoqc.words import PAD, GeneratorAlphabet

AB = GeneratorAlphabet.from_generators(["a", "b"])
PAL = PairAlphabet(AB)
SHORT = [w for n in range(3) for w in itertools.product(AB.symbols, repeat=n)]
WORDS = st.lists(st.sampled_from(AB.symbols), max_size=8).map(tuple)


def all_words_fsa(alphabet):
    return Fsa(
        alphabet,
        1,
        [0],
        [0],
        [(0, s, 0) for s in alphabet.symbols],
        deterministic=True,
    )


def test_pair_alphabet_layout():
    assert len(PAL) == 5 * 5 - 1  # no all-pad label
    assert PAL.labels[0] == ("a", "a")
    assert PAL.labels[4] == ("a", PAD)  # pad sorts last within a row
    assert (PAD, PAD) not in PAL.labels
    assert PAL.label_index(("b", "a^")) == PAL.labels.index(("b", "a^"))


def test_pair_label_text():
    assert PAL.format_label(("a", PAD)) == "a:_"
    assert PAL.parse_label("b^:a") == ("b^", "a")
    with pytest.raises(PairError):
        PAL.parse_label("a")
    with pytest.raises(PairError):
        PAL.parse_label("_:_")
    with pytest.raises(PairError):
        PAL.parse_label("c:a")


@given(WORDS, WORDS)
def test_pad_unpad_roundtrip(w, u):
    assert unpad_pair(pad_pair(w, u)) == (w, u)


def test_unpad_rejects_ill_padded():
    with pytest.raises(PaddingError):
        unpad_pair([("a", PAD), ("a", "a")])  # second tape resumes
    with pytest.raises(PaddingError):
        unpad_pair([(PAD, "a"), ("a", "a")])
    with pytest.raises(PaddingError):
        unpad_pair([(PAD, PAD)])


def test_pairfsa_rejects_ill_padded_machine():
    bad = Fsa(
        PAL,
        3,
        [0],
        [2],
        [(0, ("a", PAD), 1), (1, ("a", "a"), 2)],
    )
    with pytest.raises(PaddingError):
        PairFsa(bad)
    # the same path made dead is fine: the check only minds accepting paths
    ok = Fsa(PAL, 3, [0], [0], [(0, ("a", PAD), 1), (1, ("a", "a"), 2)])
    assert PairFsa(ok).nstates == 3


def test_pair_fsa_for_pairs_exact():
    rel = [(("a",), ("b", "b")), ((), ("a^",)), (("a", "b"), ("a", "b"))]
    m = pair_fsa_for_pairs(AB, rel)
    for w, u in rel:
        assert m.accepts_pair(w, u)
    assert not m.accepts_pair(("a",), ("b",))
    assert not m.accepts_pair((), ())
    assert m.base is AB


def test_diagonal():
    lang = fsa_for_words(AB, [(), ("a",), ("a", "b")])
    d = diagonal(lang)
    for w in SHORT:
        for u in SHORT:
            assert d.accepts_pair(w, u) == (w == u and lang.accepts(w))


def test_lift_pair():
    lang = fsa_for_words(AB, [("a",), ("b", "b")])
    first = lift_pair(lang, "first")
    second = lift_pair(lang, "second")
    for w in SHORT:
        assert first.accepts_pair(w, ()) == lang.accepts(w)
        assert second.accepts_pair((), w) == lang.accepts(w)
        if w:
            assert not first.accepts_pair(w, ("a",))
    with pytest.raises(PairError):
        lift_pair(lang, "third")


def test_cross_pair_is_cartesian_product():
    l1 = fsa_for_words(AB, [("a",), ("a", "a")])
    l2 = fsa_for_words(AB, [(), ("b",)])
    c = cross_pair(l1, l2)
    for w in SHORT:
        for u in SHORT:
            assert c.accepts_pair(w, u) == (l1.accepts(w) and l2.accepts(u))


def brute_compose(r1, r2):
    return {(w, u) for w, v in r1 for v2, u in r2 if v == v2}


def random_relation(rng, max_pairs=5, max_len=3):
    def word():
        return tuple(
            rng.choice(AB.symbols) for _ in range(rng.randint(0, max_len))
        )

    return {(word(), word()) for _ in range(rng.randint(0, max_pairs))}


def test_compose_matches_relation_composition():
    rng = random.Random(7)
    for _ in range(25):
        r1 = random_relation(rng)
        r2 = random_relation(rng)
        want = brute_compose(r1, r2)
        got = compose(pair_fsa_for_pairs(AB, r1), pair_fsa_for_pairs(AB, r2))
        for w in SHORT:
            for u in SHORT:
                assert got.accepts_pair(w, u) == ((w, u) in want)


def test_compose_associative_on_samples():
    rng = random.Random(8)
    for _ in range(10):
        ms = [pair_fsa_for_pairs(AB, random_relation(rng)) for _ in range(3)]
        left = compose(compose(ms[0], ms[1]), ms[2])
        right = compose(ms[0], compose(ms[1], ms[2]))
        assert equivalent(left.fsa, right.fsa)


def test_compose_with_full_diagonal_is_identity():
    rng = random.Random(9)
    ident = diagonal(all_words_fsa(AB))
    for _ in range(10):
        r = pair_fsa_for_pairs(AB, random_relation(rng))
        assert equivalent(compose(r, ident).fsa, r.fsa)
        assert equivalent(compose(ident, r).fsa, r.fsa)


def test_project():
    rel = {(("a",), ("b", "b")), ((), ("a^",)), (("a", "b"), ())}
    m = pair_fsa_for_pairs(AB, rel)
    firsts = project(m, "first")
    seconds = project(m, "second")
    for w in SHORT:
        assert firsts.accepts(w) == any(p[0] == w for p in rel)
        assert seconds.accepts(w) == any(p[1] == w for p in rel)
    with pytest.raises(PairError):
        project(m, "both")


def test_restrict_filters_one_tape():
    rel = {(("a",), ("b",)), (("a", "a"), ("b",)), (("b",), ())}
    m = pair_fsa_for_pairs(AB, rel)
    lang = fsa_for_words(AB, [("a",), ("b",)])
    r1 = restrict(m, "first", lang)
    r2 = restrict(m, "second", lang)
    for w, u in rel:
        assert r1.accepts_pair(w, u) == lang.accepts(w)
        assert r2.accepts_pair(w, u) == lang.accepts(u)
    assert not r1.accepts_pair(("a", "b"), ("b",))
    with pytest.raises(PairError):
        restrict(m, "diag", lang)


def test_singleton_image():
    rel = pair_fsa_for_pairs(
        AB, [(("a",), ("b", "b")), (("b",), ()), ((), ("a",))]
    )
    assert singleton_image(rel, ("a",)) == ("b", "b")
    assert singleton_image(rel, ("b",)) == ()
    assert singleton_image(rel, ()) == ("a",)
    with pytest.raises(NoImageError):
        singleton_image(rel, ("a", "a"))


def test_singleton_image_reports_ambiguity():
    rel = pair_fsa_for_pairs(AB, [(("a",), ("b",)), (("a",), ("b", "b"))])
    with pytest.raises(NotUniqueError) as info:
        singleton_image(rel, ("a",))
    err = info.value
    assert err.word == ("a",)
    assert set(err.witnesses) == {("b",), ("b", "b")}


def test_minimized_preserves_pairs():
    rel = [(("a",), ("b", "b")), (("a", "b"), ("a", "b"))]
    m = pair_fsa_for_pairs(AB, rel).minimized()
    for w, u in rel:
        assert m.accepts_pair(w, u)
    assert m.fsa.deterministic
