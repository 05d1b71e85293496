import pytest

from autoqc.coset import SubgroupSpec
from autoqc.detector import (
    DetectionBudget,
    DetectorError,
    RationalExhausted,
    RationalFound,
    detect_rational,
    generates,
    member,
)
from autoqc.fsa import enumerate_upto, fsa_for_words
from autoqc.structure import AutomaticStructure
from autoqc.fixtures import shortlex_free

import oracles


def spec(structure, text):
    return SubgroupSpec.parse(structure.alphabet, text)


def test_budget_validation():
    with pytest.raises(ValueError):
        DetectionBudget(max_stage=0)
    with pytest.raises(ValueError):
        DetectionBudget(max_states=0)


def test_free_cyclic_subgroup(free2):
    out = detect_rational(free2, spec(free2, "a"))
    assert isinstance(out, RationalFound)
    assert out.found and out.stage == 1
    want = {("a",) * n for n in range(6)} | {("a^",) * n for n in range(1, 6)}
    assert set(enumerate_upto(out.m_h, 5)) == want


def test_free_subgroup_language_matches_folding(free2):
    gens = [("a", "a"), ("b",)]
    out = detect_rational(free2, SubgroupSpec(free2.alphabet, tuple(gens)))
    assert out.found
    graph = oracles.StallingsGraph(gens)
    for w in oracles.words_upto(free2.alphabet.symbols, 6):
        if w != oracles.reduce_free(w):
            continue  # only normal forms are eligible
        assert out.m_h.accepts(w) == graph.member(w), w


def test_trivial_subgroup(free2):
    out = detect_rational(free2, SubgroupSpec(free2.alphabet, ()))
    assert out.found
    assert enumerate_upto(out.m_h, 4) == [()]


def test_stage_stats_and_callback(free2):
    seen = []
    out = detect_rational(
        free2,
        spec(free2, "a b"),
        stage_callback=lambda graph, lang, st: seen.append(st),
    )
    assert out.found
    assert [st.stage for st in out.stats] == list(range(1, out.stage + 1))
    assert seen == list(out.stats)
    final = out.stats[-1]
    assert final.stable_count == 2  # both symmetrized generators
    assert final.witness is None


def test_distorted_subgroup_exhausts_stage_budget(zz):
    out = detect_rational(
        zz, spec(zz, "x y"), DetectionBudget(max_stage=20)
    )
    assert isinstance(out, RationalExhausted)
    assert not out.found
    assert out.reason == "stage budget"
    assert out.stage == 20 and len(out.stats) == 20
    assert out.last_language_states > 0
    # every unstable stage names a generator whose stability check failed
    assert all(st.witness is not None for st in out.stats)


def test_soundness_of_intermediate_languages(zz):
    harvested = []
    detect_rational(
        zz,
        spec(zz, "x y"),
        DetectionBudget(max_stage=8),
        stage_callback=lambda graph, lang, st: harvested.append(lang),
    )
    assert len(harvested) == 8
    for lang in harvested:
        for w in enumerate_upto(lang, 6):
            assert oracles.zz_member([(1, 1)], oracles.zz_exponents(w)), w


def test_finite_group_subgroups(s3):
    for text, order in [("a", 2), ("a b", 3), ("b a b", 2), ("", 1)]:
        out = detect_rational(s3, spec(s3, text))
        assert out.found
        words = enumerate_upto(out.m_h, 8)
        assert len(words) == order


def test_member(s3, free2):
    out = detect_rational(s3, spec(s3, "a b"))
    assert member(s3, out.m_h, ("a", "b"))
    assert member(s3, out.m_h, ("b", "a"))  # (ab)^2 = ba in S3
    assert member(s3, out.m_h, ())
    assert not member(s3, out.m_h, ("a",))

    free_out = detect_rational(free2, spec(free2, "a a; b"))
    assert member(free2, free_out.m_h, ("a", "a", "b"))
    assert member(free2, free_out.m_h, ("b^", "a", "a"))
    assert not member(free2, free_out.m_h, ("a",))
    assert not member(free2, free_out.m_h, ("a", "b", "a"))


def test_generates(s3, free2):
    whole = detect_rational(s3, spec(s3, "a; b"))
    ok, witness = generates(s3, whole.m_h)
    assert ok and witness is None

    part = detect_rational(s3, spec(s3, "a"))
    ok, witness = generates(s3, part.m_h)
    assert not ok
    assert witness == ("b",)  # shortlex-least element outside <a>

    # a^ is in <a> too, so the least outside element is b
    free_part = detect_rational(free2, spec(free2, "a"))
    assert generates(free2, free_part.m_h) == (False, ("b",))


def test_needs_presentation(free2):
    bare = AutomaticStructure(
        free2.alphabet, free2.acceptor, free2.equality, free2.multipliers
    )
    with pytest.raises(DetectorError):
        detect_rational(bare, spec(free2, "a"))
    out = detect_rational(bare, spec(free2, "a"), presentation=free2.presentation)
    assert out.found


def test_alphabet_mismatch(free2, zz):
    with pytest.raises(ValueError):
        detect_rational(free2, spec(zz, "x"))


def test_wall_clock_budget(zz):
    out = detect_rational(
        zz, spec(zz, "x y"), DetectionBudget(wall_clock=1e-9)
    )
    assert isinstance(out, RationalExhausted)
    assert "wall clock" in out.reason


def test_coset_budget(zz):
    out = detect_rational(
        zz, spec(zz, "x y"), DetectionBudget(max_cosets=4)
    )
    assert isinstance(out, RationalExhausted)
    assert out.reason.startswith("coset budget")


def test_detection_on_reseated_structure():
    base = shortlex_free(1)
    moved = base.reseat_identity(("a", "a^"))
    out = detect_rational(moved, SubgroupSpec.parse(moved.alphabet, "a a"))
    assert out.found
    # the detector works over the normalized language: empty word is back
    assert out.m_h.accepts(())
    assert out.m_h.accepts(("a", "a"))
    assert not out.m_h.accepts(("a",))
    assert member(moved, out.m_h, ("a", "a", "a", "a"))
    assert not member(moved, out.m_h, ("a",))
