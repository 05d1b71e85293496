import json

import pytest

from autoqc.cli import main
from autoqc.fixtures import shortlex_free
from autoqc.fsa import combine, fsa_for_words
from autoqc.serialize import fsa_to_text, structure_to_text
from autoqc.structure import AutomaticStructure


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_reduce_text(capsys):
    code, out, err = run(
        capsys, "reduce", "--fixture", "free:2", "--word", "a b b^ a"
    )
    assert code == 0 and err == ""
    assert "normal_form\ta a\n" in out
    assert "length\t2\n" in out


def test_reduce_json(capsys):
    code, out, _ = run(
        capsys, "reduce", "--fixture", "zz", "--word", "y x", "--emit", "json"
    )
    assert code == 0
    record = json.loads(out)
    assert record["normal_form"] == "x y"
    assert record["command"] == "reduce"


def test_wp_exit_codes(capsys):
    code, out, _ = run(
        capsys, "wp", "--fixture", "zz", "--word", "x y", "--other", "y x"
    )
    assert code == 0 and "equal\ttrue" in out
    code, out, _ = run(capsys, "wp", "--fixture", "free:2", "--word", "a b",
                       "--other", "b a")
    assert code == 3 and "equal\tfalse" in out


def test_detect_rational_found(capsys):
    code, out, _ = run(
        capsys, "detect-rational", "--fixture", "free:2", "--subgroup", "a"
    )
    assert code == 0
    assert "found\ttrue" in out
    assert "stage\t1" in out


def test_detect_rational_exhausted(capsys):
    code, out, _ = run(
        capsys,
        "detect-rational", "--fixture", "zz", "--subgroup", "x y",
        "--max-stage", "5",
    )
    assert code == 2
    assert "found\tfalse" in out
    assert "reason\tstage budget" in out


def test_detect_rational_is_deterministic(capsys):
    argv = (
        "detect-rational", "--fixture", "zz", "--subgroup", "x y",
        "--max-stage", "5", "--emit", "json",
    )
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    json.loads(first[1])


def test_detect_rational_report_files(capsys, tmp_path):
    outdir = tmp_path / "rep"
    code, out, _ = run(
        capsys,
        "detect-rational", "--fixture", "free:2", "--subgroup", "a a; b",
        "--report", str(outdir),
    )
    assert code == 0
    report = (outdir / "report.tsv").read_text()
    assert any(
        line.startswith("found\ttrue") for line in report.splitlines()
    )
    assert (outdir / "mh.fsa").exists()
    png = outdir / "stages.png"
    assert png.exists() and png.stat().st_size > 500


def test_member_roundtrip_through_mh_file(capsys, tmp_path):
    outdir = tmp_path / "rep"
    run(
        capsys,
        "detect-rational", "--fixture", "free:2", "--subgroup", "a a; b",
        "--report", str(outdir),
    )
    mh = str(outdir / "mh.fsa")
    code, out, _ = run(
        capsys,
        "member", "--fixture", "free:2", "--subgroup", "a a; b",
        "--word", "b a a", "--mh", mh,
    )
    assert code == 0 and "member\ttrue" in out and "mh_source\t%s" % mh in out
    code, out, _ = run(
        capsys,
        "member", "--fixture", "free:2", "--subgroup", "a a; b",
        "--word", "a", "--mh", mh,
    )
    assert code == 3 and "member\tfalse" in out


def test_member_inline_detection(capsys):
    code, out, _ = run(
        capsys,
        "member", "--fixture", "s3", "--subgroup", "a b", "--word", "b a",
    )
    assert code == 0
    assert "mh_source\tdetected" in out


def test_member_exhausted_detection(capsys):
    code, out, _ = run(
        capsys,
        "member", "--fixture", "zz", "--subgroup", "x y", "--word", "x y",
        "--max-stage", "4",
    )
    assert code == 2
    assert "reason\tstage budget" in out


def test_generates(capsys):
    code, out, _ = run(
        capsys, "generates", "--fixture", "s3", "--subgroup", "a; b"
    )
    assert code == 0 and "generates\ttrue" in out
    code, out, _ = run(capsys, "generates", "--fixture", "s3", "--subgroup", "a")
    assert code == 3
    assert "witness\tb" in out


def test_detect_qc_halts(capsys):
    code, out, _ = run(
        capsys,
        "detect-qc", "--fixture", "free:2", "--subgroup", "a b a^; b",
        "--delta", "0",
    )
    assert code == 0
    assert "halted\ttrue" in out
    assert "lambda\t2" in out
    assert "distortion\t4" in out
    assert "epsilon\t0" in out
    assert "degenerate_delta\ttrue" in out


def test_detect_qc_exhausts(capsys):
    code, out, _ = run(
        capsys,
        "detect-qc", "--fixture", "free:2", "--subgroup", "a",
        "--delta", "1", "--max-states", "40",
    )
    assert code == 2
    assert "halted\tfalse" in out
    assert "lambda_trace\t1" in out


def test_detect_qc_fractional_delta(capsys, tmp_path):
    outdir = tmp_path / "qc"
    code, out, _ = run(
        capsys,
        "detect-qc", "--fixture", "free:2", "--subgroup", "a a; b b",
        "--delta", "0", "--report", str(outdir), "--emit", "json",
    )
    assert code == 0
    record = json.loads(out)
    assert record["lambda"] == "1"
    assert (outdir / "quasigeodesity.png").stat().st_size > 500
    assert (outdir / "report.tsv").exists()


def test_tc_complete(capsys, tmp_path):
    outdir = tmp_path / "tc"
    code, out, _ = run(
        capsys,
        "tc", "--fixture", "s3", "--subgroup", "a", "--report", str(outdir),
    )
    assert code == 0
    assert "complete\ttrue" in out
    assert "final_vertices\t3" in out
    assert (outdir / "stage_0001.txt").exists()
    assert (outdir / "cosets.png").stat().st_size > 500


def test_tc_stage_capped(capsys):
    code, out, _ = run(
        capsys,
        "tc", "--fixture", "zz", "--subgroup", "x y", "--max-stage", "4",
    )
    assert code == 2
    assert "complete\tfalse" in out
    assert "stage budget" in out


def test_tc_coset_capped(capsys):
    code, out, _ = run(
        capsys,
        "tc", "--fixture", "zz", "--subgroup", "x", "--max-cosets", "6",
    )
    assert code == 2
    assert "coset cap 6 exceeded" in out


def test_tc_from_presentation_file(capsys, tmp_path):
    pres = tmp_path / "group.txt"
    pres.write_text("gens a b\nselfinv a b\nrel a b a b a b\n")
    code, out, _ = run(
        capsys, "tc", "--presentation", str(pres), "--subgroup", "a"
    )
    assert code == 0
    assert "final_vertices\t3" in out


def test_fsa_pipeline(capsys, tmp_path):
    free1 = shortlex_free(1)
    one = tmp_path / "one.fsa"
    other = tmp_path / "other.fsa"
    one.write_text(fsa_to_text(fsa_for_words(free1.alphabet, [("a",), ()])))
    other.write_text(fsa_to_text(fsa_for_words(free1.alphabet, [("a",)])))
    both = tmp_path / "inter.fsa"

    code, out, _ = run(
        capsys,
        "fsa", "--op", "intersection", str(one), str(other),
        "--out", str(both),
    )
    assert code == 0 and both.exists()

    code, out, _ = run(capsys, "fsa", "--op", "equivalent", str(both), str(other))
    assert code == 0 and "equivalent\ttrue" in out

    code, out, _ = run(capsys, "fsa", "--op", "equivalent", str(one), str(other))
    assert code == 3
    assert "witness\t" in out  # the empty word separates them

    code, out, _ = run(capsys, "fsa", "--op", "empty", str(one))
    assert code == 3
    diff = tmp_path / "diff.fsa"
    code, out, _ = run(
        capsys, "fsa", "--op", "difference", str(other), str(one),
        "--out", str(diff),
    )
    assert code == 0
    code, out, _ = run(capsys, "fsa", "--op", "empty", str(diff))
    assert code == 0 and "empty\ttrue" in out


def test_fsa_minimize_writes_det_machine(capsys, tmp_path):
    free1 = shortlex_free(1)
    src = tmp_path / "src.fsa"
    m = combine(
        fsa_for_words(free1.alphabet, [("a",)]),
        fsa_for_words(free1.alphabet, [("a",), ("a", "a")]),
        "union",
    )
    src.write_text(fsa_to_text(m))
    out_path = tmp_path / "min.fsa"
    code, out, _ = run(
        capsys, "fsa", "--op", "minimize", str(src), "--out", str(out_path)
    )
    assert code == 0
    assert "det" in out_path.read_text().splitlines()


def test_fsa_usage_errors(capsys, tmp_path):
    free1 = shortlex_free(1)
    src = tmp_path / "m.fsa"
    src.write_text(fsa_to_text(fsa_for_words(free1.alphabet, [("a",)])))
    code, _, err = run(capsys, "fsa", "--op", "minimize", str(src))
    assert code == 1 and "needs --out" in err
    code, _, err = run(capsys, "fsa", "--op", "minimize", str(src), str(src),
                       "--out", str(tmp_path / "x.fsa"))
    assert code == 1 and "exactly 1" in err
    code, _, err = run(capsys, "fsa", "--op", "empty", str(tmp_path / "no.fsa"))
    assert code == 1


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "--fixture", "s3")
    assert code == 0
    assert "ok\ttrue" in out
    assert "uniqueness_ok\ttrue" in out


def test_validate_flags_broken_structure(capsys, tmp_path):
    free2 = shortlex_free(2)
    fat = combine(
        free2.acceptor, fsa_for_words(free2.alphabet, [("b", "b^")]), "union"
    )
    broken = AutomaticStructure(
        free2.alphabet, fat, free2.equality, free2.multipliers,
        presentation=free2.presentation,
    )
    path = tmp_path / "broken.txt"
    path.write_text(structure_to_text(broken))
    code, out, _ = run(capsys, "validate", "--structure", str(path))
    assert code == 3
    assert "ok\tfalse" in out
    assert "counterexamples" in out


def test_usage_errors(capsys):
    code, _, err = run(capsys, "reduce", "--fixture", "nope", "--word", "a")
    assert code == 1 and "unknown fixture" in err

    code, _, err = run(capsys, "reduce", "--word", "a")
    assert code == 1 and "exactly one of" in err

    code, _, err = run(
        capsys, "reduce", "--fixture", "free:2", "--word", "a q"
    )
    assert code == 1 and "not in alphabet" in err

    code, _, err = run(capsys, "validate", "--structure", "/no/such/file")
    assert code == 1

    with pytest.raises(SystemExit) as info:
        main(["reduce", "--fixture", "free:2"])  # --word is required
    assert info.value.code == 1
    capsys.readouterr()

    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    capsys.readouterr()


def test_cyclic_fixture_selector(capsys):
    code, out, _ = run(capsys, "reduce", "--fixture", "cyclic:5", "--word",
                       "a a a a a a")
    assert code == 0 and "normal_form\ta\n" in out
