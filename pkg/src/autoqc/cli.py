"""Command-line surface for the detection toolkit.

Exit codes are part of the contract: 0 for a positive decision (found,
member, equal, valid, empty, equivalent), 2 when a budget ran out with
the partial algorithm still running, 3 for a definite negative decision,
and 1 for usage or input errors.  Identical invocations print identical
bytes; when ``--report DIR`` is given, a TSV copy of the record plus
matplotlib figures (and any produced automata or graph dumps) land in
that directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .coset import CosetLimitError, SubgroupSpec, enumerate_cosets
from .detector import (
    DetectionBudget,
    detect_rational,
    generates as generates_group,
    member as member_of,
)
from .fsa import combine, inequivalence_witness, is_empty
from .fixtures import (
    cyclic_structure,
    s3_structure,
    shortlex_free,
    shortlex_free_abelian,
)
from .hyperbolic import HyperbolicContext, detect_quasiconvex
from .pairs import PairFsa
from .report import (
    detection_record,
    qc_record,
    render,
    render_tsv,
    tc_record,
    validation_record,
)
from .serialize import coset_to_text, fsa_from_text, fsa_to_text, structure_from_text
from .structure import AutomaticStructure
from .words import parse_presentation


class _Parser(argparse.ArgumentParser):
    # usage problems are exit code 1 in this tool, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _fixture(selector: str) -> AutomaticStructure:
    kind, _, arg = selector.partition(":")
    if kind == "free":
        return shortlex_free(int(arg or "2"))
    if kind == "zz" and not arg:
        return shortlex_free_abelian()
    if kind == "cyclic":
        return cyclic_structure(int(arg or "0"))
    if kind == "s3" and not arg:
        return s3_structure()
    raise ValueError(
        "unknown fixture %r (expected free:n | zz | cyclic:n | s3)" % selector
    )


def _load_structure(args) -> tuple[AutomaticStructure, str]:
    if bool(args.fixture) == bool(args.structure):
        raise ValueError("give exactly one of --fixture or --structure")
    if args.fixture:
        return _fixture(args.fixture), args.fixture
    with open(args.structure, "r", encoding="utf-8") as fh:
        loaded = structure_from_text(fh.read())
    return loaded, args.structure


def _load_presentation(args, structure: AutomaticStructure | None):
    if getattr(args, "presentation", None):
        with open(args.presentation, "r", encoding="utf-8") as fh:
            return parse_presentation(fh.read())
    if structure is not None and structure.presentation is not None:
        return structure.presentation
    raise ValueError("a presentation is required here; give --presentation")


def _budget(args) -> DetectionBudget:
    kwargs = {}
    if args.max_stage is not None:
        kwargs["max_stage"] = args.max_stage
    if args.max_states is not None:
        kwargs["max_states"] = args.max_states
    if args.max_cosets is not None:
        kwargs["max_cosets"] = args.max_cosets
    if args.timeout is not None:
        kwargs["wall_clock"] = args.timeout
    return DetectionBudget(**kwargs)


def _subgroup(args, structure: AutomaticStructure) -> SubgroupSpec:
    if args.subgroup is None:
        raise ValueError("this command needs --subgroup")
    return SubgroupSpec.parse(structure.alphabet, args.subgroup)


def _report_dir(args) -> str | None:
    outdir = getattr(args, "report", None)
    if outdir:
        os.makedirs(outdir, exist_ok=True)
    return outdir


def _write(outdir: str, name: str, text: str) -> None:
    with open(os.path.join(outdir, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def _finish(record: dict, outdir: str | None) -> dict:
    if outdir:
        _write(outdir, "report.tsv", render_tsv(record))
    return record


# -- commands ---------------------------------------------------------------


def _cmd_reduce(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    word = structure.alphabet.parse_word(args.word)
    form = structure.reduce_word(word)
    record = {
        "command": "reduce",
        "source": source,
        "word": structure.alphabet.format_word(word),
        "normal_form": structure.alphabet.format_word(form),
        "length": len(form),
    }
    return 0, _finish(record, _report_dir(args))


def _cmd_wp(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    first = structure.alphabet.parse_word(args.word)
    second = structure.alphabet.parse_word(args.other)
    equal = structure.word_problem(first, second)
    record = {
        "command": "wp",
        "source": source,
        "first": structure.alphabet.format_word(first),
        "second": structure.alphabet.format_word(second),
        "equal": equal,
    }
    return (0 if equal else 3), _finish(record, _report_dir(args))


def _cmd_detect_rational(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    presentation = _load_presentation(args, structure)
    sub = _subgroup(args, structure)
    outcome = detect_rational(
        structure, sub, budget=_budget(args), presentation=presentation
    )
    record = detection_record(outcome, args.subgroup, source)
    outdir = _report_dir(args)
    if outdir:
        if outcome.found:
            _write(outdir, "mh.fsa", fsa_to_text(outcome.m_h))
        from . import plots

        record["figures"] = plots.detection_figure(outcome, outdir)
    return (0 if outcome.found else 2), _finish(record, outdir)


def _cmd_member(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    sub = _subgroup(args, structure)
    word = structure.alphabet.parse_word(args.word)
    record = {
        "command": "member",
        "source": source,
        "subgroup": args.subgroup,
        "word": structure.alphabet.format_word(word),
    }
    outdir = _report_dir(args)
    m_h, code, how = _resolve_mh(args, structure, sub, record)
    if m_h is None:
        return code, _finish(record, outdir)
    record["mh_source"] = how
    inside = member_of(structure, m_h, word)
    record["member"] = inside
    return (0 if inside else 3), _finish(record, outdir)


def _cmd_generates(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    sub = _subgroup(args, structure)
    record = {
        "command": "generates",
        "source": source,
        "subgroup": args.subgroup,
    }
    outdir = _report_dir(args)
    m_h, code, how = _resolve_mh(args, structure, sub, record)
    if m_h is None:
        return code, _finish(record, outdir)
    record["mh_source"] = how
    whole, witness = generates_group(structure, m_h)
    record["generates"] = whole
    record["witness"] = (
        "" if witness is None else structure.alphabet.format_word(witness)
    )
    return (0 if whole else 3), _finish(record, outdir)


def _resolve_mh(args, structure, sub, record):
    """Either load the subgroup automaton from a file or detect it now."""
    if args.mh:
        with open(args.mh, "r", encoding="utf-8") as fh:
            machine = fsa_from_text(fh.read())
        if isinstance(machine, PairFsa):
            raise ValueError("the subgroup automaton must be a one-tape acceptor")
        if machine.alphabet != structure.alphabet:
            raise ValueError("subgroup automaton alphabet does not match")
        return machine, 0, args.mh
    presentation = _load_presentation(args, structure)
    outcome = detect_rational(
        structure, sub, budget=_budget(args), presentation=presentation
    )
    record["detect_stage"] = outcome.stage
    if not outcome.found:
        record["reason"] = outcome.reason
        return None, 2, ""
    return outcome.m_h, 0, "detected"


def _cmd_detect_qc(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    ctx = HyperbolicContext(
        structure, Fraction(args.delta), sample_depth=args.sample_depth
    )
    sub = _subgroup(args, structure)
    outcome = detect_quasiconvex(ctx, sub, budget=_budget(args))
    record = qc_record(outcome, args.subgroup, source, ctx.delta)
    outdir = _report_dir(args)
    if outdir:
        from . import plots

        record["figures"] = plots.qc_figure(outcome, outdir)
    return (0 if outcome.halted else 2), _finish(record, outdir)


def _cmd_tc(args) -> tuple[int, dict]:
    structure = None
    if args.fixture or args.structure:
        structure, source = _load_structure(args)
    else:
        source = args.presentation or ""
    presentation = _load_presentation(args, structure)
    if args.subgroup is None:
        raise ValueError("this command needs --subgroup")
    sub = SubgroupSpec.parse(presentation.alphabet, args.subgroup)
    budget = _budget(args)
    outdir = _report_dir(args)
    counts: list[int] = []
    complete = False
    reason = ""
    code = 0
    try:
        for snap in enumerate_cosets(presentation, sub, max_cosets=budget.max_cosets):
            counts.append(snap.nvertices)
            if outdir:
                _write(outdir, "stage_%04d.txt" % snap.stage, coset_to_text(snap))
            if snap.complete:
                complete = True
                break
            if args.max_stage is not None and snap.stage >= args.max_stage:
                reason = "stage budget: stopped after stage %d" % snap.stage
                code = 2
                break
    except CosetLimitError as exc:
        counts.append(exc.snapshot.nvertices)
        if outdir:
            _write(
                outdir, "stage_%04d.txt" % exc.snapshot.stage, coset_to_text(exc.snapshot)
            )
        reason = str(exc)
        code = 2
    record = tc_record(counts, complete, args.subgroup, source or "presentation", reason)
    if outdir:
        from . import plots

        record["figures"] = plots.tc_figure(counts, complete, outdir)
    return code, _finish(record, outdir)


def _cmd_fsa(args) -> tuple[int, dict]:
    machines = []
    for path in args.inputs:
        with open(path, "r", encoding="utf-8") as fh:
            machines.append(fsa_from_text(fh.read()))
    record: dict = {"command": "fsa", "op": args.op, "inputs": list(args.inputs)}
    unary = {"minimize", "complement", "empty"}
    needed = 1 if args.op in unary else 2
    if len(machines) != needed:
        raise ValueError("op %r takes exactly %d automata" % (args.op, needed))

    def plain(m):
        return m.fsa if isinstance(m, PairFsa) else m

    if args.op == "empty":
        empty = is_empty(plain(machines[0]))
        record["empty"] = empty
        return (0 if empty else 3), _finish(record, _report_dir(args))
    if args.op == "equivalent":
        a, b = plain(machines[0]), plain(machines[1])
        witness = inequivalence_witness(a, b)
        record["equivalent"] = witness is None
        if witness is not None:
            record["witness"] = " ".join(a.alphabet.format_label(x) for x in witness)
        return (0 if witness is None else 3), _finish(record, _report_dir(args))

    if args.op == "minimize":
        result = (
            machines[0].minimized()
            if isinstance(machines[0], PairFsa)
            else machines[0].minimize()
        )
    elif args.op == "complement":
        result = plain(machines[0]).complement()
    else:
        result = combine(plain(machines[0]), plain(machines[1]), args.op)
        if all(isinstance(m, PairFsa) for m in machines):
            result = PairFsa(result)
    if not args.out:
        raise ValueError("op %r needs --out for the result" % args.op)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(fsa_to_text(result))
    record["out"] = args.out
    record["states"] = result.nstates
    return 0, _finish(record, _report_dir(args))


def _cmd_validate(args) -> tuple[int, dict]:
    structure, source = _load_structure(args)
    verdict = structure.validate(sample_depth=args.sample_depth)
    record = validation_record(verdict, source)
    return (0 if verdict.ok else 3), _finish(record, _report_dir(args))


_COMMANDS = {
    "reduce": _cmd_reduce,
    "wp": _cmd_wp,
    "detect-rational": _cmd_detect_rational,
    "member": _cmd_member,
    "generates": _cmd_generates,
    "detect-qc": _cmd_detect_qc,
    "tc": _cmd_tc,
    "fsa": _cmd_fsa,
    "validate": _cmd_validate,
}


def _build_parser() -> _Parser:
    top = _Parser(prog="autoqc", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--fixture", help="built-in structure: free:n | zz | cyclic:n | s3")
    src.add_argument("--structure", help="path to a structure file")
    src.add_argument("--presentation", help="path to a presentation file")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--max-stage", type=int, default=None)
    budget.add_argument("--max-states", type=int, default=None)
    budget.add_argument("--max-cosets", type=int, default=None)
    budget.add_argument("--timeout", type=float, default=None, help="seconds")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--emit", choices=("text", "json"), default="text")
    out.add_argument("--report", help="directory for the TSV report and figures")

    def cmd(name, *parents, **kw):
        return sub.add_parser(name, parents=list(parents), **kw)

    p = cmd("reduce", src, out, help="normal form of a word")
    p.add_argument("--word", required=True)

    p = cmd("wp", src, out, help="do two words agree in the group?")
    p.add_argument("--word", required=True)
    p.add_argument("--other", default="")

    p = cmd("detect-rational", src, budget, out, help="stagewise subgroup detection")
    p.add_argument("--subgroup", required=True, help="words separated by ';'")

    p = cmd("member", src, budget, out, help="is a word's element in the subgroup?")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--mh", help="subgroup automaton file (skips detection)")

    p = cmd("generates", src, budget, out, help="does the subgroup exhaust the group?")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--mh", help="subgroup automaton file (skips detection)")

    p = cmd("detect-qc", src, budget, out, help="quasigeodesity prober")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--delta", required=True, help="thinness constant, e.g. 0 or 3/2")
    p.add_argument("--sample-depth", type=int, default=3)

    p = cmd("tc", src, budget, out, help="coset enumeration with snapshot dumps")
    p.add_argument("--subgroup", required=True)

    p = cmd("fsa", out, help="automaton file operations")
    p.add_argument("--op", required=True, choices=(
        "minimize", "complement", "intersection", "union", "difference",
        "equivalent", "empty",
    ))
    p.add_argument("inputs", nargs="+", help="automaton file(s)")
    p.add_argument("--out", help="result path for transforming ops")

    p = cmd("validate", src, out, help="check structure invariants")
    p.add_argument("--sample-depth", type=int, default=3)

    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        code, record = _COMMANDS[args.command](args)
    except (ValueError, LookupError, OSError, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    sys.stdout.write(render(record, args.emit))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
