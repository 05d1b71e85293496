"""Deterministic report records and their two renderings.

Every command produces a flat record: scalar values, lists of scalars,
or one level of string-keyed sub-records.  Rationals are written as
``p/q`` strings so both renderings are byte-stable across runs; nothing
here ever consults the clock or the environment.
"""

from __future__ import annotations

import json
from fractions import Fraction


def rational(x) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render_json(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def render_tsv(record: dict) -> str:
    rows: list[tuple[str, str]] = []
    for key, value in record.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                rows.append(("%s.%s" % (key, sub), _scalar(v)))
        elif isinstance(value, (list, tuple)):
            rows.append((key, " ".join(_scalar(v) for v in value)))
        else:
            rows.append((key, _scalar(value)))
    rows.sort()
    return "".join("%s\t%s\n" % row for row in rows)


def render(record: dict, emit: str) -> str:
    if emit == "json":
        return render_json(record)
    if emit == "text":
        return render_tsv(record)
    raise ValueError("unknown emit format %r" % emit)


def detection_record(outcome, subgroup_text: str, source: str) -> dict:
    """Record for a coset-stage detection run (found or exhausted)."""
    record = {
        "command": "detect-rational",
        "source": source,
        "subgroup": subgroup_text,
        "found": outcome.found,
        "stage": outcome.stage,
        "stages": [
            "%d:%d:%d:%d"
            % (st.stage, st.graph_vertices, st.language_states, st.stable_count)
            for st in outcome.stats
        ],
    }
    if outcome.found:
        record["mh_states"] = outcome.m_h.nstates
    else:
        record["reason"] = outcome.reason
        record["last_language_states"] = outcome.last_language_states
    return record


def qc_record(outcome, subgroup_text: str, source: str, delta) -> dict:
    """Record for a quasigeodesity-prober run."""
    record = {
        "command": "detect-qc",
        "source": source,
        "subgroup": subgroup_text,
        "delta": rational(delta),
        "halted": outcome.halted,
        "stage": outcome.stage,
    }
    if outcome.halted:
        record.update(
            {
                "lambda": rational(outcome.lam),
                "distortion": rational(outcome.distortion),
                "epsilon": rational(outcome.epsilon),
                "k": outcome.k,
                "words_checked": ["%d:%d" % pair for pair in outcome.words_checked],
                "step3_vacuous": outcome.step3_vacuous,
                "degenerate_delta": outcome.degenerate_delta,
            }
        )
    else:
        record["reason"] = outcome.reason
        record["lambda_trace"] = [rational(f) for f in outcome.lam_trace]
    return record


def tc_record(counts: list[int], complete: bool, subgroup_text: str, source: str, reason: str = "") -> dict:
    record = {
        "command": "tc",
        "source": source,
        "subgroup": subgroup_text,
        "complete": complete,
        "stages": len(counts),
        "vertices": counts,
        "final_vertices": counts[-1] if counts else 0,
    }
    if reason:
        record["reason"] = reason
    return record


def validation_record(report, source: str) -> dict:
    return {
        "command": "validate",
        "source": source,
        "ok": report.ok,
        "uniqueness_ok": report.uniqueness_ok,
        "projection_ok": {k: v for k, v in sorted(report.projection_ok.items())},
        "consistency_ok": {k: v for k, v in sorted(report.consistency_ok.items())},
        "sampled_surjectivity_ok": report.sampled_surjectivity_ok,
        "counterexamples": list(report.counterexamples),
    }
