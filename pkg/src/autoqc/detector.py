"""Uniform partial decision procedure for subgroup rationality.

Given an automatic structure with uniqueness and a finitely generated
subgroup H, the detector walks the coset-enumeration snapshots, clips
the normal-form language to basepoint cycles, and halts when the clipped
language is stable under right multiplication by every subgroup
generator and inverse.  On success the final language is exactly the set
of normal forms of H-elements; on a rational subgroup with unlimited
budgets the loop always gets there, and on a non-rational subgroup it
runs until a budget trips — which is a first-class reportable outcome,
not a failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .coset import (
    DEFAULT_COSET_CAP,
    CosetLimitError,
    SubgroupSpec,
    enumerate_cosets,
    graph_to_fsa,
)
from .fsa import DEFAULT_STATE_CAP, Fsa, StateBudgetError, combine, inequivalence_witness, shortest_accepted
from .pairs import PairFsa, project, restrict
from .structure import AutomaticStructure
from .words import Word


class DetectorError(RuntimeError):
    """The detection loop hit an internally inconsistent state."""


@dataclass(frozen=True)
class DetectionBudget:
    """Resource bounds making the partial algorithm always return."""

    max_stage: int = 50
    max_states: int = DEFAULT_STATE_CAP
    max_cosets: int = DEFAULT_COSET_CAP
    wall_clock: float | None = None

    def __post_init__(self):
        if self.max_stage < 1 or self.max_states < 1 or self.max_cosets < 1:
            raise ValueError("budget fields must be positive")
        if self.wall_clock is not None and self.wall_clock <= 0:
            raise ValueError("wall clock budget must be positive")


@dataclass(frozen=True)
class StageStats:
    stage: int
    graph_vertices: int
    language_states: int
    stable_count: int
    witness: Word | None


@dataclass(frozen=True)
class RationalFound:
    """Positive outcome: m_h accepts exactly the normal forms of H."""

    m_h: Fsa
    stage: int
    stats: tuple[StageStats, ...]
    structure: AutomaticStructure

    @property
    def found(self) -> bool:
        return True


@dataclass(frozen=True)
class RationalExhausted:
    """The budget ran out while the loop was still making progress."""

    stage: int
    reason: str
    stats: tuple[StageStats, ...]
    last_language_states: int

    @property
    def found(self) -> bool:
        return False


def stability_check(
    l_i: Fsa, m_u: PairFsa, cap: int | None = None
) -> tuple[bool, Word | None]:
    """Is the language closed under one multiplier, within normal forms?

    Computes the first-tape projection of the multiplier restricted on
    both tapes to ``l_i`` and compares it with ``l_i``; on failure the
    witness is the ShortLex-least word in the symmetric difference.
    """
    clipped = restrict(restrict(m_u, "first", l_i, cap), "second", l_i, cap)
    n_i = project(clipped, "first")
    witness = inequivalence_witness(n_i, l_i, cap)
    return witness is None, witness


def detect_rational(
    structure: AutomaticStructure,
    subgroup: SubgroupSpec,
    budget: DetectionBudget | None = None,
    presentation=None,
    stage_callback=None,
) -> RationalFound | RationalExhausted:
    """Decide, within budgets, whether H's normal-form preimage is regular.

    ``presentation`` defaults to the one attached to the structure; the
    optional ``stage_callback(graph, language, stats)`` observes every
    stage.  The identity's normal form is forced to the empty word
    internally (the clipped languages all contain the identity's form,
    and the basepoint's trivial cycle is the empty word).
    """
    if budget is None:
        budget = DetectionBudget()
    if subgroup.alphabet != structure.alphabet:
        raise ValueError("subgroup words use a different alphabet")
    if presentation is None:
        presentation = structure.presentation
    if presentation is None:
        raise DetectorError(
            "coset enumeration needs a presentation; attach one to the structure"
        )
    s = structure.normalize_identity()
    started = time.monotonic()
    cap = budget.max_states

    v_words = subgroup.symmetrized
    multipliers = [s.multiplier_for_word(u, cap=cap) for u in v_words]

    stats: list[StageStats] = []
    last_states = 0
    stream = enumerate_cosets(presentation, subgroup, max_cosets=budget.max_cosets)
    try:
        for graph in stream:
            if graph.stage > budget.max_stage:
                return RationalExhausted(
                    graph.stage - 1, "stage budget", tuple(stats), last_states
                )
            l_i = combine(
                s.acceptor, graph_to_fsa(graph), "intersection", cap
            ).minimize(cap)
            last_states = l_i.nstates
            stable = 0
            witness: Word | None = None
            for m_u in multipliers:
                ok, witness = stability_check(l_i, m_u, cap)
                if not ok:
                    break
                stable += 1
            st = StageStats(graph.stage, graph.nvertices, l_i.nstates, stable, witness)
            stats.append(st)
            if stage_callback is not None:
                stage_callback(graph, l_i, st)
            if stable == len(v_words):
                return RationalFound(l_i, graph.stage, tuple(stats), s)
            if graph.complete:
                raise DetectorError(
                    "stability failed on a complete coset graph; the structure"
                    " and the presentation disagree about the group"
                )
            if budget.wall_clock is not None and time.monotonic() - started > budget.wall_clock:
                return RationalExhausted(
                    graph.stage, "wall clock budget", tuple(stats), last_states
                )
    except CosetLimitError as exc:
        return RationalExhausted(
            exc.snapshot.stage, "coset budget: %s" % exc, tuple(stats), last_states
        )
    except StateBudgetError as exc:
        return RationalExhausted(
            stats[-1].stage if stats else 0,
            "state budget: %s" % exc,
            tuple(stats),
            last_states,
        )
    raise DetectorError("coset stream ended without a complete snapshot")


def member(structure: AutomaticStructure, m_h: Fsa, word) -> bool:
    """Generalized word problem: does the word's element lie in H?

    ``m_h`` must come from a successful detection against this structure.
    """
    s = structure.normalize_identity()
    return m_h.accepts(s.reduce_word(word))


def generates(
    structure: AutomaticStructure, m_h: Fsa
) -> tuple[bool, Word | None]:
    """Does H exhaust the group?  If not, return a witness outside H.

    True iff the normal-form language minus m_h's language is empty; the
    witness is the ShortLex-least normal form of an element not in H.
    """
    s = structure.normalize_identity()
    leftover = combine(s.acceptor, m_h, "difference")
    witness = shortest_accepted(leftover)
    return witness is None, witness
