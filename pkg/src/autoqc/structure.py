"""Automatic group structures with unique normal forms.

A structure packages a regular set of normal forms (one per group
element), an equality recognizer on pairs, and one right-multiplier
relation per alphabet letter.  Everything else in the package — word
reduction, the word problem, and the subgroup detectors — is phrased in
terms of these machines only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fsa import (
    Fsa,
    StateBudgetError,
    combine,
    fsa_for_words,
    inequivalence_witness,
    is_empty,
    shortest_accepted,
)
from .pairs import (
    NoImageError,
    NotUniqueError,
    PairFsa,
    compose,
    cross_pair,
    diagonal,
    project,
    restrict,
    singleton_image,
)
from .words import GeneratorAlphabet, Presentation, Word


class StructureError(ValueError):
    """An automatic structure is internally inconsistent."""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the exact invariant checks plus sampled reduction."""

    uniqueness_ok: bool
    projection_ok: dict[str, bool]
    consistency_ok: dict[str, bool]
    sampled_surjectivity_ok: bool
    counterexamples: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.uniqueness_ok
            and all(self.projection_ok.values())
            and all(self.consistency_ok.values())
            and self.sampled_surjectivity_ok
        )


class AutomaticStructure:
    """Normal-form acceptor + equality recognizer + letter multipliers."""

    def __init__(
        self,
        alphabet: GeneratorAlphabet,
        acceptor: Fsa,
        equality: PairFsa,
        multipliers: dict[str, PairFsa],
        presentation: Presentation | None = None,
        name: str = "",
    ):
        if acceptor.alphabet != alphabet:
            raise StructureError("acceptor alphabet mismatch")
        if equality.base != alphabet:
            raise StructureError("equality recognizer alphabet mismatch")
        if set(multipliers) != set(alphabet.symbols):
            missing = set(alphabet.symbols) - set(multipliers)
            extra = set(multipliers) - set(alphabet.symbols)
            raise StructureError(
                "multipliers must cover the alphabet exactly"
                + (" (missing %s)" % sorted(missing) if missing else "")
                + (" (extra %s)" % sorted(extra) if extra else "")
            )
        for x, m in multipliers.items():
            if m.base != alphabet:
                raise StructureError("multiplier for %r has wrong alphabet" % x)
        if presentation is not None and presentation.alphabet != alphabet:
            raise StructureError("presentation alphabet mismatch")
        self.alphabet = alphabet
        self.acceptor = acceptor
        self.equality = equality
        self.multipliers = dict(multipliers)
        self.presentation = presentation
        self.name = name
        self._identity: Word | None = None
        self._word_multipliers: dict[Word, PairFsa] = {}
        self._normalized: "AutomaticStructure | None" = None

    # -- normal forms -------------------------------------------------

    def identity_word(self) -> Word:
        """Normal form of the group identity."""
        if self._identity is None:
            if self.acceptor.accepts(()):
                self._identity = ()
            else:
                seed = shortest_accepted(self.acceptor)
                if seed is None:
                    raise StructureError("normal-form language is empty")
                # seed names some g; push it through the multipliers of
                # its formal inverse to land on the form naming g g^-1
                self._identity = self._fold(seed, self.alphabet.formal_inverse(seed))
        return self._identity

    def _fold(self, start: Word, word: Word) -> Word:
        u = start
        for x in word:
            u = singleton_image(self.multipliers[x], u)
        return u

    def fold(self, start: Word, word) -> Word:
        """Extend the normal form ``start`` on the right by ``word``.

        One multiplier application per letter, so the cost scales with the
        suffix, not the accumulated form — the building block for walking
        long paths letter by letter.
        """
        w = self.alphabet.check_word(word)
        try:
            return self._fold(start, w)
        except (NoImageError, NotUniqueError) as exc:
            raise StructureError(
                "multiplier fold failed after %r at %r: %s"
                % (
                    self.alphabet.format_word(start),
                    self.alphabet.format_word(w),
                    exc,
                )
            ) from exc

    def reduce_word(self, word) -> Word:
        """Normal form of the element the word spells."""
        return self.fold(self.identity_word(), word)

    def word_problem(self, first, second=()) -> bool:
        """Do two words spell the same group element?"""
        return self.reduce_word(first) == self.reduce_word(second)

    # -- derived machines ----------------------------------------------

    def multiplier_for_word(self, word, cap: int | None = None) -> PairFsa:
        """Recognizer of {(w, u) : both normal forms, w·word = u}."""
        w = self.alphabet.check_word(word)
        cached = self._word_multipliers.get(w)
        if cached is not None:
            return cached
        if not w:
            m = diagonal(self.acceptor.minimize())
        else:
            m = self.multipliers[w[0]]
            for x in w[1:]:
                m = compose(m, self.multipliers[x], cap).minimized(cap)
        self._word_multipliers[w] = m
        return m

    # -- identity relocation --------------------------------------------

    def normalize_identity(self) -> "AutomaticStructure":
        """Equivalent structure whose identity normal form is the empty word."""
        if self._normalized is None:
            self._normalized = self.reseat_identity(())
        return self._normalized

    def reseat_identity(self, new_word) -> "AutomaticStructure":
        """Equivalent structure with the identity renamed to ``new_word``."""
        new = self.alphabet.check_word(new_word)
        old = self.identity_word()
        if new == old:
            return self
        if self.acceptor.accepts(new):
            raise StructureError(
                "%r already names another element" % (self.alphabet.format_word(new),)
            )
        single_old = fsa_for_words(self.alphabet, [old])
        single_new = fsa_for_words(self.alphabet, [new])
        not_old = single_old.complement()
        acceptor = combine(
            combine(self.acceptor, single_old, "difference"), single_new, "union"
        ).minimize()

        def transport(rel: PairFsa) -> PairFsa:
            kept = restrict(restrict(rel, "first", not_old), "second", not_old)
            pieces = [kept.fsa]
            from_old = project(restrict(restrict(rel, "first", single_old), "second", not_old), "second")
            if not is_empty(from_old):
                pieces.append(cross_pair(single_new, from_old).fsa)
            to_old = project(restrict(restrict(rel, "second", single_old), "first", not_old), "first")
            if not is_empty(to_old):
                pieces.append(cross_pair(to_old, single_new).fsa)
            if rel.accepts_pair(old, old):
                pieces.append(cross_pair(single_new, single_new).fsa)
            total = pieces[0]
            for p in pieces[1:]:
                total = combine(total, p, "union")
            return PairFsa(total.minimize())

        multipliers = {x: transport(m) for x, m in self.multipliers.items()}
        out = AutomaticStructure(
            self.alphabet,
            acceptor,
            transport(self.equality),
            multipliers,
            presentation=self.presentation,
            name=self.name,
        )
        out._identity = new
        return out

    # -- consistency checks ----------------------------------------------

    def validate(self, sample_depth: int = 3) -> ValidationReport:
        """Exact invariant checks plus sampled whole-alphabet reduction.

        Exact: the equality recognizer is the diagonal on the normal-form
        language (uniqueness); each multiplier's projections stay inside
        the language; each multiplier composed with its inverse letter's
        multiplier is that diagonal.  Sampled: every word over the
        alphabet of length <= sample_depth reduces to a single normal
        form (surjectivity of the evaluation map cannot be decided from
        the machines, so it is spot-checked).
        """
        counterexamples: list[str] = []
        fmt = self.alphabet.format_word

        diag = diagonal(self.acceptor.minimize())
        witness = inequivalence_witness(self.equality.fsa, diag.fsa)
        uniqueness_ok = witness is None
        if witness is not None:
            counterexamples.append(
                "equality vs diagonal differ on pair label word %s"
                % " ".join("%s:%s" % l for l in witness)
            )

        projection_ok: dict[str, bool] = {}
        consistency_ok: dict[str, bool] = {}
        for x in self.alphabet.symbols:
            m = self.multipliers[x]
            ok = True
            for tape in ("first", "second"):
                bad = combine(project(m, tape), self.acceptor, "difference")
                stray = shortest_accepted(bad)
                if stray is not None:
                    ok = False
                    counterexamples.append(
                        "multiplier %s %s tape leaves the language at %s"
                        % (x, tape, fmt(stray) or "the empty word")
                    )
            projection_ok[x] = ok

            back = self.multipliers[self.alphabet.inverse(x)]
            try:
                roundtrip = compose(m, back)
                cwitness = inequivalence_witness(roundtrip.fsa, diag.fsa)
            except StateBudgetError as exc:
                consistency_ok[x] = False
                counterexamples.append("consistency check for %s overflowed: %s" % (x, exc))
                continue
            consistency_ok[x] = cwitness is None
            if cwitness is not None:
                counterexamples.append(
                    "multiplier %s times its inverse is not the identity relation"
                    " (differs at %s)" % (x, " ".join("%s:%s" % l for l in cwitness))
                )

        sampled_surjectivity_ok = True
        words: list[Word] = [()]
        for _ in range(sample_depth):
            words = [w + (x,) for w in words for x in self.alphabet.symbols]
            for w in words:
                try:
                    nf = self.reduce_word(w)
                except StructureError as exc:
                    sampled_surjectivity_ok = False
                    counterexamples.append(str(exc))
                    break
                if not self.acceptor.accepts(nf):
                    sampled_surjectivity_ok = False
                    counterexamples.append(
                        "%s reduces to %s outside the language" % (fmt(w), fmt(nf))
                    )
                    break
            if not sampled_surjectivity_ok:
                break

        return ValidationReport(
            uniqueness_ok,
            projection_ok,
            consistency_ok,
            sampled_surjectivity_ok,
            tuple(counterexamples),
        )

    def __repr__(self) -> str:
        tag = self.name or "structure"
        return "AutomaticStructure(%s, %d-state acceptor)" % (tag, self.acceptor.nstates)
