"""Quasiconvexity probing through local quasigeodesics.

This is the second detection route: instead of approximating coset graphs
it watches the quasigeodesity constant of subgroup paths.  Given a
geodesic normal-form structure for an ambient group with delta-thin
triangles, a finitely generated subgroup is explored breadth-first in its
own word metric; each stage measures how far the substituted ambient
paths of short subgroup-geodesic words stray from ambient geodesics, and
a thin-triangles local-to-global bound says how much further to look
before that measurement certifies quasiconvexity outright.

Only the positive direction is ever certified.  All constants reported
are conditional on the thinness hypothesis the caller supplied — feeding
a made-up delta for a non-hyperbolic group yields a report that merely
records what was checked.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .coset import SubgroupSpec
from .detector import DetectionBudget
from .structure import AutomaticStructure
from .words import GeneratorAlphabet, Presentation, Word, substitute


class HyperbolicError(ValueError):
    """Bad input to the quasiconvexity prober."""


class BallLimitError(RuntimeError):
    """A subgroup ball or word enumeration outgrew its budget."""


class _Deadline(Exception):
    """Internal: the wall-clock budget ran out."""


class HyperbolicContext:
    """A geodesic automatic structure plus a triangle-thinness constant.

    Geodesity (normal forms realize the word-metric distance) cannot be
    verified from the automata alone; the constructor samples it — every
    word up to ``sample_depth`` must reduce to a form no longer than
    itself.  Depth 0 already forces the identity's normal form to be the
    empty word, which the distance computations below rely on.
    """

    def __init__(
        self,
        structure: AutomaticStructure,
        delta,
        presentation: Presentation | None = None,
        sample_depth: int = 3,
    ):
        delta = Fraction(delta)
        if delta < 0:
            raise HyperbolicError("thinness constant must be non-negative")
        self.structure = structure
        self.delta = delta
        self.presentation = (
            presentation if presentation is not None else structure.presentation
        )
        self._sample_geodesity(sample_depth)

    def _sample_geodesity(self, depth: int) -> None:
        alphabet = self.structure.alphabet
        level: list[Word] = [()]
        for n in range(depth + 1):
            for w in level:
                if len(self.structure.reduce_word(w)) > n:
                    raise HyperbolicError(
                        "structure is not geodesic: %r reduces to a longer form"
                        % (alphabet.format_word(w),)
                    )
            level = [w + (x,) for w in level for x in alphabet.symbols]

    def __repr__(self) -> str:
        return "HyperbolicContext(%r, delta=%s)" % (self.structure, self.delta)


def v_alphabet(h: SubgroupSpec) -> tuple[GeneratorAlphabet, dict[str, Word]]:
    """Fresh letters ``v1, v2, ...`` naming the subgroup generators.

    Returns the symmetrized alphabet together with the substitution map
    sending each letter to the generating word it stands for; inverse
    letters map to formal inverses, so substituted paths traverse the
    same edges backwards.
    """
    if not h.words:
        raise HyperbolicError("subgroup spec has no generators")
    names = ["v%d" % (k + 1) for k in range(len(h.words))]
    alph = GeneratorAlphabet.from_generators(names)
    images: dict[str, Word] = {}
    for name, word in zip(names, h.words):
        images[name] = word
        images[alph.inverse(name)] = h.alphabet.formal_inverse(word)
    return alph, images


@dataclass(frozen=True)
class HBall:
    """Ball in the subgroup under the word metric of its generators.

    Elements are identified by their ambient normal forms.  ``distances``
    carries exact generator-metric values out to ``radius``; ``parents``
    holds one breadth-first tree edge per non-identity element, enough to
    reconstruct a geodesic word back to the basepoint.
    """

    radius: int
    distances: dict[Word, int]
    parents: dict[Word, tuple[Word, str]]

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")
        if self.distances.get(()) != 0:
            raise ValueError("the identity must be present at distance 0")

    def __len__(self) -> int:
        return len(self.distances)

    def __contains__(self, form: object) -> bool:
        return form in self.distances

    def geodesic_to(self, form) -> Word:
        """A shortest generator word reaching the element named ``form``."""
        form = tuple(form)
        if form not in self.distances:
            raise HyperbolicError("element is outside the ball")
        letters: list[str] = []
        while form != ():
            form, sym = self.parents[form]
            letters.append(sym)
        return tuple(reversed(letters))


class _BallBuilder:
    """Incremental breadth-first exploration shared across stages."""

    def __init__(
        self,
        structure: AutomaticStructure,
        images: dict[str, Word],
        order: tuple[str, ...],
    ):
        self.structure = structure
        self.images = images
        self.order = order
        self.distances: dict[Word, int] = {(): 0}
        self.parents: dict[Word, tuple[Word, str]] = {}
        self.radius = 0
        self._frontier: list[Word] = [()]

    def extend_to(self, radius: int, max_elements: int | None = None) -> None:
        while self.radius < radius:
            grown: list[Word] = []
            for form in self._frontier:
                for sym in self.order:
                    child = self.structure.fold(form, self.images[sym])
                    if child not in self.distances:
                        self.distances[child] = self.radius + 1
                        self.parents[child] = (form, sym)
                        grown.append(child)
                        if (
                            max_elements is not None
                            and len(self.distances) > max_elements
                        ):
                            raise BallLimitError(
                                "ball exceeded %d elements at radius %d"
                                % (max_elements, self.radius + 1)
                            )
            self._frontier = grown
            self.radius += 1

    def snapshot(self) -> HBall:
        return HBall(self.radius, dict(self.distances), dict(self.parents))


def h_ball(
    ctx: HyperbolicContext,
    h: SubgroupSpec,
    radius: int,
    max_elements: int | None = None,
) -> HBall:
    """Exact subgroup ball: breadth-first right multiplication of forms."""
    if radius < 0:
        raise HyperbolicError("radius must be non-negative")
    if h.alphabet != ctx.structure.alphabet:
        raise HyperbolicError("subgroup alphabet does not match the structure's")
    if h.words:
        alph, images = v_alphabet(h)
        order = alph.symbols
    else:
        images, order = {}, ()
    builder = _BallBuilder(ctx.structure, images, order)
    builder.extend_to(radius, max_elements)
    return builder.snapshot()


def v_geodesic_words(
    ctx: HyperbolicContext, h: SubgroupSpec, ball: HBall, length: int
) -> list[Word]:
    """All generator words whose length equals their endpoint's distance.

    Enumerated level by level off the ball's distance labels: a word is
    geodesic exactly when appending its last letter pushed the endpoint
    one level further out.  Distinct geodesic words to the same element
    are all listed.
    """
    if length < 0:
        raise HyperbolicError("length bound must be non-negative")
    if ball.radius < length:
        raise HyperbolicError(
            "ball radius %d is too small for words of length %d"
            % (ball.radius, length)
        )
    if not h.words:
        return [()]
    alph, images = v_alphabet(h)
    out: list[Word] = [()]
    level: list[tuple[Word, Word]] = [((), ())]
    for n in range(1, length + 1):
        grown: list[tuple[Word, Word]] = []
        for vword, form in level:
            for sym in alph.symbols:
                child = ctx.structure.fold(form, images[sym])
                if ball.distances.get(child) == n:
                    grown.append((vword + (sym,), child))
        level = grown
        out.extend(w for w, _ in level)
    return out


def _path_stretch(structure: AutomaticStructure, path: Word) -> Fraction:
    """Worst ratio s/(d+1) over ordered vertex pairs of an ambient path.

    Vertices sit at every letter; the inner loop folds the normal form of
    the segment between the pair one letter at a time, so the distance is
    the geodesic one whenever the structure is geodesic.
    """
    best = Fraction(0)
    n = len(path)
    for p in range(n):
        form: Word = ()
        for q in range(p + 1, n + 1):
            form = structure.fold(form, (path[q - 1],))
            ratio = Fraction(q - p, len(form) + 1)
            if ratio > best:
                best = ratio
    return best


def min_lambda(
    ctx: HyperbolicContext, words: list[Word], images: dict[str, Word]
) -> Fraction:
    """Least constant making every substituted path a quasigeodesic.

    A path with vertices x, y at arc length s and distance d apart needs
    s <= lam*d + lam, i.e. lam >= s/(d+1); the result is the maximum of
    those ratios over every ordered vertex pair of every path, floored at
    1 so plain geodesics get the simplest constant.
    """
    best = Fraction(1)
    for vword in words:
        ratio = _path_stretch(ctx.structure, substitute(vword, images))
        if ratio > best:
            best = ratio
    return best


def epsilon_from(distortion, delta) -> Fraction:
    """The neighborhood constant 1000*delta*(1 + log2 C).

    Exact when the distortion C is a power of two; otherwise log2 is
    replaced by its least dyadic upper bound in steps of 1/1024 — an
    upper bound keeps the constant valid, if slightly generous.
    """
    c = Fraction(distortion)
    d = Fraction(delta)
    if c < 1:
        raise ValueError("distortion constant must be at least 1")
    if d < 0:
        raise ValueError("thinness constant must be non-negative")
    if d == 0:
        return Fraction(0)
    if c.denominator == 1 and c.numerator & (c.numerator - 1) == 0:
        log2 = c.numerator.bit_length() - 1
        return 1000 * d * (1 + log2)
    p = c.numerator**1024
    q = c.denominator**1024
    m = max(0, p.bit_length() - q.bit_length() - 1)
    while (1 << m) * q < p:
        m += 1
    while m > 0 and (1 << (m - 1)) * q >= p:
        m -= 1
    return 1000 * d * (1 + Fraction(m, 1024))


@dataclass(frozen=True)
class QcReport:
    """Positive verdict of the prober, with its certified constants.

    ``lam`` is the stage's quasigeodesity constant, ``distortion`` twice
    that, ``epsilon`` the neighborhood radius; all three are conditional
    on the thinness hypothesis in the context.  ``k`` is the longest
    generating word — the scale factor in the escalation bound.
    ``words_checked`` records each verified round as (word-length bound,
    words scanned); ``step3_vacuous`` marks runs whose escalation range
    was empty, and ``degenerate_delta`` flags delta = 0, where that is
    forced and the certificate is really the tree-like case.
    """

    lam: Fraction
    distortion: Fraction
    epsilon: Fraction
    stage: int
    k: int
    delta: Fraction
    words_checked: tuple[tuple[int, int], ...]
    step3_vacuous: bool
    degenerate_delta: bool

    def __post_init__(self):
        if self.distortion != 2 * self.lam:
            raise ValueError("distortion must be twice the quasigeodesity constant")
        if self.epsilon != epsilon_from(self.distortion, self.delta):
            raise ValueError("epsilon does not match its formula")

    @property
    def halted(self) -> bool:
        return True


@dataclass(frozen=True)
class QcExhausted:
    """The prober ran out of budget without certifying any stage."""

    stage: int
    reason: str
    lam_trace: tuple[Fraction, ...]

    @property
    def halted(self) -> bool:
        return False


def detect_quasiconvex(
    ctx: HyperbolicContext,
    h: SubgroupSpec,
    budget: DetectionBudget | None = None,
) -> QcReport | QcExhausted:
    """Stagewise escalation: measure, then verify out to the bound.

    Stage i computes lam over all subgroup-geodesic words of length at
    most 2i, then checks that words out to length 2j keep it, for j up
    through floor(1000*k*i*delta*lam).  A stage whose whole range passes
    (vacuously when the range is empty, always for delta = 0) certifies
    the subgroup quasiconvex.  ``max_states`` bounds both ball elements
    and enumerated words; failures to certify only ever exhaust.
    """
    if budget is None:
        budget = DetectionBudget()
    structure = ctx.structure
    if h.alphabet != structure.alphabet:
        raise HyperbolicError("subgroup alphabet does not match the structure's")
    deadline = (
        None if budget.wall_clock is None else time.monotonic() + budget.wall_clock
    )
    if h.words:
        alph, images = v_alphabet(h)
        order = alph.symbols
        k = max(len(w) for w in images.values())
    else:
        images, order, k = {}, (), 0

    builder = _BallBuilder(structure, images, order)
    stretches: dict[Word, Fraction] = {}
    levels: list[list[tuple[Word, Word]]] = [[((), ())]]
    nwords = 1

    def tick() -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise _Deadline

    def extend_words(bound: int) -> None:
        # needs the ball out to the same bound first, so distance labels
        # at the new level are final
        nonlocal nwords
        while len(levels) - 1 < bound:
            n = len(levels)
            grown: list[tuple[Word, Word]] = []
            for vword, form in levels[-1]:
                for sym in order:
                    child = structure.fold(form, images[sym])
                    if builder.distances.get(child) == n:
                        grown.append((vword + (sym,), child))
            nwords += len(grown)
            if nwords > budget.max_states:
                raise BallLimitError(
                    "geodesic word count exceeded %d at length %d"
                    % (budget.max_states, n)
                )
            levels.append(grown)

    def stretch(vword: Word) -> Fraction:
        known = stretches.get(vword)
        if known is None:
            known = _path_stretch(structure, substitute(vword, images))
            stretches[vword] = known
        return known

    trace: list[Fraction] = []
    stage = 0
    try:
        for stage in range(1, budget.max_stage + 1):
            tick()
            builder.extend_to(2 * stage, budget.max_states)
            extend_words(2 * stage)
            lam = Fraction(1)
            count = 0
            for n in range(2 * stage + 1):
                count += len(levels[n])
                for vword, _ in levels[n]:
                    ratio = stretch(vword)
                    if ratio > lam:
                        lam = ratio
            trace.append(lam)
            j_bound = int(1000 * k * stage * ctx.delta * lam)
            rounds = [(2 * stage, count)]
            passed = True
            for j in range(stage + 1, j_bound + 1):
                tick()
                builder.extend_to(2 * j, budget.max_states)
                extend_words(2 * j)
                count = 0
                for n in range(2 * j + 1):
                    for vword, _ in levels[n]:
                        count += 1
                        if stretch(vword) > lam:
                            passed = False
                            break
                    if not passed:
                        break
                rounds.append((2 * j, count))
                if not passed:
                    break
            if passed:
                c = 2 * lam
                return QcReport(
                    lam=lam,
                    distortion=c,
                    epsilon=epsilon_from(c, ctx.delta),
                    stage=stage,
                    k=k,
                    delta=ctx.delta,
                    words_checked=tuple(rounds),
                    step3_vacuous=j_bound <= stage,
                    degenerate_delta=ctx.delta == 0,
                )
    except BallLimitError as exc:
        return QcExhausted(stage, str(exc), tuple(trace))
    except _Deadline:
        return QcExhausted(stage, "wall clock budget exhausted", tuple(trace))
    return QcExhausted(
        budget.max_stage,
        "stage budget: no stage up to %d certified" % budget.max_stage,
        tuple(trace),
    )
