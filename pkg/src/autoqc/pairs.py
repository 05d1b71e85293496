"""Synchronous two-tape automata over a padded pair alphabet.

A pair of words (w, u) is encoded as the label sequence
``(w1,u1)(w2,u2)...`` padded at the rear of the shorter word with the
reserved token ``_``; the label ``(_,_)`` does not exist.  A machine is
*well padded* when every accepting path keeps pads terminal on each tape,
so accepted sequences decode to exactly one word pair.  The constructor
enforces this, which is what lets the relational operations below trust
their operands.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .fsa import DEFAULT_STATE_CAP, Fsa, FsaError, StateBudgetError, fsa_for_words
from .words import PAD, GeneratorAlphabet, Word


class PairError(ValueError):
    """Ill-formed two-tape data."""


class PaddingError(PairError):
    """A label sequence or machine violates the rear-padding discipline."""


class NoImageError(LookupError):
    """The relation has no partner for the given word."""

    def __init__(self, word: Word):
        super().__init__("no image for word %r" % (" ".join(word),))
        self.word = word


class NotUniqueError(LookupError):
    """The relation has several partners where one was required."""

    def __init__(self, word: Word, first: Word, second: Word):
        super().__init__(
            "word %r has at least two images: %r, %r"
            % (" ".join(word), " ".join(first), " ".join(second))
        )
        self.word = word
        self.witnesses = (first, second)


class PairAlphabet:
    """All pairs over ``base + pad`` except the all-pad label, row-major."""

    __slots__ = ("base", "labels", "_index")

    def __init__(self, base: GeneratorAlphabet):
        self.base = base
        pool = base.symbols + (PAD,)
        self.labels = tuple(
            (x, y) for x in pool for y in pool if not (x == PAD and y == PAD)
        )
        self._index = {l: i for i, l in enumerate(self.labels)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PairAlphabet) and self.base == other.base

    def __hash__(self) -> int:
        return hash(("pair", self.base))

    def __len__(self) -> int:
        return len(self.labels)

    def label_index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PairError("label %r not in pair alphabet" % (label,)) from None

    def format_label(self, label) -> str:
        return "%s:%s" % label

    def parse_label(self, token: str):
        if token.count(":") != 1:
            raise PairError("bad pair label token %r" % (token,))
        label = tuple(token.split(":"))
        self.label_index(label)
        return label


def pad_pair(w: Sequence[str], u: Sequence[str]) -> tuple:
    """Encode a word pair as a padded label sequence."""
    n = max(len(w), len(u))
    return tuple(
        (w[i] if i < len(w) else PAD, u[i] if i < len(u) else PAD) for i in range(n)
    )


def unpad_pair(labels: Sequence[tuple]) -> tuple[Word, Word]:
    """Decode a padded label sequence; reject ill-padded input."""
    w: list[str] = []
    u: list[str] = []
    wdone = udone = False
    for x, y in labels:
        if x == PAD and y == PAD:
            raise PaddingError("all-pad label")
        if x == PAD:
            wdone = True
        elif wdone:
            raise PaddingError("letter after pad on first tape")
        else:
            w.append(x)
        if y == PAD:
            udone = True
        elif udone:
            raise PaddingError("letter after pad on second tape")
        else:
            u.append(y)
    return tuple(w), tuple(u)


def _check_well_padded(m: Fsa) -> None:
    """Verify pads are terminal per tape on every accepting path of ``m``.

    Modes: 0 = no pad seen, 1 = first tape padded, 2 = second tape padded.
    Only states that lie on some accepting path are constrained.
    """
    useful = m.reachable() & m.coreachable()
    seen: set[tuple[int, int]] = set()
    queue: deque[tuple[int, int]] = deque()
    for s in m.initial:
        if s in useful:
            seen.add((s, 0))
            queue.append((s, 0))
    while queue:
        s, mode = queue.popleft()
        for (x, y), targets in m._out[s].items():
            live = [t for t in targets if t in useful]
            if not live:
                continue
            if mode == 1 and x != PAD:
                raise PaddingError(
                    "state %d: first tape resumes after padding" % (s,)
                )
            if mode == 2 and y != PAD:
                raise PaddingError(
                    "state %d: second tape resumes after padding" % (s,)
                )
            nmode = mode
            if x == PAD:
                nmode = 1
            elif y == PAD:
                nmode = 2
            for t in live:
                if (t, nmode) not in seen:
                    seen.add((t, nmode))
                    queue.append((t, nmode))


class PairFsa:
    """A well-padded acceptor of padded word pairs (a rational relation)."""

    __slots__ = ("fsa",)

    def __init__(self, fsa: Fsa):
        if not isinstance(fsa.alphabet, PairAlphabet):
            raise PairError("underlying automaton must use a pair alphabet")
        _check_well_padded(fsa)
        self.fsa = fsa

    @property
    def base(self) -> GeneratorAlphabet:
        return self.fsa.alphabet.base

    @property
    def nstates(self) -> int:
        return self.fsa.nstates

    def accepts_pair(self, w: Sequence[str], u: Sequence[str]) -> bool:
        self.base.check_word(w)
        self.base.check_word(u)
        if len(w) == 0 and len(u) == 0:
            return bool(self.fsa.initial & self.fsa.accepting)
        return self.fsa.accepts(pad_pair(w, u))

    def minimized(self, cap: int | None = None) -> "PairFsa":
        return PairFsa(self.fsa.minimize(cap))

    def __repr__(self) -> str:
        return "PairFsa(%d states)" % (self.nstates,)


def pair_fsa_for_pairs(
    base: GeneratorAlphabet, pairs: Iterable[tuple[Sequence[str], Sequence[str]]]
) -> PairFsa:
    """Canonical machine for a finite set of word pairs."""
    pal = PairAlphabet(base)
    return PairFsa(fsa_for_words(pal, [pad_pair(w, u) for w, u in pairs]))


def diagonal(language: Fsa) -> PairFsa:
    """The identity relation on a language: accepts exactly {(w, w)}."""
    pal = PairAlphabet(language.alphabet)
    trans = [(s, (x, x), t) for s, x, t in language.iter_transitions()]
    return PairFsa(
        Fsa(
            pal,
            language.nstates,
            language.initial,
            language.accepting,
            trans,
            deterministic=language.deterministic,
        )
    )


def lift_pair(language: Fsa, tape: str) -> PairFsa:
    """Pair the empty word with a language: {()} x L or L x {()}."""
    if tape not in ("first", "second"):
        raise PairError("tape must be 'first' or 'second'")
    pal = PairAlphabet(language.alphabet)
    if tape == "first":
        trans = [(s, (x, PAD), t) for s, x, t in language.iter_transitions()]
    else:
        trans = [(s, (PAD, x), t) for s, x, t in language.iter_transitions()]
    return PairFsa(
        Fsa(
            pal,
            language.nstates,
            language.initial,
            language.accepting,
            trans,
            deterministic=language.deterministic,
        )
    )


def cross_pair(first: Fsa, second: Fsa, cap: int | None = None) -> PairFsa:
    """Full cartesian product L1 x L2 as a synchronous relation."""
    if first.alphabet != second.alphabet:
        raise PairError("operands have different alphabets")
    cap = DEFAULT_STATE_CAP if cap is None else cap
    pal = PairAlphabet(first.alphabet)
    # state: (q1, q2, first-tape padded?, second-tape padded?)
    start_states = [(a, b, 0, 0) for a in first.initial for b in second.initial]
    ids = {s: i for i, s in enumerate(start_states)}
    order = list(start_states)
    trans = []
    i = 0
    while i < len(order):
        q1, q2, p1, p2 = order[i]
        for x, y in pal.labels:
            if (p1 and x != PAD) or (p2 and y != PAD):
                continue
            t1s = [q1] if x == PAD else list(first.targets(q1, x))
            t2s = [q2] if y == PAD else list(second.targets(q2, y))
            if x == PAD and q1 not in first.accepting:
                continue  # can only stop consuming the first word once accepted
            if y == PAD and q2 not in second.accepting:
                continue
            np1, np2 = p1 or x == PAD, p2 or y == PAD
            for t1 in t1s:
                for t2 in t2s:
                    nxt = (t1, t2, np1, np2)
                    j = ids.get(nxt)
                    if j is None:
                        j = len(order)
                        if j >= cap:
                            raise StateBudgetError("cross product exceeds %d states" % cap)
                        ids[nxt] = j
                        order.append(nxt)
                    trans.append((i, (x, y), j))
        i += 1
    accepting = {
        i
        for i, (q1, q2, _, _) in enumerate(order)
        if q1 in first.accepting and q2 in second.accepting
    }
    m = Fsa(pal, len(order), set(range(len(start_states))), accepting, trans)
    return PairFsa(m.trim())


def compose(first: PairFsa, second: PairFsa, cap: int | None = None) -> PairFsa:
    """Relational composite {(w,u) : exists v with (w,v) in R1, (v,u) in R2}.

    Both operands consume the shared middle word in lockstep, one letter
    per step of the composite; an operand whose input is exhausted skips.
    A middle word that outlives both outer words is absorbed by a
    common-suffix closure computed on pairs of operand states.
    """
    if first.base != second.base:
        raise PairError("operands have different base alphabets")
    cap = DEFAULT_STATE_CAP if cap is None else cap
    m1, m2 = first.fsa, second.fsa
    pal = m1.alphabet
    base = first.base.symbols
    middle = base + (PAD,)

    # closure: pairs (q1, q2) from which some common suffix v' drives
    # m1 through (_, v') and m2 through (v', _) into acceptance
    closure: set[tuple[int, int]] = set()
    rev = []
    for y in base:
        pre1: dict[int, set[int]] = {}
        for s in range(m1.nstates):
            for t in m1.targets(s, (PAD, y)):
                pre1.setdefault(t, set()).add(s)
        pre2: dict[int, set[int]] = {}
        for s in range(m2.nstates):
            for t in m2.targets(s, (y, PAD)):
                pre2.setdefault(t, set()).add(s)
        if pre1 and pre2:
            rev.append((pre1, pre2))
    worklist = deque()
    for a in m1.accepting:
        for b in m2.accepting:
            closure.add((a, b))
            worklist.append((a, b))
    while worklist:
        t1, t2 = worklist.popleft()
        for pre1, pre2 in rev:
            for s1 in pre1.get(t1, ()):
                for s2 in pre2.get(t2, ()):
                    if (s1, s2) not in closure:
                        closure.add((s1, s2))
                        worklist.append((s1, s2))

    # product search over (q1, q2, first-tape padded?, second-tape padded?)
    start_states = [(a, b, 0, 0) for a in m1.initial for b in m2.initial]
    ids = {s: i for i, s in enumerate(start_states)}
    order = list(start_states)
    trans = []
    i = 0
    while i < len(order):
        q1, q2, px, pz = order[i]
        for x, z in pal.labels:
            if (px and x != PAD) or (pz and z != PAD):
                continue
            np = (px or x == PAD, pz or z == PAD)
            targets: set[tuple[int, int]] = set()
            for y in middle:
                if x == PAD and y == PAD:
                    t1s: Iterable[int] = (q1,)  # first operand has finished
                else:
                    t1s = m1.targets(q1, (x, y))
                    if not t1s:
                        continue
                if y == PAD and z == PAD:
                    t2s: Iterable[int] = (q2,)
                else:
                    t2s = m2.targets(q2, (y, z))
                    if not t2s:
                        continue
                for t1 in t1s:
                    for t2 in t2s:
                        targets.add((t1, t2))
            for t1, t2 in targets:
                nxt = (t1, t2, np[0], np[1])
                j = ids.get(nxt)
                if j is None:
                    j = len(order)
                    if j >= cap:
                        raise StateBudgetError("composite exceeds %d states" % cap)
                    ids[nxt] = j
                    order.append(nxt)
                trans.append((i, (x, z), j))
        i += 1
    accepting = {
        i for i, (q1, q2, _, _) in enumerate(order) if (q1, q2) in closure
    }
    m = Fsa(
        pal, len(order), set(range(len(start_states))), accepting, trans
    )
    return PairFsa(m.trim())


def _tape_component(tape: str) -> int:
    if tape == "first":
        return 0
    if tape == "second":
        return 1
    raise PairError("tape must be 'first' or 'second'")


def project(relation: PairFsa, tape: str) -> Fsa:
    """Language of one tape: erase the other component of every label.

    Steps that pad the projected tape consume no letter; they are folded
    into the accepting set (pads are terminal on accepting paths, so a
    backward closure over pad-steps suffices).
    """
    comp = _tape_component(tape)
    m = relation.fsa
    base = relation.base
    trans = []
    pad_edges: dict[int, set[int]] = {}
    for s, label, t in m.iter_transitions():
        if label[comp] == PAD:
            pad_edges.setdefault(t, set()).add(s)
        else:
            trans.append((s, label[comp], t))
    accepting = set(m.accepting)
    queue = deque(accepting)
    while queue:
        t = queue.popleft()
        for s in pad_edges.get(t, ()):
            if s not in accepting:
                accepting.add(s)
                queue.append(s)
    out = Fsa(base, m.nstates, m.initial, accepting, trans)
    return out.trim()


def restrict(relation: PairFsa, tape: str, language: Fsa, cap: int | None = None) -> PairFsa:
    """Keep only pairs whose ``tape`` component lies in ``language``."""
    comp = _tape_component(tape)
    if language.alphabet != relation.base:
        raise PairError("restriction language has the wrong alphabet")
    cap = DEFAULT_STATE_CAP if cap is None else cap
    m = relation.fsa
    dl = language.determinize(cap)
    labels = relation.base.labels
    lrow = [
        {x: next(iter(dl.targets(s, x))) for x in labels} for s in range(dl.nstates)
    ]
    l0 = next(iter(dl.initial))
    ids: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    for a in m.initial:
        st = (a, l0)
        if st not in ids:
            ids[st] = len(order)
            order.append(st)
    ninit = len(order)
    trans = []
    i = 0
    while i < len(order):
        q, ql = order[i]
        for label, targets in m._out[q].items():
            letter = label[comp]
            nql = ql if letter == PAD else lrow[ql][letter]
            for t in targets:
                nxt = (t, nql)
                j = ids.get(nxt)
                if j is None:
                    j = len(order)
                    if j >= cap:
                        raise StateBudgetError("restriction exceeds %d states" % cap)
                    ids[nxt] = j
                    order.append(nxt)
                trans.append((i, label, j))
        i += 1
    accepting = {
        i
        for i, (q, ql) in enumerate(order)
        if q in m.accepting and ql in dl.accepting
    }
    out = Fsa(m.alphabet, len(order), set(range(ninit)), accepting, trans)
    return PairFsa(out.trim())


def singleton_image(
    relation: PairFsa, word: Sequence[str], length_slack: int | None = None
) -> Word:
    """The unique u with (word, u) in the relation.

    Searches images in ShortLex order up to ``len(word) + length_slack``
    (the slack defaults to the machine's state count).  Raises
    :class:`NoImageError` / :class:`NotUniqueError` otherwise.
    """
    base = relation.base
    w = base.check_word(word)
    m = relation.fsa
    if length_slack is None:
        length_slack = m.nstates
    limit = len(w) + length_slack
    useful = m.reachable() & m.coreachable()

    # tail[i]: states from which reading (w[i:], pads...) can accept
    tail: list[frozenset] = [frozenset(m.accepting)] * (len(w) + 1)
    for i in range(len(w) - 1, -1, -1):
        nxt = tail[i + 1]
        tail[i] = frozenset(
            s
            for s in range(m.nstates)
            if m.targets(s, (w[i], PAD)) & nxt
        )

    found: list[Word] = []
    start = frozenset(m.initial) & useful

    def note(u: Word) -> None:
        found.append(u)
        if len(found) >= 2:
            raise NotUniqueError(w, found[0], found[1])

    # breadth-first over candidate image prefixes, ShortLex order
    level: list[tuple[tuple, frozenset]] = [((), start)] if start else []
    ulen = 0
    if start & tail[0]:
        note(())
    while level and ulen < limit:
        nxt_level = []
        for u, states in level:
            for y in base.symbols:
                label = (w[ulen], y) if ulen < len(w) else (PAD, y)
                t = m.step_set(states, label) & useful
                if not t:
                    continue
                nu = u + (y,)
                k = ulen + 1
                acc = t & (tail[k] if k <= len(w) else frozenset(m.accepting))
                if acc:
                    note(nu)
                nxt_level.append((nu, t))
        level = nxt_level
        ulen += 1
    if not found:
        raise NoImageError(w)
    return found[0]
