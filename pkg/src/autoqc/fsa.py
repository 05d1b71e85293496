"""Finite-state acceptors and the boolean/regular calculus built on them.

States are integers ``0..nstates-1``.  There are no epsilon transitions:
the empty word is accepted exactly when some initial state is accepting.
Automata need not be complete; ``determinize`` completes them.

``minimize`` is canonical: it returns the minimal complete DFA with states
renumbered breadth-first (alphabet order), so two language-equal automata
minimize to structurally identical machines.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

from .words import Word

#: global default cap on constructed state counts
DEFAULT_STATE_CAP = 10**6


class FsaError(ValueError):
    """Ill-formed automaton or incompatible operands."""


class StateBudgetError(RuntimeError):
    """A construction would exceed the configured state cap."""


class Fsa:
    """Finite-state acceptor over an ordered label alphabet.

    ``alphabet`` may be a :class:`~autoqc.words.GeneratorAlphabet` or a
    :class:`~autoqc.pairs.PairAlphabet`; it must expose ``labels`` and
    ``label_index``.  ``deterministic`` asserts a single initial state and
    at most one successor per (state, label).
    """

    __slots__ = ("alphabet", "nstates", "initial", "accepting", "deterministic", "_out")

    def __init__(
        self,
        alphabet,
        nstates: int,
        initial: Iterable[int],
        accepting: Iterable[int],
        transitions: Iterable[tuple[int, object, int]],
        deterministic: bool = False,
    ):
        if nstates < 1:
            raise FsaError("need at least one state")
        self.alphabet = alphabet
        self.nstates = nstates
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        for s in self.initial | self.accepting:
            if not 0 <= s < nstates:
                raise FsaError("state %r out of range" % (s,))
        out: list[dict] = [dict() for _ in range(nstates)]
        for src, label, dst in transitions:
            if not (0 <= src < nstates and 0 <= dst < nstates):
                raise FsaError("transition state out of range")
            alphabet.label_index(label)  # validates the label
            row = out[src]
            cur = row.get(label)
            if cur is None:
                row[label] = {dst}
            else:
                cur.add(dst)
        self._out = tuple(
            {label: frozenset(t) for label, t in row.items()} for row in out
        )
        if deterministic:
            if len(self.initial) != 1:
                raise FsaError("deterministic automaton needs one initial state")
            for row in self._out:
                for t in row.values():
                    if len(t) > 1:
                        raise FsaError("nondeterministic transition in det automaton")
        self.deterministic = deterministic

    # -- basic access ------------------------------------------------------

    def targets(self, state: int, label) -> frozenset:
        return self._out[state].get(label, frozenset())

    def iter_transitions(self) -> Iterator[tuple[int, object, int]]:
        """All transitions in the canonical (src, label index, dst) order."""
        idx = self.alphabet.label_index
        for src, row in enumerate(self._out):
            for label in sorted(row, key=idx):
                for dst in sorted(row[label]):
                    yield src, label, dst

    def step_set(self, states: frozenset, label) -> frozenset:
        out = set()
        for s in states:
            out |= self._out[s].get(label, frozenset())
        return frozenset(out)

    def accepts(self, word: Sequence) -> bool:
        cur = self.initial
        for label in word:
            self.alphabet.label_index(label)
            cur = self.step_set(cur, label)
            if not cur:
                return False
        return bool(cur & self.accepting)

    def __repr__(self) -> str:
        return "Fsa(%d states, %d labels%s)" % (
            self.nstates,
            len(self.alphabet.labels),
            ", det" if self.deterministic else "",
        )

    # -- reachability ------------------------------------------------------

    def reachable(self) -> frozenset:
        seen = set(self.initial)
        queue = deque(self.initial)
        while queue:
            s = queue.popleft()
            for t in self._out[s].values():
                for u in t:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
        return frozenset(seen)

    def coreachable(self) -> frozenset:
        rev: list[set[int]] = [set() for _ in range(self.nstates)]
        for s, row in enumerate(self._out):
            for t in row.values():
                for u in t:
                    rev[u].add(s)
        seen = set(self.accepting)
        queue = deque(self.accepting)
        while queue:
            s = queue.popleft()
            for u in rev[s]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return frozenset(seen)

    def trim(self) -> "Fsa":
        """Restrict to states both reachable and co-reachable."""
        keep = sorted(self.reachable() & self.coreachable())
        if not keep:
            return Fsa(self.alphabet, 1, {0}, (), (), deterministic=True)
        remap = {old: new for new, old in enumerate(keep)}
        trans = [
            (remap[s], l, remap[t])
            for s, l, t in self.iter_transitions()
            if s in remap and t in remap
        ]
        return Fsa(
            self.alphabet,
            len(keep),
            {remap[s] for s in self.initial if s in remap},
            {remap[s] for s in self.accepting if s in remap},
            trans,
            deterministic=self.deterministic and len(self.initial & frozenset(remap)) == 1,
        )

    # -- determinization and minimization -----------------------------------

    def determinize(self, cap: int | None = None) -> "Fsa":
        """Complete subset-construction DFA, reachable subsets only.

        States come out numbered in breadth-first discovery order over the
        alphabet ordering, which makes the numbering reproducible.
        """
        cap = DEFAULT_STATE_CAP if cap is None else cap
        labels = self.alphabet.labels
        start = frozenset(self.initial)
        ids: dict[frozenset, int] = {start: 0}
        order: list[frozenset] = [start]
        rows: list[list[int]] = []
        i = 0
        while i < len(order):
            subset = order[i]
            row = []
            for label in labels:
                nxt = self.step_set(subset, label)
                j = ids.get(nxt)
                if j is None:
                    j = len(order)
                    if j >= cap:
                        raise StateBudgetError(
                            "determinization exceeds %d states" % cap
                        )
                    ids[nxt] = j
                    order.append(nxt)
                row.append(j)
            rows.append(row)
            i += 1
        trans = [
            (s, labels[k], rows[s][k])
            for s in range(len(order))
            for k in range(len(labels))
        ]
        accepting = {i for i, subset in enumerate(order) if subset & self.accepting}
        return Fsa(self.alphabet, len(order), {0}, accepting, trans, deterministic=True)

    def minimize(self, cap: int | None = None) -> "Fsa":
        """Canonical minimal complete DFA for the same language.

        Partition refinement on the completed DFA followed by a
        breadth-first renumbering; language-equal inputs yield structurally
        identical outputs.
        """
        det = self.determinize(cap)
        labels = det.alphabet.labels
        n = det.nstates
        rows = [[next(iter(det.targets(s, l))) for l in labels] for s in range(n)]
        cls = [1 if s in det.accepting else 0 for s in range(n)]
        while True:
            sigs: dict[tuple, int] = {}
            new = [0] * n
            for s in range(n):
                sig = (cls[s], tuple(cls[t] for t in rows[s]))
                new[s] = sigs.setdefault(sig, len(sigs))
            if len(sigs) == len(set(cls)):
                break
            cls = new
        # quotient, then canonical BFS renumbering from the initial class
        start = cls[next(iter(det.initial))]
        class_row: dict[int, list[int]] = {}
        for s in range(n):
            class_row.setdefault(cls[s], [cls[t] for t in rows[s]])
        order = {start: 0}
        queue = deque([start])
        seq = [start]
        while queue:
            c = queue.popleft()
            for t in class_row[c]:
                if t not in order:
                    order[t] = len(order)
                    seq.append(t)
                    queue.append(t)
        trans = []
        for c in seq:
            for k, t in enumerate(class_row[c]):
                trans.append((order[c], labels[k], order[t]))
        accepting = {order[cls[s]] for s in det.accepting}
        return Fsa(
            self.alphabet, len(order), {0}, accepting, trans, deterministic=True
        )

    def complement(self, cap: int | None = None) -> "Fsa":
        det = self.determinize(cap)
        acc = set(range(det.nstates)) - set(det.accepting)
        return Fsa(
            det.alphabet,
            det.nstates,
            det.initial,
            acc,
            det.iter_transitions(),
            deterministic=True,
        )

    def same_structure(self, other: "Fsa") -> bool:
        """Structural identity: same labels, numbering, and tables."""
        return (
            self.alphabet == other.alphabet
            and self.nstates == other.nstates
            and self.initial == other.initial
            and self.accepting == other.accepting
            and self._out == other._out
        )

    def live_states(self) -> int:
        """Number of states on some accepting path."""
        return len(self.reachable() & self.coreachable())


def combine(a: Fsa, b: Fsa, mode: str, cap: int | None = None) -> Fsa:
    """Boolean combination on the product of the completed automata.

    ``mode`` is one of ``intersection``, ``union``, ``difference``.
    """
    if a.alphabet != b.alphabet:
        raise FsaError("operands have different alphabets")
    if mode not in ("intersection", "union", "difference"):
        raise FsaError("unknown combine mode %r" % (mode,))
    cap = DEFAULT_STATE_CAP if cap is None else cap
    da, db = a.determinize(cap), b.determinize(cap)
    labels = a.alphabet.labels
    rows_a = [[next(iter(da.targets(s, l))) for l in labels] for s in range(da.nstates)]
    rows_b = [[next(iter(db.targets(s, l))) for l in labels] for s in range(db.nstates)]
    start = (next(iter(da.initial)), next(iter(db.initial)))
    ids = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        sa, sb = order[i]
        for k, label in enumerate(labels):
            nxt = (rows_a[sa][k], rows_b[sb][k])
            j = ids.get(nxt)
            if j is None:
                j = len(order)
                if j >= cap:
                    raise StateBudgetError("product exceeds %d states" % cap)
                ids[nxt] = j
                order.append(nxt)
            trans.append((i, label, j))
        i += 1
    accepting = set()
    for idx, (sa, sb) in enumerate(order):
        ina, inb = sa in da.accepting, sb in db.accepting
        ok = (
            (ina and inb)
            if mode == "intersection"
            else (ina or inb) if mode == "union" else (ina and not inb)
        )
        if ok:
            accepting.add(idx)
    return Fsa(a.alphabet, len(order), {0}, accepting, trans, deterministic=True)


def is_empty(m: Fsa) -> bool:
    return not (m.reachable() & m.accepting)


def inequivalence_witness(a: Fsa, b: Fsa, cap: int | None = None):
    """ShortLex-least word accepted by exactly one operand, or None.

    Breadth-first search over the product of the completed automata; the
    first acceptance mismatch discovered is reached by the least word.
    """
    if a.alphabet != b.alphabet:
        raise FsaError("operands have different alphabets")
    cap = DEFAULT_STATE_CAP if cap is None else cap
    da, db = a.determinize(cap), b.determinize(cap)
    labels = a.alphabet.labels
    start = (next(iter(da.initial)), next(iter(db.initial)))

    def mismatch(pair):
        return (pair[0] in da.accepting) != (pair[1] in db.accepting)

    if mismatch(start):
        return ()
    parents: dict[tuple[int, int], tuple[tuple[int, int], object]] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        sa, sb = pair
        for label in labels:
            nxt = (
                next(iter(da.targets(sa, label))),
                next(iter(db.targets(sb, label))),
            )
            if nxt in parents:
                continue
            parents[nxt] = (pair, label)
            if mismatch(nxt):
                out = []
                cur = nxt
                while parents[cur] is not None:
                    cur, lab = parents[cur]
                    out.append(lab)
                return tuple(reversed(out))
            queue.append(nxt)
    return None


def equivalent(a: Fsa, b: Fsa, cap: int | None = None) -> bool:
    return inequivalence_witness(a, b, cap) is None


def shortest_accepted(m: Fsa):
    """ShortLex-least accepted word, or None for the empty language."""
    start = frozenset(m.initial)
    if start & m.accepting:
        return ()
    labels = m.alphabet.labels
    parents: dict[frozenset, tuple[frozenset, object]] = {start: None}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        for label in labels:
            nxt = m.step_set(subset, label)
            if not nxt or nxt in parents:
                continue
            parents[nxt] = (subset, label)
            if nxt & m.accepting:
                out = []
                cur = nxt
                while parents[cur] is not None:
                    cur, lab = parents[cur]
                    out.append(lab)
                return tuple(reversed(out))
            queue.append(nxt)
    return None


def iter_accepted(m: Fsa, max_len: int) -> Iterator[tuple]:
    """Accepted words of length <= max_len, in ShortLex order."""
    live = m.coreachable()
    labels = m.alphabet.labels
    level: list[tuple[tuple, frozenset]] = [((), frozenset(m.initial) & live)]
    if not level[0][1]:
        return
    depth = 0
    while True:
        for word, states in level:
            if states & m.accepting:
                yield word
        if depth == max_len:
            return
        nxt = []
        for word, states in level:
            for label in labels:
                t = m.step_set(states, label) & live
                if t:
                    nxt.append((word + (label,), t))
        if not nxt:
            return
        level = nxt
        depth += 1


def enumerate_upto(m: Fsa, max_len: int) -> list[tuple]:
    return list(iter_accepted(m, max_len))


def fsa_for_words(alphabet, words: Iterable[Sequence]) -> Fsa:
    """Canonical minimal DFA of a finite set of words (trie + minimize)."""
    words = [tuple(w) for w in words]
    nodes: dict[tuple, int] = {(): 0}
    trans = []
    accepting = set()
    for w in words:
        cur = ()
        for label in w:
            alphabet.label_index(label)
            nxt = cur + (label,)
            if nxt not in nodes:
                nodes[nxt] = len(nodes)
                trans.append((nodes[cur], label, nodes[nxt]))
            cur = nxt
        accepting.add(nodes[cur])
    trie = Fsa(alphabet, len(nodes), {0}, accepting, trans, deterministic=True)
    return trie.minimize()
