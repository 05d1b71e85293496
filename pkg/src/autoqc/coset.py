"""Partial Todd-Coxeter coset enumeration with deterministic snapshots.

The enumerator maintains a partial action of the generators on cosets of
a finitely generated subgroup.  Deductions are drained eagerly
(Felsch-style): every relator is scanned at every live coset and every
subgroup generator at the basepoint, filling single-edge gaps, before a
new coset is ever defined.  Coincidences merge eagerly through a
union-find keyed to the smallest coset id, so every emitted snapshot is
deterministic, involution-closed, and independent of scan order.

Snapshots approximate the subgroup's Schreier graph from below: words
tracing basepoint cycles always represent subgroup elements, and every
ball around the basepoint eventually stabilizes because new cosets are
defined breadth-first (oldest vertex, first free symbol).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .fsa import Fsa
from .words import GeneratorAlphabet, Presentation, Word

DEFAULT_COSET_CAP = 10**5


class CosetLimitError(RuntimeError):
    """The coset cap was hit; carries the most recent snapshot."""

    def __init__(self, message: str, snapshot: "CosetGraphApprox"):
        super().__init__(message)
        self.snapshot = snapshot


@dataclass(frozen=True)
class SubgroupSpec:
    """A finitely generated subgroup given by literal generator words."""

    alphabet: GeneratorAlphabet
    words: tuple[Word, ...]

    def __post_init__(self):
        kept = []
        for w in self.words:
            w = self.alphabet.check_word(w)
            if w:
                kept.append(w)
        object.__setattr__(self, "words", tuple(kept))

    @classmethod
    def parse(cls, alphabet: GeneratorAlphabet, text: str) -> "SubgroupSpec":
        """Words as whitespace-separated letters, generators split on ';'."""
        chunks = text.split(";")
        return cls(alphabet, tuple(alphabet.parse_word(c) for c in chunks if c.strip()))

    @property
    def symmetrized(self) -> tuple[Word, ...]:
        """The generator list followed by its formal inverses."""
        return self.words + tuple(self.alphabet.formal_inverse(w) for w in self.words)

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)


@dataclass(frozen=True)
class CosetGraphApprox:
    """One immutable enumeration snapshot (a partial Schreier graph)."""

    alphabet: GeneratorAlphabet
    stage: int
    edges: tuple[tuple[int | None, ...], ...]
    basepoint: int = 0
    complete: bool = False

    @property
    def nvertices(self) -> int:
        return len(self.edges)

    def neighbor(self, vertex: int, symbol: str) -> int | None:
        return self.edges[vertex][self.alphabet.index(symbol)]

    def same_graph(self, other: "CosetGraphApprox") -> bool:
        """Structural equality ignoring the stage counter."""
        return (
            self.alphabet == other.alphabet
            and self.basepoint == other.basepoint
            and self.edges == other.edges
        )

    def ball(self, radius: int) -> "CosetGraphApprox":
        """Induced subgraph within edge-distance ``radius`` of the basepoint.

        Vertices are renumbered in breadth-first discovery order, so two
        label-isomorphic balls compare equal via :meth:`same_graph`.
        """
        if radius < 0:
            raise ValueError("radius must be non-negative")
        order = [self.basepoint]
        dist = {self.basepoint: 0}
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            if dist[v] == radius:
                continue
            for t in self.edges[v]:
                if t is not None and t not in dist:
                    dist[t] = dist[v] + 1
                    order.append(t)
        keep = set(order)
        renum = {v: i for i, v in enumerate(order)}
        rows = tuple(
            tuple(renum[t] if t in keep and t is not None else None for t in self.edges[v])
            for v in order
        )
        total = all(t is not None for row in rows for t in row)
        return CosetGraphApprox(
            self.alphabet, self.stage, rows, 0, complete=self.complete and total
        )


def graph_to_fsa(x: CosetGraphApprox) -> Fsa:
    """Acceptor of basepoint cycles: every accepted word lies in H."""
    syms = x.alphabet.symbols
    trans = [
        (v, syms[i], t)
        for v, row in enumerate(x.edges)
        for i, t in enumerate(row)
        if t is not None
    ]
    return Fsa(
        x.alphabet,
        max(x.nvertices, 1),
        {x.basepoint},
        {x.basepoint},
        trans,
        deterministic=True,
    )


class _CapHit(Exception):
    pass


class _Table:
    """Mutable enumeration state: rows of partial edges plus union-find."""

    def __init__(self, alphabet: GeneratorAlphabet, cap: int):
        self.alphabet = alphabet
        self.nsyms = len(alphabet.symbols)
        self.inv_idx = [alphabet.index(alphabet.inverse(s)) for s in alphabet.symbols]
        self.cap = cap
        self.rows: list[list[int | None]] = [[None] * self.nsyms]
        self.parent = [0]
        self.events = 0  # bumped on every new edge or merge

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def live(self) -> list[int]:
        return [v for v in range(len(self.rows)) if self.parent[v] == v]

    def edge(self, v: int, i: int) -> int | None:
        t = self.rows[v][i]
        if t is None:
            return None
        t = self.find(t)
        self.rows[v][i] = t
        return t

    def new_coset(self) -> int:
        if len(self.rows) >= self.cap:
            raise _CapHit()
        self.rows.append([None] * self.nsyms)
        self.parent.append(len(self.rows) - 1)
        return len(self.rows) - 1

    def _drain(self, edges: deque, merges: deque) -> None:
        """Apply queued edge definitions and coset identifications to a
        fixpoint, keeping determinism, involution, and smallest-id reps."""
        while edges or merges:
            while merges:
                a, b = merges.popleft()
                a, b = self.find(a), self.find(b)
                if a == b:
                    continue
                if b < a:
                    a, b = b, a
                self.parent[b] = a
                self.events += 1
                row = self.rows[b]
                for j in range(self.nsyms):
                    if row[j] is not None:
                        edges.append((a, j, row[j]))
            if not edges:
                break
            v, j, s = edges.popleft()
            v, s = self.find(v), self.find(s)
            cur = self.edge(v, j)
            if cur is None:
                self.rows[v][j] = s
                self.events += 1
                back = self.edge(s, self.inv_idx[j])
                if back is None:
                    self.rows[s][self.inv_idx[j]] = v
                elif back != v:
                    merges.append((back, v))
            elif cur != s:
                merges.append((cur, s))

    def set_edge(self, v: int, i: int, t: int) -> None:
        self._drain(deque([(v, i, t)]), deque())

    def merge(self, a: int, b: int) -> None:
        self._drain(deque(), deque([(a, b)]))

    def scan(self, v: int, idxs: Sequence[int]) -> None:
        """Scan a closed cycle word at v, deducing a single missing edge
        or a coincidence."""
        v = self.find(v)
        f, p = v, 0
        while p < len(idxs):
            t = self.edge(f, idxs[p])
            if t is None:
                break
            f, p = t, p + 1
        if p == len(idxs):
            if f != v:
                self.merge(f, v)
            return
        b, q = v, len(idxs)
        while q > p + 1:
            t = self.edge(b, self.inv_idx[idxs[q - 1]])
            if t is None:
                break
            b, q = t, q - 1
        if q == p + 1:
            self.set_edge(f, idxs[p], b)

    def trace_fill(self, idxs: Sequence[int]) -> None:
        """Walk a subgroup generator from the basepoint back to itself,
        defining every missing edge along the way."""
        v = self.find(0)
        for k, i in enumerate(idxs):
            v = self.find(v)
            last = k == len(idxs) - 1
            t = self.edge(v, i)
            if t is None:
                t = self.find(0) if last else self.new_coset()
                self.set_edge(v, i, t)
                v = self.find(t)
            elif last and t != self.find(0):
                self.merge(t, self.find(0))
            else:
                v = t

    def first_gap(self) -> tuple[int, int]:
        for v in range(len(self.rows)):
            if self.parent[v] != v:
                continue
            for i in range(self.nsyms):
                if self.edge(v, i) is None:
                    return v, i
        raise LookupError("table is complete")

    def snapshot(self, stage: int) -> CosetGraphApprox:
        order = self.live()
        renum = {v: i for i, v in enumerate(order)}
        rows = tuple(
            tuple(
                renum[self.edge(v, i)] if self.edge(v, i) is not None else None
                for i in range(self.nsyms)
            )
            for v in order
        )
        total = all(t is not None for row in rows for t in row)
        return CosetGraphApprox(self.alphabet, stage, rows, 0, complete=total)


def enumerate_cosets(
    presentation: Presentation,
    subgroup: SubgroupSpec,
    max_cosets: int = DEFAULT_COSET_CAP,
) -> Iterator[CosetGraphApprox]:
    """Yield snapshots X_1, X_2, ..., ending iff the table completes.

    Each stage drains all deductions (relator scans everywhere, subgroup
    generator scans at the basepoint, single-gap fills, coincidences);
    from stage 2 on, a stage starts by defining one new coset at the
    first free slot in vertex-then-symbol order, which keeps the
    definition order breadth-first and the snapshots locally convergent.
    """
    if subgroup.alphabet != presentation.alphabet:
        raise ValueError("subgroup words use a different alphabet")
    if max_cosets < 1:
        raise ValueError("coset cap must be positive")
    alphabet = presentation.alphabet
    t = _Table(alphabet, max_cosets)
    rel_idxs = [tuple(alphabet.index(x) for x in r) for r in presentation.relators]
    sub_idxs = [tuple(alphabet.index(x) for x in w) for w in subgroup.words]

    def close() -> None:
        while True:
            before = t.events
            for w in sub_idxs:
                t.scan(t.find(0), w)
            for v in range(len(t.rows)):
                if t.parent[v] != v:
                    continue
                for r in rel_idxs:
                    t.scan(v, r)
            if t.events == before:
                return

    stage = 1
    try:
        for w in sub_idxs:
            t.trace_fill(w)
        close()
    except _CapHit:
        raise CosetLimitError(
            "coset cap %d exceeded at stage %d" % (max_cosets, stage),
            t.snapshot(stage),
        ) from None
    snap = t.snapshot(stage)
    yield snap
    while not snap.complete:
        stage += 1
        try:
            v, i = t.first_gap()
            t.set_edge(v, i, t.new_coset())
            close()
        except _CapHit:
            raise CosetLimitError(
                "coset cap %d exceeded at stage %d" % (max_cosets, stage), snap
            ) from None
        snap = t.snapshot(stage)
        yield snap
