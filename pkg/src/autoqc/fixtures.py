"""Ready-made automatic structures for small families of groups.

Free groups and free abelian rank two get hand-built machines whose
normal forms are the ShortLex geodesics; finite groups are converted
from a completed coset enumeration over the trivial subgroup, so any
presentation small enough to enumerate can feed the detectors.
"""

from __future__ import annotations

from collections import deque

from .coset import CosetGraphApprox, SubgroupSpec, enumerate_cosets
from .fsa import Fsa, fsa_for_words
from .pairs import PairAlphabet, PairFsa, diagonal, pair_fsa_for_pairs
from .structure import AutomaticStructure, StructureError
from .words import PAD, GeneratorAlphabet, Presentation, parse_presentation

_FREE_NAMES = "abcdefgh"


def _free_alphabet(rank: int) -> GeneratorAlphabet:
    if rank < 1:
        raise ValueError("rank must be at least 1")
    if rank <= len(_FREE_NAMES):
        names = tuple(_FREE_NAMES[:rank])
    else:
        names = tuple("g%d" % (i + 1) for i in range(rank))
    return GeneratorAlphabet.from_generators(names)


def shortlex_free(rank: int) -> AutomaticStructure:
    """Free group of the given rank; normal forms are reduced words."""
    alphabet = _free_alphabet(rank)
    syms = alphabet.symbols
    n = len(syms)

    # acceptor: state 0 fresh, state 1+i after letter syms[i]; a letter
    # may not follow its own inverse
    acc_trans = []
    for i, x in enumerate(syms):
        acc_trans.append((0, x, 1 + i))
        for j, y in enumerate(syms):
            if syms[j] != alphabet.inverse(x):
                acc_trans.append((1 + i, y, 1 + j))
    acceptor = Fsa(alphabet, n + 1, {0}, set(range(n + 1)), acc_trans, deterministic=True)

    pal = PairAlphabet(alphabet)
    multipliers = {}
    for x in syms:
        xinv = alphabet.inverse(x)
        final = n + 1
        trans = []
        for s in range(n + 1):
            last = None if s == 0 else syms[s - 1]
            for j, y in enumerate(syms):
                if last is None or y != alphabet.inverse(last):
                    trans.append((s, (y, y), 1 + j))
            if last is None or x != alphabet.inverse(last):
                trans.append((s, (PAD, x), final))  # append x
            if last is None or last != x:
                trans.append((s, (xinv, PAD), final))  # cancel trailing x^-1
        multipliers[x] = PairFsa(
            Fsa(pal, n + 2, {0}, {final}, trans, deterministic=True)
        )

    presentation = Presentation(alphabet, ())
    return AutomaticStructure(
        alphabet,
        acceptor,
        diagonal(acceptor),
        multipliers,
        presentation=presentation,
        name="free:%d" % rank,
    )


def shortlex_free_abelian() -> AutomaticStructure:
    """Free abelian group on two generators; forms are x-block then y-block."""
    alphabet = GeneratorAlphabet.from_generators(("x", "y"))
    x, xi, y, yi = alphabet.symbols

    # acceptor states: 0 fresh, 1 pos-x run, 2 neg-x run, 3 pos-y run, 4 neg-y run
    acc_trans = [
        (0, x, 1), (0, xi, 2), (0, y, 3), (0, yi, 4),
        (1, x, 1), (1, y, 3), (1, yi, 4),
        (2, xi, 2), (2, y, 3), (2, yi, 4),
        (3, y, 3),
        (4, yi, 4),
    ]
    acceptor = Fsa(alphabet, 5, {0}, {0, 1, 2, 3, 4}, acc_trans, deterministic=True)

    vec = {x: (1, 0), xi: (-1, 0), y: (0, 1), yi: (0, -1), PAD: (0, 0)}
    row = {s: {} for s in range(5)}
    for s, a, t in acc_trans:
        row[s][a] = t

    pal = PairAlphabet(alphabet)
    bound = 3

    def multiplier(target: tuple[int, int]) -> PairFsa:
        # track both acceptor runs and the exponent lead of the second
        # tape over the first; the lead never needs to exceed `bound`
        start = (0, 0, 0, 0, False, False)
        ids = {start: 0}
        order = [start]
        trans = []
        i = 0
        while i < len(order):
            qw, qu, dx, dy, wdone, udone = order[i]
            for a, b in pal.labels:
                if wdone and a != PAD:
                    continue
                if udone and b != PAD:
                    continue
                nqw, nwdone = (qw, True) if a == PAD else (row[qw].get(a), wdone)
                nqu, nudone = (qu, True) if b == PAD else (row[qu].get(b), udone)
                if nqw is None or nqu is None:
                    continue
                ndx = dx + vec[b][0] - vec[a][0]
                ndy = dy + vec[b][1] - vec[a][1]
                if abs(ndx) > bound or abs(ndy) > bound:
                    continue
                nxt = (nqw, nqu, ndx, ndy, nwdone, nudone)
                j = ids.get(nxt)
                if j is None:
                    j = len(order)
                    ids[nxt] = j
                    order.append(nxt)
                trans.append((i, (a, b), j))
            i += 1
        accepting = {
            i
            for i, (qw, qu, dx, dy, _, _) in enumerate(order)
            if (dx, dy) == target
        }
        m = Fsa(pal, len(order), {0}, accepting, trans)
        return PairFsa(m.minimize())

    multipliers = {s: multiplier(vec[s]) for s in alphabet.symbols}
    presentation = parse_presentation("gens x y\nrel x y x^ y^\n")
    return AutomaticStructure(
        alphabet,
        acceptor,
        diagonal(acceptor),
        multipliers,
        presentation=presentation,
        name="zz",
    )


def complete_cayley_graph(
    presentation: Presentation, max_cosets: int = 10**4
) -> CosetGraphApprox:
    """Run the enumerator over the trivial subgroup until it finishes."""
    trivial = SubgroupSpec(presentation.alphabet, ())
    snap = None
    for snap in enumerate_cosets(presentation, trivial, max_cosets=max_cosets):
        pass
    assert snap is not None and snap.complete
    return snap


def from_cayley(
    presentation: Presentation,
    graph: CosetGraphApprox,
    name: str = "",
) -> AutomaticStructure:
    """Structure for a finite group given its completed Cayley graph.

    Normal forms are the first words found by a breadth-first search
    from the basepoint taking symbols in order — the ShortLex-least word
    for each element.  Multipliers are read off the graph edges.
    """
    alphabet = presentation.alphabet
    if graph.alphabet != alphabet:
        raise StructureError("graph alphabet differs from the presentation's")
    if not graph.complete:
        raise StructureError("Cayley graph is not complete")
    nv = graph.nvertices
    syms = alphabet.symbols

    words: dict[int, tuple[str, ...]] = {graph.basepoint: ()}
    queue = deque([graph.basepoint])
    while queue:
        v = queue.popleft()
        for i, s in enumerate(syms):
            t = graph.edges[v][i]
            if t not in words:
                words[t] = words[v] + (s,)
                queue.append(t)
    if len(words) != nv:
        raise StructureError("Cayley graph is not connected from the basepoint")

    acceptor = fsa_for_words(alphabet, [words[v] for v in range(nv)])
    multipliers = {
        s: pair_fsa_for_pairs(
            alphabet, [(words[v], words[graph.edges[v][i]]) for v in range(nv)]
        )
        for i, s in enumerate(syms)
    }
    return AutomaticStructure(
        alphabet,
        acceptor,
        diagonal(acceptor),
        multipliers,
        presentation=presentation,
        name=name,
    )


def cyclic_structure(n: int) -> AutomaticStructure:
    """Cyclic group of order n on one generator."""
    if n < 1:
        raise ValueError("order must be at least 1")
    alphabet = GeneratorAlphabet.from_generators(("a",))
    presentation = Presentation(alphabet, (("a",) * n,))
    graph = complete_cayley_graph(presentation, max_cosets=max(4 * n, 16))
    return from_cayley(presentation, graph, name="cyclic:%d" % n)


def s3_structure() -> AutomaticStructure:
    """Symmetric group on three points, two self-inverse generators.

    The square relators are implicit in the self-inverse declaration, so
    only the braid-style relator (ab)^3 is written.
    """
    presentation = parse_presentation("gens a b\nselfinv a b\nrel a b a b a b\n")
    graph = complete_cayley_graph(presentation, max_cosets=64)
    return from_cayley(presentation, graph, name="s3")
