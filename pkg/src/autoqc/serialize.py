"""Plain-text formats for automata, structures, and coset graphs.

One token grammar everywhere: fields are whitespace-separated, ``#``
starts a comment, blank lines are ignored.  Writers emit a canonical
ordering (sorted state ids, transitions by source then label), so
writing what was read reproduces the file byte for byte modulo
whitespace.

Alphabets are written as their symbol list only; the involution is
reconstructed by the naming convention used across the package — a
symbol ``x^`` is the inverse of ``x``, and a symbol without a ``^``
partner is its own inverse.
"""

from __future__ import annotations

from .coset import CosetGraphApprox
from .fsa import Fsa
from .pairs import PairAlphabet, PairFsa
from .structure import AutomaticStructure
from .words import PAD, GeneratorAlphabet


class FormatError(ValueError):
    """Malformed input text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((i, body.split()))
    return out


def alphabet_from_symbols(symbols, line: int | None = None) -> GeneratorAlphabet:
    """Rebuild a generator alphabet from its canonical symbol listing."""
    seen = set(symbols)
    if len(seen) != len(symbols):
        raise FormatError("duplicate alphabet symbols", line)
    names: list[str] = []
    selfinv: list[str] = []
    for s in symbols:
        if s.endswith("^"):
            if s[:-1] not in seen:
                raise FormatError("inverse symbol %r has no base symbol" % s, line)
            continue
        names.append(s)
        if s + "^" not in seen:
            selfinv.append(s)
    alph = GeneratorAlphabet.from_generators(names, selfinv)
    if alph.symbols != tuple(symbols):
        raise FormatError(
            "alphabet symbols are not in canonical order: %s" % " ".join(symbols),
            line,
        )
    return alph


def _pair_alphabet_from_symbols(symbols, line: int | None = None) -> PairAlphabet:
    firsts: list[str] = []
    for token in symbols:
        if token.count(":") != 1:
            raise FormatError("bad pair label %r" % token, line)
        x = token.split(":", 1)[0]
        if x != PAD and x not in firsts:
            firsts.append(x)
    pal = PairAlphabet(alphabet_from_symbols(firsts, line))
    written = tuple(pal.format_label(l) for l in pal.labels)
    if written != tuple(symbols):
        raise FormatError("pair labels are not the canonical row-major list", line)
    return pal


def fsa_to_text(m: Fsa | PairFsa) -> str:
    """Canonical listing: header, alphabet, state sets, flag, transitions."""
    f = m.fsa if isinstance(m, PairFsa) else m
    fmt = f.alphabet.format_label
    lines = ["fsa %d %d" % (f.nstates, len(f.alphabet.labels))]
    lines.append("alphabet " + " ".join(fmt(l) for l in f.alphabet.labels))
    lines.append(("initial " + " ".join(str(s) for s in sorted(f.initial))).rstrip())
    lines.append(
        ("accepting " + " ".join(str(s) for s in sorted(f.accepting))).rstrip()
    )
    if f.deterministic:
        lines.append("det")
    for src, label, dst in f.iter_transitions():
        lines.append("trans %d %s %d" % (src, fmt(label), dst))
    return "\n".join(lines) + "\n"


def fsa_from_text(text: str) -> Fsa | PairFsa:
    """Read an automaton; pair labels in the alphabet make it a PairFsa."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty automaton text")
    return _fsa_from_lines(lines)


def _fsa_from_lines(lines: list[tuple[int, list[str]]]) -> Fsa | PairFsa:
    ln, head = lines[0]
    if len(head) != 3 or head[0] != "fsa":
        raise FormatError("expected 'fsa <nstates> <alphabet-size>'", ln)
    try:
        nstates, nlabels = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError("bad counts in fsa header", ln) from None
    ln, alpha = lines[1] if len(lines) > 1 else (ln, [])
    if not alpha or alpha[0] != "alphabet":
        raise FormatError("expected alphabet line after the fsa header", ln)
    symbols = alpha[1:]
    if len(symbols) != nlabels:
        raise FormatError(
            "alphabet size %d does not match header %d" % (len(symbols), nlabels), ln
        )
    pair = any(":" in s for s in symbols)
    if pair:
        alphabet = _pair_alphabet_from_symbols(symbols, ln)
        parse = alphabet.parse_label
    else:
        alphabet = alphabet_from_symbols(symbols, ln)

        def parse(token, _alph=alphabet):
            _alph.label_index(token)
            return token

    initial: list[int] = []
    accepting: list[int] = []
    seen: set[str] = set()
    det = False
    transitions: list[tuple[int, object, int]] = []

    def ids(tokens, ln):
        try:
            return [int(t) for t in tokens]
        except ValueError:
            raise FormatError("bad state id in %r" % " ".join(tokens), ln) from None

    for ln, tokens in lines[2:]:
        key = tokens[0]
        if key in ("initial", "accepting"):
            if key in seen:
                raise FormatError("duplicate %s line" % key, ln)
            seen.add(key)
            (initial if key == "initial" else accepting).extend(ids(tokens[1:], ln))
        elif key == "det":
            if len(tokens) != 1:
                raise FormatError("det line takes no arguments", ln)
            det = True
        elif key == "trans":
            if len(tokens) != 4:
                raise FormatError("expected 'trans <from> <sym> <to>'", ln)
            src, dst = ids([tokens[1], tokens[3]], ln)
            try:
                label = parse(tokens[2])
            except ValueError as exc:
                raise FormatError(str(exc), ln) from None
            transitions.append((src, label, dst))
        else:
            raise FormatError("unknown directive %r" % key, ln)
    if "initial" not in seen or "accepting" not in seen:
        raise FormatError("missing initial or accepting line")
    try:
        f = Fsa(alphabet, nstates, initial, accepting, transitions, deterministic=det)
        return PairFsa(f) if pair else f
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


_SECTION_KEYS = ("acceptor", "equality", "mult")


def structure_to_text(s: AutomaticStructure) -> str:
    """Sections: alphabet, acceptor, equality, one mult per symbol."""
    parts = ["alphabet " + " ".join(s.alphabet.symbols), "acceptor"]
    parts.append(fsa_to_text(s.acceptor).rstrip("\n"))
    parts.append("equality")
    parts.append(fsa_to_text(s.equality).rstrip("\n"))
    for x in s.alphabet.symbols:
        parts.append("mult %s" % x)
        parts.append(fsa_to_text(s.multipliers[x]).rstrip("\n"))
    return "\n".join(parts) + "\n"


def structure_from_text(text: str) -> AutomaticStructure:
    lines = _content_lines(text)
    if not lines or lines[0][1][0] != "alphabet":
        raise FormatError("structure text must open with its alphabet")
    ln, tokens = lines[0]
    alphabet = alphabet_from_symbols(tokens[1:], ln)

    sections: list[tuple[int, list[str], list[tuple[int, list[str]]]]] = []
    for ln, tokens in lines[1:]:
        if tokens[0] in _SECTION_KEYS:
            sections.append((ln, tokens, []))
        elif not sections:
            raise FormatError("content before the first section", ln)
        else:
            sections[-1][2].append((ln, tokens))

    acceptor: Fsa | None = None
    equality: PairFsa | None = None
    multipliers: dict[str, PairFsa] = {}
    order = ["acceptor", "equality"] + ["mult %s" % x for x in alphabet.symbols]
    if [" ".join(head) for _, head, _ in sections] != order:
        raise FormatError(
            "sections must be: %s (got: %s)"
            % (", ".join(order), ", ".join(" ".join(h) for _, h, _ in sections))
        )
    for ln, head, body in sections:
        if not body:
            raise FormatError("empty %s section" % head[0], ln)
        machine = _fsa_from_lines(body)
        if head[0] == "acceptor":
            if isinstance(machine, PairFsa):
                raise FormatError("acceptor must be a one-tape automaton", ln)
            acceptor = machine
        else:
            if not isinstance(machine, PairFsa):
                raise FormatError("%s must be a pair automaton" % head[0], ln)
            if head[0] == "equality":
                equality = machine
            else:
                multipliers[head[1]] = machine
    assert acceptor is not None and equality is not None
    return AutomaticStructure(alphabet, acceptor, equality, multipliers)


def coset_to_text(g: CosetGraphApprox) -> str:
    lines = ["coset-graph %d %d" % (g.stage, g.nvertices)]
    lines.append("base %d" % g.basepoint)
    for v in range(g.nvertices):
        for i, sym in enumerate(g.alphabet.symbols):
            t = g.edges[v][i]
            if t is not None:
                lines.append("edge %d %s %d" % (v, sym, t))
    return "\n".join(lines) + "\n"


def coset_from_text(text: str, alphabet: GeneratorAlphabet) -> CosetGraphApprox:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty coset graph text")
    ln, head = lines[0]
    if len(head) != 3 or head[0] != "coset-graph":
        raise FormatError("expected 'coset-graph <stage> <nvertices>'", ln)
    try:
        stage, nvertices = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError("bad counts in coset-graph header", ln) from None
    if nvertices < 1:
        raise FormatError("coset graph needs at least its basepoint", ln)
    basepoint = 0
    rows = [[None] * len(alphabet.symbols) for _ in range(nvertices)]
    for ln, tokens in lines[1:]:
        if tokens[0] == "base":
            if len(tokens) != 2:
                raise FormatError("expected 'base <id>'", ln)
            try:
                basepoint = int(tokens[1])
            except ValueError:
                raise FormatError("bad basepoint id", ln) from None
            if not 0 <= basepoint < nvertices:
                raise FormatError("basepoint out of range", ln)
        elif tokens[0] == "edge":
            if len(tokens) != 4:
                raise FormatError("expected 'edge <from> <sym> <to>'", ln)
            try:
                src, dst = int(tokens[1]), int(tokens[3])
            except ValueError:
                raise FormatError("bad vertex id", ln) from None
            if tokens[2] not in alphabet:
                raise FormatError("unknown symbol %r" % tokens[2], ln)
            if not (0 <= src < nvertices and 0 <= dst < nvertices):
                raise FormatError("vertex id out of range", ln)
            i = alphabet.index(tokens[2])
            if rows[src][i] is not None and rows[src][i] != dst:
                raise FormatError("conflicting edges from %d" % src, ln)
            rows[src][i] = dst
        else:
            raise FormatError("unknown directive %r" % tokens[0], ln)
    complete = all(t is not None for row in rows for t in row)
    return CosetGraphApprox(
        alphabet=alphabet,
        stage=stage,
        edges=tuple(tuple(row) for row in rows),
        basepoint=basepoint,
        complete=complete,
    )
