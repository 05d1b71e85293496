"""Alphabets with formal inversion, words, and finite presentations.

Words are plain tuples of symbol names.  Nothing in this module rewrites
implicitly: free reduction is an explicit operation, because several
consumers (path analysis in particular) need the unreduced word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Word = tuple[str, ...]

#: reserved padding token of the two-tape layer; never a generator name
PAD = "_"


class AlphabetError(ValueError):
    """A symbol or word is inconsistent with its alphabet."""


class PresentationError(ValueError):
    """Malformed presentation text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


def _check_name(name: str) -> None:
    if not name or not name.isprintable() or any(c.isspace() for c in name):
        raise AlphabetError("bad symbol name %r" % (name,))
    if name == PAD or ":" in name or "#" in name:
        raise AlphabetError("symbol name %r is reserved" % (name,))


class GeneratorAlphabet:
    """Ordered generator symbols closed under a formal inversion.

    Inverse letters are distinct first-class symbols (``x^`` names the
    inverse of ``x`` by convention); a symbol may be its own inverse when
    the generator is declared self-inverse.  The symbol order is total,
    fixed at construction, and is the tie-break order for ShortLex
    everywhere in the package.
    """

    __slots__ = ("symbols", "generators", "_inv", "_index")

    def __init__(
        self,
        symbols: Sequence[str],
        inverses: Mapping[str, str],
        generators: Sequence[str] | None = None,
    ):
        symbols = tuple(symbols)
        if len(set(symbols)) != len(symbols):
            raise AlphabetError("duplicate symbols")
        if not symbols:
            raise AlphabetError("empty alphabet")
        for s in symbols:
            _check_name(s)
        inv = dict(inverses)
        if set(inv) != set(symbols):
            raise AlphabetError("inversion map must cover the symbols exactly")
        for s, t in inv.items():
            if t not in inv or inv[t] != s:
                raise AlphabetError("inversion is not an involution at %r" % (s,))
        self.symbols = symbols
        self._inv = inv
        self._index = {s: i for i, s in enumerate(symbols)}
        if generators is None:
            # canonical base choice: the earlier symbol of each inverse pair
            generators = tuple(
                s for s in symbols if self._index[s] <= self._index[inv[s]]
            )
        self.generators = tuple(generators)

    @classmethod
    def from_generators(
        cls, names: Sequence[str], self_inverse: Iterable[str] = ()
    ) -> "GeneratorAlphabet":
        """Build the alphabet ``x, x^, y, y^, ...`` in declaration order."""
        selfinv = set(self_inverse)
        unknown = selfinv - set(names)
        if unknown:
            raise AlphabetError("self-inverse names not declared: %s" % sorted(unknown))
        symbols: list[str] = []
        inv: dict[str, str] = {}
        for n in names:
            _check_name(n)
            if n in selfinv:
                symbols.append(n)
                inv[n] = n
            else:
                ni = n + "^"
                symbols.extend((n, ni))
                inv[n] = ni
                inv[ni] = n
        return cls(symbols, inv, generators=tuple(names))

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, sym: object) -> bool:
        return sym in self._index

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GeneratorAlphabet)
            and self.symbols == other.symbols
            and self._inv == other._inv
        )

    def __hash__(self) -> int:
        return hash((self.symbols, tuple(sorted(self._inv.items()))))

    def __repr__(self) -> str:
        return "GeneratorAlphabet(%r)" % (list(self.symbols),)

    # -- label protocol shared with PairAlphabet --------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return self.symbols

    def label_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise AlphabetError("letter %r not in alphabet" % (label,)) from None

    def format_label(self, label: str) -> str:
        return label

    # ----------------------------------------------------------------------

    def index(self, sym: str) -> int:
        return self.label_index(sym)

    def inverse(self, sym: str) -> str:
        try:
            return self._inv[sym]
        except KeyError:
            raise AlphabetError("letter %r not in alphabet" % (sym,)) from None

    def check_word(self, word: Sequence[str]) -> Word:
        w = tuple(word)
        for letter in w:
            if letter not in self._index:
                raise AlphabetError("letter %r not in alphabet" % (letter,))
        return w

    def formal_inverse(self, word: Sequence[str]) -> Word:
        """Reverse the word and invert each letter; no reduction."""
        return tuple(self._inv[x] for x in reversed(self.check_word(word)))

    def shortlex_key(self, word: Sequence[str]):
        return (len(word), tuple(self._index[x] for x in word))

    def parse_word(self, text: str) -> Word:
        """Whitespace-separated letters; ``x^`` may name the inverse of x."""
        letters = []
        for tok in text.split():
            if tok in self._index:
                letters.append(tok)
            elif tok.endswith("^") and tok[:-1] in self._index:
                # convenience for self-inverse generators written with a hat
                base = tok[:-1]
                if self._inv[base] != base:
                    raise AlphabetError("letter %r not in alphabet" % (tok,))
                letters.append(base)
            else:
                raise AlphabetError("letter %r not in alphabet" % (tok,))
        return tuple(letters)

    def format_word(self, word: Sequence[str]) -> str:
        return " ".join(self.check_word(word))


def free_reduce(alphabet: GeneratorAlphabet, word: Sequence[str]) -> Word:
    """Cancel adjacent formal inverses until none remain (stack pass)."""
    stack: list[str] = []
    for letter in alphabet.check_word(word):
        if stack and stack[-1] == alphabet.inverse(letter):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def cyclic_reduce(alphabet: GeneratorAlphabet, word: Sequence[str]) -> Word:
    """Freely reduce, then strip cancelling first/last letter pairs."""
    w = free_reduce(alphabet, word)
    while len(w) >= 2 and w[0] == alphabet.inverse(w[-1]):
        w = w[1:-1]
    return w


def substitute(word: Sequence[str], images: Mapping[str, Sequence[str]]) -> Word:
    """Concatenate the images of the letters of ``word``, without reducing.

    The caller is responsible for supplying images of inverse letters that
    are formal inverses of each other; this function only concatenates
    (the path, not the element, is usually what is wanted).
    """
    out: list[str] = []
    for letter in word:
        try:
            image = images[letter]
        except KeyError:
            raise AlphabetError("no image for letter %r" % (letter,)) from None
        out.extend(image)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: alphabet (with inversion) plus relator words."""

    alphabet: GeneratorAlphabet
    relators: tuple[Word, ...]

    def __post_init__(self):
        for r in self.relators:
            self.alphabet.check_word(r)


def parse_presentation(text: str) -> Presentation:
    """Parse the ``gens`` / ``selfinv`` / ``rel`` line format.

    Statements are separated by newlines or ``;``.  ``#`` starts a comment.
    Relators are freely and cyclically reduced; a relator that reduces to
    the empty word is rejected.
    """
    statements: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for chunk in line.split(";"):
            toks = chunk.split()
            if toks:
                statements.append((lineno, toks))
    gens: list[str] | None = None
    gens_line = 0
    selfinv: list[str] = []
    rel_statements: list[tuple[int, list[str]]] = []
    for lineno, toks in statements:
        key, rest = toks[0], toks[1:]
        if key == "gens":
            if gens is not None:
                raise PresentationError("duplicate gens statement", lineno)
            if not rest:
                raise PresentationError("gens statement lists no generators", lineno)
            gens, gens_line = rest, lineno
        elif key == "selfinv":
            if not rest:
                raise PresentationError("selfinv statement lists no generators", lineno)
            selfinv.extend(rest)
        elif key == "rel":
            rel_statements.append((lineno, rest))
        else:
            raise PresentationError("unknown statement %r" % (key,), lineno)
    if gens is None:
        raise PresentationError("missing gens statement")
    try:
        alphabet = GeneratorAlphabet.from_generators(gens, self_inverse=selfinv)
    except AlphabetError as e:
        raise PresentationError(str(e), gens_line) from None
    relators = []
    for lineno, toks in rel_statements:
        try:
            w = alphabet.parse_word(" ".join(toks))
        except AlphabetError as e:
            raise PresentationError(str(e), lineno) from None
        w = cyclic_reduce(alphabet, w)
        if not w:
            raise PresentationError("relator is trivial after reduction", lineno)
        relators.append(w)
    return Presentation(alphabet, tuple(relators))


def format_presentation(p: Presentation) -> str:
    lines = ["gens " + " ".join(p.alphabet.generators)]
    selfinv = [g for g in p.alphabet.generators if p.alphabet.inverse(g) == g]
    if selfinv:
        lines.append("selfinv " + " ".join(selfinv))
    for r in p.relators:
        lines.append("rel " + " ".join(r))
    return "\n".join(lines) + "\n"
