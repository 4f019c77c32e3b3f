"""Braid words in B3, Murasugi conjugacy normal forms, closure bookkeeping.

Words are strings over the letters a, b (positive crossings on strands
(0,1) and (1,2)) and their inverses A, B.  Stacking order is bottom to
top, reading the word left to right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as _perms  # noqa: F401  (doc aid only)
from typing import Iterator, Optional


@dataclass(frozen=True)
class BraidLetter:
    """One of the four crossings: generator 'a' or 'b', sign +1 or -1."""

    gen: str
    sign: int

    def __post_init__(self):
        if self.gen not in ("a", "b") or self.sign not in (1, -1):
            raise ValueError(f"bad letter {self.gen!r}/{self.sign}")

    @property
    def char(self) -> str:
        if self.sign == 1:
            return self.gen
        return self.gen.upper()

    def inverse(self) -> "BraidLetter":
        return BraidLetter(self.gen, -self.sign)

    @property
    def strands(self) -> tuple[int, int]:
        """The adjacent strand pair the crossing acts on."""
        return (0, 1) if self.gen == "a" else (1, 2)


LETTERS = {
    "a": BraidLetter("a", 1),
    "A": BraidLetter("a", -1),
    "b": BraidLetter("b", 1),
    "B": BraidLetter("b", -1),
}


class BraidWordError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    """An ordered word in the four braid letters; empty words are allowed."""

    letters: tuple[BraidLetter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[BraidLetter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __str__(self) -> str:
        return "".join(l.char for l in self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def mirror(self) -> "BraidWord":
        """Reverse the word and invert every letter."""
        return BraidWord(tuple(l.inverse() for l in reversed(self.letters)))

    def cyclic_rotate(self, r: int) -> "BraidWord":
        """Move a prefix of length r to the end; the closure link is unchanged."""
        if not self.letters:
            return self
        r %= len(self.letters)
        return BraidWord(self.letters[r:] + self.letters[:r])


def parse_word(text: str) -> BraidWord:
    """Parse a word over {a, A, b, B}, with optional power syntax a^-3 b^2.

    Whitespace is ignored.  Raises :class:`BraidWordError` on any other
    character or a zero exponent.
    """
    letters: list[BraidLetter] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch not in LETTERS:
            raise BraidWordError(f"invalid character {ch!r} at position {i}")
        base = LETTERS[ch]
        i += 1
        if i < n and text[i] == "^":
            i += 1
            j = i
            if j < n and text[j] in "+-":
                j += 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i or not text[i:j].lstrip("+-"):
                raise BraidWordError(f"missing exponent at position {i}")
            exp = int(text[i:j])
            i = j
            if exp == 0:
                raise BraidWordError("zero exponent not allowed")
            if exp < 0:
                base = base.inverse()
                exp = -exp
        else:
            exp = 1
        letters.extend([base] * exp)
    return BraidWord(tuple(letters))


def word(text: str) -> BraidWord:
    """Shorthand for :func:`parse_word`."""
    return parse_word(text)


@dataclass(frozen=True)
class ClosureMeta:
    n_plus: int
    n_minus: int
    writhe: int
    components: int
    permutation: tuple[int, int, int]


def closure_meta(w: BraidWord) -> ClosureMeta:
    """Crossing counts and closure components of a 3-braid word.

    The word acts bottom to top; a and its inverse induce the transposition
    of strands (0,1), b and its inverse of strands (1,2).  Components equal
    the number of cycles of the induced permutation of the three strands.
    """
    perm = [0, 1, 2]
    n_plus = n_minus = 0
    for letter in w:
        i, j = letter.strands
        # track where each starting strand currently sits
        for s in range(3):
            if perm[s] == i:
                perm[s] = j
            elif perm[s] == j:
                perm[s] = i
        if letter.sign == 1:
            n_plus += 1
        else:
            n_minus += 1
    seen = [False] * 3
    comps = 0
    for s in range(3):
        if not seen[s]:
            comps += 1
            t = s
            while not seen[t]:
                seen[t] = True
                t = perm[t]
    return ClosureMeta(n_plus, n_minus, n_plus - n_minus, comps, tuple(perm))


MURASUGI_CLASSES = ("omega0", "omega1", "omega2", "omega3", "omega4", "omega5", "omega6")


@dataclass(frozen=True)
class MurasugiSpec:
    """Parameters for one of the seven conjugacy normal-form families.

    omega0..omega3 take only k; omega4/omega5 additionally l >= 1;
    omega6 takes the exponent list (n1, m1, ..., nj, mj) of a proper
    alternating word, all entries >= 1.
    """

    cls: str
    k: int = 0
    l: Optional[int] = None
    alt: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.cls not in MURASUGI_CLASSES:
            raise ValueError(f"unknown class {self.cls!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0 (mirror covers negative k)")
        if self.cls in ("omega4", "omega5"):
            if self.l is None or self.l < 1:
                raise ValueError(f"{self.cls} needs l >= 1")
        elif self.l is not None:
            raise ValueError(f"{self.cls} takes no l parameter")
        if self.cls == "omega6":
            alt = self.alt
            if not alt or len(alt) % 2 != 0 or any(e < 1 for e in alt):
                raise ValueError("omega6 needs exponents (n1,m1,...,nj,mj), all >= 1")
        elif self.alt:
            raise ValueError(f"{self.cls} takes no alternating exponents")


def murasugi_word(spec: MurasugiSpec) -> BraidWord:
    """The literal normal-form word for a Murasugi class specification."""
    k = spec.k
    ab = parse_word("ab")
    base = BraidWord(ab.letters * (3 * k))
    if spec.cls == "omega0":
        return base
    if spec.cls == "omega1":
        return BraidWord(ab.letters * (3 * k + 1))
    if spec.cls == "omega2":
        return BraidWord(ab.letters * (3 * k + 2))
    if spec.cls == "omega3":
        return BraidWord(ab.letters * (3 * k + 1)) + parse_word("a")
    if spec.cls == "omega4":
        return base + parse_word("A" * spec.l)
    if spec.cls == "omega5":
        return base + parse_word("b" * spec.l)
    # omega6: proper alternating tail a^-n1 b^m1 ... a^-nj b^mj
    tail = []
    pairs = list(zip(spec.alt[0::2], spec.alt[1::2]))
    for n_i, m_i in pairs:
        tail.append("A" * n_i + "b" * m_i)
    return base + parse_word("".join(tail))


def alt_exponents_nm(alt: tuple[int, ...]) -> tuple[int, int]:
    """Total negative-a and positive-b exponents n(w), m(w) of the tail."""
    return sum(alt[0::2]), sum(alt[1::2])


def read_word_file(path) -> list[tuple[int, str, Optional[BraidWord], Optional[str]]]:
    """Read a word file: one word per line, '#' comments, blank lines skipped.

    Returns (lineno, raw_text, word_or_None, error_or_None) tuples so callers
    can keep going past bad lines.
    """
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            try:
                out.append((lineno, stripped, parse_word(stripped), None))
            except BraidWordError as exc:
                out.append((lineno, stripped, None, str(exc)))
    return out


def canonical_rotation(w: BraidWord) -> str:
    """Lexicographically least cyclic rotation, for deduplicating closures."""
    s = str(w)
    if not s:
        return s
    return min(s[i:] + s[:i] for i in range(len(s)))


def all_words_upto(maxlen: int, dedup_cyclic: bool = True) -> list[BraidWord]:
    """All words of length <= maxlen, optionally one per cyclic-rotation class."""
    from itertools import product

    alphabet = "aAbB"
    seen: set[str] = set()
    out: list[BraidWord] = [BraidWord()]
    for n in range(1, maxlen + 1):
        for tup in product(alphabet, repeat=n):
            s = "".join(tup)
            if dedup_cyclic:
                key = min(s[i:] + s[:i] for i in range(n))
                if key != s:
                    continue
            out.append(parse_word(s))
    return out
