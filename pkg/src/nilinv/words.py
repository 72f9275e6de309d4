"""Trace words, the named invariant sets, and separation by evaluation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Sequence, Union

from .errors import InputError
from .exact import NilTuple, _int_matmul

MAX_ENUM_LEN = 8


@dataclass(frozen=True, order=True)
class TraceWord:
    """tr(Y_{i1} ... Y_{ik}) as its 1-based letter sequence."""

    letters: tuple

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if not letters:
            raise InputError("a trace word needs at least one letter")
        if any(x < 1 for x in letters):
            raise InputError(f"letters must be >= 1: {letters}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> "TraceWord":
        """Digit-string syntax: ``"112212"`` is tr(Y1^2 Y2^2 Y1 Y2)."""
        text = text.strip()
        if not text or not text.isdigit() or "0" in text:
            raise InputError(f"bad word {text!r}: use digits 1-9, e.g. 112212")
        return cls(tuple(int(c) for c in text))

    def __str__(self):
        if max(self.letters) > 9:
            return "(" + ",".join(map(str, self.letters)) + ")"
        return "".join(map(str, self.letters))

    @property
    def degree(self) -> int:
        return len(self.letters)

    @property
    def max_letter(self) -> int:
        return max(self.letters)

    def multidegree(self, d: int | None = None) -> tuple:
        d = self.max_letter if d is None else d
        if self.max_letter > d:
            raise InputError(f"word {self} uses letters beyond d={d}")
        return tuple(self.letters.count(k) for k in range(1, d + 1))

    def rotations(self) -> list["TraceWord"]:
        w = self.letters
        return [TraceWord(w[i:] + w[:i]) for i in range(len(w))]

    def canonical(self) -> "TraceWord":
        """Lexicographically least rotation."""
        w = self.letters
        return TraceWord(min(w[i:] + w[:i] for i in range(len(w))))

    def equivalent(self, other: "TraceWord") -> bool:
        return self.canonical() == other.canonical()


WordLike = Union[TraceWord, str, Sequence[int]]


def word(w: WordLike) -> TraceWord:
    if isinstance(w, TraceWord):
        return w
    if isinstance(w, str):
        return TraceWord.parse(w)
    return TraceWord(tuple(w))


@dataclass(frozen=True)
class InvariantSet:
    name: str
    words: tuple
    d: int
    size: int

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def index(self, w: WordLike) -> int:
        """Position of ``w`` in the set, matching up to rotation."""
        c = word(w).canonical()
        for k, u in enumerate(self.words):
            if u.canonical() == c:
                return k
        raise InputError(f"word {word(w)} is not in {self.name}")

    def __contains__(self, w) -> bool:
        try:
            self.index(w)
        except InputError:
            return False
        return True

    def without(self, w: WordLike) -> "InvariantSet":
        k = self.index(w)
        return InvariantSet(f"{self.name}-{self.words[k]}", self.words[:k] + self.words[k + 1:], self.d, self.size)


# -- the named sets ----------------------------------------------------------

def _w(*letters) -> TraceWord:
    return TraceWord(letters)


def _pair_block(i: int, j: int) -> list[TraceWord]:
    return [
        _w(i, j),
        _w(i, i, j),
        _w(i, j, j),
        _w(i, i, j, j),
        _w(i, i, j, j, i, j),
    ]


def _s2(d: int) -> list[TraceWord]:
    out = [_w(i, j) for i, j in combinations(range(1, d + 1), 2)]
    out += [_w(i, j, k) for i, j, k in combinations(range(1, d + 1), 3)]
    return out


def _s33() -> list[TraceWord]:
    # pair-major: the five two-letter words for (1,2), then (1,3), then (2,3)
    out = []
    for i, j in ((1, 2), (1, 3), (2, 3)):
        out += _pair_block(i, j)
    out += [_w(1, 2, 3), _w(1, 3, 2)]
    out += [_w(i, i, j, k) for i, j, k in permutations((1, 2, 3))]
    out += [_w(1, 1, 2, 1, 3), _w(2, 2, 1, 2, 3), _w(3, 3, 1, 3, 2)]
    return out


def _pprime33() -> list[TraceWord]:
    out = [_w(i, i, j, j, k) for i, j, k in permutations((1, 2, 3))]
    out += [_w(i, i, j, j, i, k) for i, j, k in permutations((1, 2, 3))]
    out.append(_w(1, 1, 2, 2, 3, 3))
    return out


SET_NAMES = ("S2", "S32", "S33", "P33", "Pprime33")


def builtin_set(name: str, d: int | None = None) -> InvariantSet:
    """One of the named generating/separating sets, in a fixed documented order.

    ``S2`` (2x2, any d >= 1): tr(YiYj) for i<j, then tr(YiYjYk) for i<j<k.
    ``S32`` (3x3, d=2): 12, 112, 122, 1122, 112212.
    ``S33`` (3x3, d=3): pair blocks for (1,2), (1,3), (2,3); 123, 132; the six
    tr(Yi^2 Yj Yk) in lexicographic order of (i,j,k); 11213, 22123, 33132.
    ``Pprime33``: tr(Yi^2 Yj^2 Yk), then tr(Yi^2 Yj^2 Yi Yk), then 112233.
    ``P33`` is ``S33`` followed by ``Pprime33``.
    """
    if name == "S2":
        if d is None or d < 1:
            raise InputError("S2 needs d >= 1")
        return InvariantSet("S2", tuple(_s2(d)), d, 2)
    fixed = {"S32": 2, "S33": 3, "P33": 3, "Pprime33": 3}
    if name not in fixed:
        raise InputError(f"unknown invariant set {name!r}; choose from {', '.join(SET_NAMES)}")
    if d is not None and d != fixed[name]:
        raise InputError(f"{name} is defined for d={fixed[name]}, not d={d}")
    if name == "S32":
        words = _pair_block(1, 2)
    elif name == "S33":
        words = _s33()
    elif name == "Pprime33":
        words = _pprime33()
    else:
        words = _s33() + _pprime33()
    return InvariantSet(name, tuple(words), fixed[name], 3)


# -- evaluation ----------------------------------------------------------------

class WordEvaluator:
    """Evaluates words on one tuple, caching products of shared prefixes."""

    def __init__(self, t: NilTuple):
        self.t = t
        self._scaled = [m.scaled() for m in t.mats]
        self._cache: dict[tuple, tuple] = {}

    def _product(self, letters: tuple):
        hit = self._cache.get(letters)
        if hit is not None:
            return hit
        if len(letters) == 1:
            out = self._scaled[letters[0] - 1]
        else:
            den, acc = self._product(letters[:-1])
            d2, m = self._scaled[letters[-1] - 1]
            out = (den * d2, _int_matmul(acc, m))
        self._cache[letters] = out
        return out

    def __call__(self, w: TraceWord) -> Fraction:
        if w.max_letter > self.t.d:
            raise InputError(f"word {w} uses letter {w.max_letter} but the tuple has d={self.t.d}")
        den, m = self._product(w.letters)
        return Fraction(sum(m[i][i] for i in range(len(m))), den)


def eval_word(t: NilTuple, w: WordLike) -> Fraction:
    return WordEvaluator(t)(word(w))


def _check_compatible(t: NilTuple, s: InvariantSet):
    if t.size != s.size or t.d != s.d:
        raise InputError(
            f"tuple of {t.d} {t.size}x{t.size} matrices is incompatible with "
            f"{s.name} ({s.d} {s.size}x{s.size} matrices)"
        )


def evaluate_set(t: NilTuple, s: InvariantSet) -> list[Fraction]:
    _check_compatible(t, s)
    ev = WordEvaluator(t)
    return [ev(w) for w in s.words]


def separate(a: NilTuple, b: NilTuple, s: InvariantSet) -> TraceWord | None:
    """First word of ``s`` (in set order) taking different values on a and b."""
    _check_compatible(a, s)
    _check_compatible(b, s)
    ea, eb = WordEvaluator(a), WordEvaluator(b)
    for w in s.words:
        if ea(w) != eb(w):
            return w
    return None


# -- index symmetry --------------------------------------------------------------

def _check_perm(perm: Sequence[int], d: int) -> tuple:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(1, d + 1)):
        raise InputError(f"{perm} is not a permutation of 1..{d}")
    return perm


def invert_perm(perm: Sequence[int]) -> tuple:
    inv = [0] * len(perm)
    for i, p in enumerate(perm, start=1):
        inv[p - 1] = i
    return tuple(inv)


def permute_indices(obj, perm: Sequence[int]):
    """Relabel letter i as perm[i-1] (1-based), for a word or a tuple.

    For a tuple the matrix in slot i moves to slot perm[i-1], so that
    ``eval_word(permute_indices(t, p), w) == eval_word(t, permute_indices(w, p^-1))``.
    """
    if isinstance(obj, NilTuple):
        perm = _check_perm(perm, obj.d)
        out = [None] * obj.d
        for i, m in enumerate(obj.mats):
            out[perm[i] - 1] = m
        return NilTuple(tuple(out))
    w = word(obj)
    if w.max_letter > len(perm):
        raise InputError(f"permutation of length {len(perm)} cannot relabel {w}")
    perm = _check_perm(perm, len(perm))
    return TraceWord(tuple(perm[x - 1] for x in w.letters))


# -- brute force over short words --------------------------------------------------

def necklaces(d: int, max_len: int) -> Iterable[TraceWord]:
    """One representative (least rotation) per cyclic class, by length then lex."""
    for k in range(1, max_len + 1):
        for letters in product(range(1, d + 1), repeat=k):
            if all(letters <= letters[i:] + letters[:i] for i in range(1, k)):
                yield TraceWord(letters)


def all_words_agree(a: NilTuple, b: NilTuple, max_len: int) -> TraceWord | None:
    """First cyclic word class of length <= max_len on which a and b differ."""
    if max_len < 1:
        raise InputError("max_len must be >= 1")
    if max_len > MAX_ENUM_LEN:
        raise InputError(f"max_len is capped at {MAX_ENUM_LEN} (d**max_len words)")
    if a.d != b.d or a.size != b.size:
        raise InputError("tuples must have the same d and matrix size")
    ea, eb = WordEvaluator(a), WordEvaluator(b)
    for w in necklaces(a.d, max_len):
        if ea(w) != eb(w):
            return w
    return None

