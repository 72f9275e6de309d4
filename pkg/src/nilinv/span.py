"""Decomposability by evaluation: is an invariant a combination of products?

Candidates and target are evaluated at random nilpotent tuples and the
resulting exact linear system is solved over the rationals.  A "not in span"
verdict is a proof, since the sampled points already separate the target
from every combination of candidates.  An "in span" verdict is re-checked on
a fresh, disjoint sample set before it is reported.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, SamplingError
from .exact import Matrix, NilTuple
from .linalg import rank, rref, solve
from .words import InvariantSet, TraceWord, WordEvaluator, builtin_set, necklaces, word

DEFAULT_SEED = 1729
ENTRY_RANGE = 3
MAX_ROUNDS = 3


# -- sampling ------------------------------------------------------------------------

def _elementary_pair(rng: random.Random, n: int, steps: int):
    """Random unimodular g with its inverse, both as integer matrices."""
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    g_inv = [row[:] for row in g]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([x for x in range(-ENTRY_RANGE, ENTRY_RANGE + 1) if x])
        # g <- (I + c e_ij) g ; g_inv <- g_inv (I - c e_ij)
        g[i] = [x + c * y for x, y in zip(g[i], g[j])]
        for row in g_inv:
            row[j] -= c * row[i]
    if rng.random() < 0.5:
        k = rng.randrange(n)
        g[k] = [-x for x in g[k]]
        for row in g_inv:
            row[k] = -row[k]
    return Matrix(g), Matrix(g_inv)


def random_nilpotent(rng: random.Random, size: int = 3) -> Matrix:
    """g N g^{-1} with N strictly upper triangular and det(g) = +-1."""
    if size not in (2, 3):
        raise InputError("size must be 2 or 3")
    n = Matrix([[rng.randint(-ENTRY_RANGE, ENTRY_RANGE) if j > i else 0 for j in range(size)]
                for i in range(size)])
    g, g_inv = _elementary_pair(rng, size, 2 * size + 2)
    return g @ n @ g_inv


def random_tuple(rng: random.Random, d: int, size: int = 3) -> NilTuple:
    return NilTuple(tuple(random_nilpotent(rng, size) for _ in range(d)))


def sample_tuple(key: str, d: int, size: int = 3) -> NilTuple:
    """The tuple drawn for a sample key; keys make every sample reproducible."""
    return random_tuple(random.Random(key), d, size)


# -- products and targets ----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ProductExpression:
    """Product of trace words.  Decomposable products have at least two factors."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(sorted(word(f).canonical() for f in self.factors))
        if not fs:
            raise InputError("a product needs at least one factor")
        object.__setattr__(self, "factors", fs)

    def multidegree(self, d: int) -> tuple:
        return tuple(map(sum, zip(*(f.multidegree(d) for f in self.factors))))

    @property
    def max_letter(self) -> int:
        return max(f.max_letter for f in self.factors)

    def evaluate(self, ev: WordEvaluator) -> Fraction:
        out = Fraction(1)
        for f in self.factors:
            out *= ev(f)
        return out

    def __str__(self):
        return "*".join(f"tr({f})" for f in self.factors)


def product_basis(mdeg: Sequence[int], generators: InvariantSet | None = None) -> list[ProductExpression]:
    """All multisets of >= 2 generators whose multidegrees add up to ``mdeg``."""
    gens = builtin_set("P33") if generators is None else generators
    mdeg = tuple(mdeg)
    d = len(mdeg)
    if d < gens.d:
        mdeg += (0,) * (gens.d - d)
        d = gens.d
    items = [(g, g.multidegree(d)) for g in gens if g.max_letter <= d]
    out = []

    def rec(start: int, rest: tuple, chosen: list):
        if not any(rest):
            if len(chosen) >= 2:
                out.append(ProductExpression(tuple(chosen)))
            return
        for k in range(start, len(items)):
            g, m = items[k]
            if all(a <= b for a, b in zip(m, rest)):
                rec(k, tuple(b - a for a, b in zip(m, rest)), chosen + [g])

    rec(0, mdeg, [])
    return sorted(set(out))


def generators_of_degree(mdeg: Sequence[int], generators: InvariantSet | None = None) -> list[ProductExpression]:
    gens = builtin_set("P33") if generators is None else generators
    mdeg = tuple(mdeg) + (0,) * max(0, gens.d - len(mdeg))
    return [ProductExpression((g,)) for g in gens if g.multidegree(len(mdeg)) == mdeg]


Combination = tuple  # ((Fraction, TraceWord), ...)


def combination(target) -> Combination:
    """Normalize a word, a digit string, a mapping word->coef or (coef, word) pairs."""
    if isinstance(target, (TraceWord, str)):
        return ((Fraction(1), word(target)),)
    if isinstance(target, dict):
        target = [(c, w) for w, c in target.items()]
    return tuple((Fraction(c), word(w)) for c, w in target)


def _comb_value(comb: Combination, ev: WordEvaluator) -> Fraction:
    return sum((c * ev(w) for c, w in comb), Fraction(0))


# -- the oracle ------------------------------------------------------------------------

@dataclass(frozen=True)
class SpanDecision:
    member: bool
    coefficients: tuple | None
    samples_used: int
    seed: int
    # non-members: sample keys whose rows already exclude the target;
    # members: number of fresh samples on which the coefficients were re-checked
    certificate: tuple = ()
    validated: int = 0


def _min_samples(k: int) -> int:
    return 2 * k + 8


class _Sampler:
    def __init__(self, label: str, seed: int, d: int, size: int, candidates, targets):
        self.label, self.seed, self.d, self.size = label, seed, d, size
        self.candidates = list(candidates)
        self.targets = list(targets)
        self.count = 0

    def batch(self, n: int):
        keys, rows = [], []
        for _ in range(n):
            key = f"{self.label}:{self.seed}:{self.count}"
            self.count += 1
            ev = WordEvaluator(sample_tuple(key, self.d, self.size))
            keys.append(key)
            rows.append([p.evaluate(ev) for p in self.candidates] + [_comb_value(t, ev) for t in self.targets])
        return keys, rows


def _letters(candidates, combs) -> int:
    m = [p.max_letter for p in candidates] + [w.max_letter for c in combs for _, w in c]
    return max(m, default=1)


def _stable_rows(sampler: _Sampler, n: int, blocks: tuple):
    """Sample until the rank of every leading column block stops growing."""
    keys, rows = sampler.batch(n)
    for _ in range(MAX_ROUNDS):
        before = [rank([r[:c] for r in rows]) for c in blocks]
        k2, r2 = sampler.batch(n)
        keys, rows = keys + k2, rows + r2
        after = [rank([r[:c] for r in rows]) for c in blocks]
        if before == after:
            return keys, rows
        n *= 3
    raise SamplingError(f"evaluation rank did not stabilize (seed {sampler.seed}); retry with another seed")


def in_span(target, candidates: Iterable[ProductExpression], n_samples: int | None = None,
            seed: int = DEFAULT_SEED, d: int | None = None, size: int = 3) -> SpanDecision:
    """Decide whether ``target`` is a linear combination of ``candidates``."""
    comb = combination(target)
    cands = list(candidates)
    k = len(cands)
    if n_samples is None:
        n_samples = _min_samples(k)
    elif n_samples < _min_samples(k):
        raise InputError(f"n_samples must be at least 2*{k}+8 = {_min_samples(k)}")
    d = _letters(cands, [comb]) if d is None else d
    sampler = _Sampler("span", seed, d, size, cands, [comb])
    for _ in range(MAX_ROUNDS):
        keys, rows = _stable_rows(sampler, n_samples, (k, k + 1))
        m = [r[:k] for r in rows]
        if rank(rows) > rank(m):
            # rows independent in [M|y] already rule out membership
            _, piv = rref([list(col) for col in zip(*rows)])
            return SpanDecision(False, None, sampler.count, seed, tuple(keys[i] for i in piv))
        coef = solve(m, [r[k] for r in rows]) if k else []
        _, fresh = sampler.batch(2 * len(rows))
        if all(sum((c * x for c, x in zip(coef, r[:k])), Fraction(0)) == r[k] for r in fresh):
            return SpanDecision(True, tuple(coef), sampler.count, seed, (), len(fresh))
        n_samples *= 3
    raise SamplingError(f"membership did not validate on fresh samples (seed {seed}); retry with another seed")


@dataclass(frozen=True)
class GroupDecision:
    """rank(candidates + targets) - rank(candidates) == len(targets) means no
    nonzero combination of the targets lies in the span."""

    independent: bool
    rank_candidates: int
    rank_total: int
    n_targets: int
    samples_used: int
    seed: int


def group_independent(targets, candidates, seed: int = DEFAULT_SEED, d: int | None = None) -> GroupDecision:
    combs = [combination(t) for t in targets]
    cands = list(candidates)
    k = len(cands)
    d = _letters(cands, combs) if d is None else d
    sampler = _Sampler("group", seed, d, 3, cands, combs)
    _, rows = _stable_rows(sampler, _min_samples(k + len(combs)), (k, k + len(combs)))
    rc = rank([r[:k] for r in rows])
    rt = rank(rows)
    return GroupDecision(rt == rc + len(combs), rc, rt, len(combs), sampler.count, seed)


# -- reports -----------------------------------------------------------------------------

def pprime_groups() -> list[tuple[tuple, list[TraceWord]]]:
    """Elements of P'33 grouped by multidegree, in set order."""
    groups: dict[tuple, list] = {}
    for w in builtin_set("Pprime33"):
        groups.setdefault(w.multidegree(3), []).append(w)
    return list(groups.items())


@dataclass(frozen=True)
class IndecomposabilityItem:
    name: str
    targets: tuple
    mdeg: tuple
    n_candidates: int
    verdicts: tuple  # one GroupDecision per seed

    @property
    def passed(self) -> bool:
        return all(v.independent for v in self.verdicts)

    @property
    def consistent(self) -> bool:
        return len({v.independent for v in self.verdicts}) == 1


def indecomposability_report(seed: int = DEFAULT_SEED, repeats: int = 3) -> list[IndecomposabilityItem]:
    """Rank conditions for the three named items and for every P'33 multidegree group.

    Each group of m targets must raise the rank of the decomposable products
    by exactly m, so no nonzero combination of them is decomposable.
    """
    seeds = tuple(seed + i for i in range(repeats))
    named = [
        ("pair 11223/22113", ["11223", "22113"]),
        ("112213", ["112213"]),
        ("112233", ["112233"]),
    ]
    named += [(f"P' {'/'.join(map(str, ws))}", ws) for _, ws in pprime_groups()]
    out = []
    for name, ws in named:
        ws = tuple(word(w) for w in ws)
        mdeg = ws[0].multidegree(3)
        cands = product_basis(mdeg)
        verdicts = tuple(group_independent(ws, cands, s) for s in seeds)
        out.append(IndecomposabilityItem(name, ws, mdeg, len(cands), verdicts))
    return out


def minimal_generation_report(seed: int = DEFAULT_SEED) -> list[tuple[TraceWord, SpanDecision]]:
    """Each element of P'33 alone, against the products of its multidegree."""
    return [(w, in_span(w, product_basis(w.multidegree(3)), seed=seed)) for w in builtin_set("Pprime33")]


def generation_sanity(max_len: int = 4, seed: int = DEFAULT_SEED, letters: int = 2):
    """Words outside P33 should lie in the span of products and generators of
    their multidegree.  Returns ``[(word, candidates, decision)]``."""
    p33 = builtin_set("P33")
    out = []
    for w in necklaces(letters, max_len):
        if w in p33:
            continue
        mdeg = w.multidegree(3)
        cands = product_basis(mdeg, p33) + generators_of_degree(mdeg, p33)
        out.append((w, cands, in_span(w, cands, seed=seed, d=3)))
    return out


__all__ = [
    "DEFAULT_SEED", "ProductExpression", "SpanDecision", "GroupDecision", "IndecomposabilityItem",
    "random_nilpotent", "random_tuple", "sample_tuple", "product_basis", "generators_of_degree",
    "combination", "in_span", "group_independent", "pprime_groups", "indecomposability_report",
    "minimal_generation_report", "generation_sanity",
]
