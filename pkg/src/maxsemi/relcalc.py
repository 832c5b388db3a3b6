"""Finite binary relations on {0, ..., n-1} and full-relation witnesses.

A relation is a boolean n-by-n matrix; composition is the boolean matrix
product read left to right.  Whenever rho and the converse of sigma are
total and neither is a permutation, the semigroup generated by the
permutation relations together with rho and sigma contains the full
relation.  Two independent algorithms produce witness words for it:
a breadth-first search returning a shortest word, and the constructive
row-growing procedure combined with its dual.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Union


class DimensionMismatch(ValueError):
    """Relations of different sizes cannot be composed."""


class HypothesisViolated(ValueError):
    """The totality and non-permutation hypotheses do not hold."""


@dataclass(frozen=True)
class Relation:
    """Binary relation on {0, ..., n-1}, stored as a bitmask row by row."""

    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need n >= 1")
        if not 0 <= self.mask < 1 << (self.n * self.n):
            raise ValueError("mask out of range")

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Relation":
        mask = 0
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i},{j}) outside [0,{n})^2")
            mask |= 1 << (i * n + j)
        return cls(n, mask)

    @classmethod
    def from_permutation(cls, images) -> "Relation":
        images = tuple(images)
        return cls.from_pairs(len(images), enumerate(images))

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls.from_pairs(n, ((i, i) for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(n, (1 << (n * n)) - 1)

    @property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if self.mask >> (i * self.n + j) & 1
        )

    def row(self, i: int) -> int:
        return self.mask >> (i * self.n) & ((1 << self.n) - 1)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        i, j = pair
        return bool(self.mask >> (i * self.n + j) & 1)

    def compose(self, other: "Relation") -> "Relation":
        if self.n != other.n:
            raise DimensionMismatch(f"sizes {self.n} and {other.n}")
        rows = [other.row(j) for j in range(self.n)]
        out = 0
        for i in range(self.n):
            r, acc = self.row(i), 0
            while r:
                j = (r & -r).bit_length() - 1
                acc |= rows[j]
                r &= r - 1
            out |= acc << (i * self.n)
        return Relation(self.n, out)

    def inverse(self) -> "Relation":
        return Relation.from_pairs(self.n, ((j, i) for i, j in self.pairs))

    @property
    def is_total(self) -> bool:
        return all(self.row(i) for i in range(self.n))

    @property
    def is_permutation(self) -> bool:
        seen = 0
        for i in range(self.n):
            r = self.row(i)
            if r & (r - 1) or not r:
                return False
            seen |= r
        return seen == (1 << self.n) - 1

    @property
    def is_full(self) -> bool:
        return self.mask == (1 << (self.n * self.n)) - 1

    def image_of(self, subset: int) -> int:
        """Row union over a set of points given as a bitmask."""
        acc, r = 0, subset
        while r:
            j = (r & -r).bit_length() - 1
            acc |= self.row(j)
            r &= r - 1
        return acc

    def __str__(self) -> str:
        inner = ",".join(f"({i},{j})" for i, j in sorted(self.pairs))
        return "{" + inner + "}"


def rel_compose(a: Relation, b: Relation) -> Relation:
    return a.compose(b)


def is_total(a: Relation) -> bool:
    return a.is_total


def invert_rel(a: Relation) -> Relation:
    return a.inverse()


def parse_relation(text: str, n: int) -> Relation:
    """Parse a sorted pair list such as "{(0,0),(0,1),(1,0)}"."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError("relation must be wrapped in braces")
    body = body[1:-1].replace(" ", "")
    pairs = []
    if body:
        for chunk in body.replace("),(", ");(").split(";"):
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ValueError(f"bad pair {chunk!r}")
            i, j = chunk[1:-1].split(",")
            pairs.append((int(i), int(j)))
    return Relation.from_pairs(n, pairs)


# ---------------------------------------------------------------------------
# witness words


@dataclass(frozen=True)
class Letter:
    """One generator: RHO, SIGMA, or a permutation of {0,...,n-1}."""

    kind: str  # "perm" | "rho" | "sigma"
    perm: tuple[int, ...] | None = None

    def sort_key(self):
        if self.kind == "perm":
            return (0, self.perm)
        return (1,) if self.kind == "rho" else (2,)

    def to_json(self):
        if self.kind == "perm":
            return {"perm": list(self.perm)}
        return self.kind


RHO = Letter("rho")
SIGMA = Letter("sigma")


def perm_letter(images) -> Letter:
    return Letter("perm", tuple(images))


@dataclass(frozen=True)
class Word:
    """Nonempty sequence of letters, evaluated left to right."""

    letters: tuple[Letter, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("words are nonempty")

    def __len__(self) -> int:
        return len(self.letters)

    def to_json(self):
        return [l.to_json() for l in self.letters]


def evaluate_word(word: Word, rho: Relation, sigma: Relation) -> Relation:
    if rho.n != sigma.n:
        raise DimensionMismatch(f"sizes {rho.n} and {sigma.n}")
    out: Relation | None = None
    for letter in word.letters:
        if letter.kind == "rho":
            step = rho
        elif letter.kind == "sigma":
            step = sigma
        else:
            step = Relation.from_permutation(letter.perm)
        out = step if out is None else out.compose(step)
    assert out is not None
    return out


def _check_hypotheses(rho: Relation, sigma: Relation) -> None:
    if rho.n != sigma.n:
        raise DimensionMismatch(f"sizes {rho.n} and {sigma.n}")
    if not rho.is_total:
        raise HypothesisViolated("rho is not total")
    if not sigma.inverse().is_total:
        raise HypothesisViolated("the converse of sigma is not total")
    if rho.is_permutation:
        raise HypothesisViolated("rho is a permutation")
    if sigma.is_permutation:
        raise HypothesisViolated("sigma is a permutation")


def _alphabet(n: int, rho: Relation, sigma: Relation) -> list[tuple[Letter, Relation]]:
    letters = [
        (perm_letter(p), Relation.from_permutation(p))
        for p in sorted(permutations(range(n)))
    ]
    letters.append((RHO, rho))
    letters.append((SIGMA, sigma))
    return letters


def bfin_witness(rho: Relation, sigma: Relation) -> Word:
    """Shortest word over permutations, rho and sigma evaluating to the full
    relation, with lexicographic tie-breaking (permutations first, in lex
    order, then rho, then sigma)."""
    _check_hypotheses(rho, sigma)
    n = rho.n
    full = (1 << (n * n)) - 1
    alphabet = _alphabet(n, rho, sigma)
    # per-letter transition tables over row masks keep composition cheap
    tables = []
    for _, rel in alphabet:
        tables.append([rel.image_of(sub) for sub in range(1 << n)])

    def step(mask: int, table: list[int]) -> int:
        out = 0
        width = (1 << n) - 1
        for i in range(n):
            out |= table[mask >> (i * n) & width] << (i * n)
        return out

    parent: dict[int, tuple[int, int] | None] = {}
    queue: deque[int] = deque()
    for idx, (_, rel) in enumerate(alphabet):
        if rel.mask not in parent:
            parent[rel.mask] = (-1, idx)
            if rel.mask == full:
                return Word((alphabet[idx][0],))
            queue.append(rel.mask)
    while queue:
        cur = queue.popleft()
        for idx, table in enumerate(tables):
            new = step(cur, table)
            if new in parent:
                continue
            parent[new] = (cur, idx)
            if new == full:
                letters = []
                node: int | None = new
                while node is not None:
                    prev, idx2 = parent[node]
                    letters.append(alphabet[idx2][0])
                    node = prev if prev != -1 else None
                return Word(tuple(reversed(letters)))
            queue.append(new)
    raise HypothesisViolated("search exhausted the relation monoid")


def _complete_permutation(partial: dict[int, int], n: int) -> tuple[int, ...]:
    """Extend an injective partial map to a permutation, filling unused
    sources with unused targets in ascending order."""
    used_targets = set(partial.values())
    free = iter(t for t in range(n) if t not in used_targets)
    return tuple(partial[i] if i in partial else next(free) for i in range(n))


def _full_row_letters(rho: Relation, sigma: Relation) -> list[Letter]:
    """Letters whose evaluation has a full row at 0, built by the
    row-growing procedure."""
    n = rho.n
    full = (1 << n) - 1

    a_set: tuple[int, ...] | None = None
    for size in range(1, n + 1):
        for cand in combinations(range(n), size):
            if sigma.image_of(sum(1 << i for i in cand)) == full:
                a_set = cand
                break
        if a_set is not None:
            break
    assert a_set is not None  # converse of sigma is total
    pivot = next(i for i in a_set if bin(sigma.row(i)).count("1") > 1)

    letters = [RHO]
    current = rho.row(0)
    for _ in range(n + 1):
        if current == full:
            return letters
        members = [i for i in range(n) if current >> i & 1]
        if len(members) >= len(a_set):
            partial = dict(zip(sorted(members), a_set))
        else:
            targets = [pivot] + [i for i in a_set if i != pivot]
            partial = dict(zip(sorted(members), targets))
        p = _complete_permutation(partial, n)
        letters.extend([perm_letter(p), SIGMA])
        moved = sum(1 << p[i] for i in members)
        grown = sigma.image_of(moved)
        assert bin(grown).count("1") > bin(current).count("1") or grown == full
        current = grown
    raise AssertionError("row growth failed to reach the full row")


def _invert_letters(letters: list[Letter]) -> list[Letter]:
    out = []
    for letter in reversed(letters):
        if letter.kind == "rho":
            out.append(SIGMA)
        elif letter.kind == "sigma":
            out.append(RHO)
        else:
            inv = [0] * len(letter.perm)
            for i, j in enumerate(letter.perm):
                inv[j] = i
            out.append(perm_letter(inv))
    return out


def bfin_greedy(rho: Relation, sigma: Relation) -> Word:
    """Constructive witness word: grow a full row at 0 going forward, do the
    same for the converse pair, and splice the inverted dual in front."""
    _check_hypotheses(rho, sigma)
    forward = _full_row_letters(rho, sigma)
    dual = _full_row_letters(sigma.inverse(), rho.inverse())
    word = Word(tuple(_invert_letters(dual) + forward))
    result = evaluate_word(word, rho, sigma)
    assert result.is_full, "construction did not reach the full relation"
    return word
