"""Brute-force engine for finite transformation semigroups.

Everything here is exhaustive and exact: composition closure, the
subgroup lattice of small symmetric groups, and the maximal
subsemigroups of the full transformation semigroup on n points.  The
candidates for the latter come in two shapes: a maximal subgroup of the
permutations together with every non-permutation, and all permutations
together with every map that drops at least two points from its image.
Each candidate is verified closed and maximal, and a completeness check
confirms that no further maximal subsemigroup exists: any subsemigroup
escaping all candidates would contain a transversal of their complements,
and every such transversal already generates everything.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

import numpy as np


class CompletenessFailure(AssertionError):
    """A transversal of the candidate complements failed to generate
    everything, which would mean the candidate list is incomplete."""


@dataclass(frozen=True, order=True)
class FinMap:
    """Total map on {0, ..., n-1} given by its image tuple."""

    n: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.n:
            raise ValueError("image list must have length n")
        if any(not 0 <= v < self.n for v in self.images):
            raise ValueError("images must lie in [0, n)")

    @classmethod
    def identity(cls, n: int) -> "FinMap":
        return cls(n, tuple(range(n)))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def compose(self, other: "FinMap") -> "FinMap":
        """Apply self first, then other."""
        if self.n != other.n:
            raise ValueError("sizes differ")
        return FinMap(self.n, tuple(other.images[v] for v in self.images))

    @property
    def rank(self) -> int:
        return len(set(self.images))

    @property
    def is_permutation(self) -> bool:
        return self.rank == self.n

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"


def _encode(images: tuple[int, ...], n: int) -> int:
    code = 0
    for v in images:
        code = code * n + v
    return code


def _decode(code: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(code % n)
        code //= n
    return tuple(reversed(out))


@lru_cache(maxsize=None)
def _tn_table(n: int) -> np.ndarray:
    """Full composition table of all n**n maps, indexed by base-n codes."""
    size = n**n
    maps = np.array([_decode(c, n) for c in range(size)], dtype=np.int64)
    powers = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        # compose a then b for every b at once: b's images at a's outputs
        table[a] = maps[:, maps[a]] @ powers
    return table


def _closure_codes(n: int, codes: set[int]) -> frozenset[int]:
    table = _tn_table(n)
    elems = set(codes)
    frontier = list(codes)
    while frontier:
        ids = np.fromiter(elems, dtype=np.int64)
        fr = np.fromiter(frontier, dtype=np.int64)
        new = set(table[np.ix_(fr, ids)].flat)
        new.update(table[np.ix_(ids, fr)].flat)
        frontier = list(new - elems)
        elems.update(frontier)
    return frozenset(elems)


def _closure_maps(n: int, gens: set[tuple[int, ...]]) -> frozenset[tuple[int, ...]]:
    # orbit by right and left multiplication with the generators
    gen_list = list(gens)
    elems = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gen_list:
                for h in (tuple(g[v] for v in f), tuple(f[v] for v in g)):
                    if h not in elems:
                        elems.add(h)
                        nxt.append(h)
        frontier = nxt
    return frozenset(elems)


def closure(n: int, gens) -> frozenset[FinMap]:
    """Least composition-closed superset of the generators."""
    gens = set(gens)
    if not gens:
        return frozenset()
    if any(g.n != n for g in gens):
        raise ValueError("all generators must act on the same n points")
    if n <= 4:
        codes = _closure_codes(n, {_encode(g.images, n) for g in gens})
        return frozenset(FinMap(n, _decode(c, n)) for c in codes)
    out = _closure_maps(n, {g.images for g in gens})
    return frozenset(FinMap(n, im) for im in out)


@lru_cache(maxsize=None)
def _sym_table(n: int) -> tuple[tuple[tuple[int, ...], ...], list[list[int]]]:
    """Permutations of n points in lexicographic order with their
    composition table over indices."""
    perms = tuple(sorted(permutations(range(n))))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(q[v] for v in p)] for q in perms] for p in perms
    ]
    return perms, table


def _subgroup_closure(table: list[list[int]], gens: tuple[int, ...], ident: int) -> frozenset[int]:
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            row = table[x]
            for g in gens:
                y = row[g]
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def _all_subgroups(n: int) -> list[frozenset[int]]:
    perms, table = _sym_table(n)
    ident = perms.index(tuple(range(n)))
    trivial = frozenset({ident})
    seen: dict[frozenset[int], tuple[int, ...]] = {trivial: ()}
    queue = [trivial]
    full_size = len(perms)
    while queue:
        sub = queue.pop()
        gens = seen[sub]
        if len(sub) == full_size:
            continue
        for g in range(full_size):
            if g in sub:
                continue
            bigger = _subgroup_closure(table, gens + (g,), ident)
            if bigger not in seen:
                seen[bigger] = gens + (g,)
                queue.append(bigger)
    return list(seen)


def maximal_subgroups_symn(n: int) -> list[frozenset[FinMap]]:
    """All maximal subgroups of the permutations of n points, by exhaustive
    subgroup enumeration and inclusion filtering."""
    if not 2 <= n <= 5:
        raise ValueError("supported for 2 <= n <= 5")
    perms, _ = _sym_table(n)
    subs = _all_subgroups(n)
    full = frozenset(range(len(perms)))
    proper = [s for s in subs if s != full]
    maximal = [
        s for s in proper if not any(s < t for t in proper if t != s)
    ]
    out = [
        frozenset(FinMap(n, perms[i]) for i in s)
        for s in maximal
    ]
    return sorted(out, key=lambda s: (len(s), sorted(str(m) for m in s)))


@dataclass(frozen=True)
class SubsemigroupReport:
    elements: frozenset[FinMap]
    is_closed: bool
    is_maximal: bool
    description: str

    def to_json(self) -> dict:
        return {
            "size": len(self.elements),
            "isClosed": self.is_closed,
            "isMaximal": self.is_maximal,
            "description": self.description,
            "elements": sorted(str(m) for m in self.elements),
        }


def _is_closed_codes(n: int, codes: frozenset[int]) -> bool:
    table = _tn_table(n)
    ids = np.fromiter(codes, dtype=np.int64)
    return set(table[np.ix_(ids, ids)].flat) <= set(codes)


def _is_maximal_codes(n: int, codes: frozenset[int]) -> bool:
    all_codes = frozenset(range(n**n))
    if codes == all_codes:
        return False
    for s in sorted(all_codes - codes):
        if _closure_codes(n, set(codes) | {s}) != all_codes:
            return False
    return True


def maximal_subsemigroups_Tn(n: int) -> list[SubsemigroupReport]:
    """The verified maximal subsemigroups of all maps on n points.

    Builds both candidate shapes, verifies each is closed and maximal by
    exhaustive element addition, and runs the completeness check; raises
    :class:`CompletenessFailure` if some transversal of the complements
    fails to generate everything.
    """
    if not 2 <= n <= 4:
        raise ValueError("the full pipeline is supported for 2 <= n <= 4")
    all_codes = frozenset(range(n**n))
    perm_codes = frozenset(
        _encode(p, n) for p in permutations(range(n))
    )
    nonperm_codes = all_codes - perm_codes
    low_rank_codes = frozenset(
        c for c in all_codes if len(set(_decode(c, n))) <= n - 2
    )

    candidates: list[tuple[frozenset[int], str]] = []
    for i, sub in enumerate(maximal_subgroups_symn(n)):
        sub_codes = frozenset(_encode(m.images, n) for m in sub)
        candidates.append(
            (
                sub_codes | nonperm_codes,
                f"maximal subgroup #{i} of size {len(sub)} with all non-permutations",
            )
        )
    candidates.append(
        (
            perm_codes | low_rank_codes,
            f"permutations with all maps of rank at most {n - 2}",
        )
    )

    reports = []
    for codes, desc in candidates:
        closed = _is_closed_codes(n, codes)
        maximal = closed and _is_maximal_codes(n, codes)
        if not (closed and maximal):
            raise AssertionError(f"candidate is not a maximal subsemigroup: {desc}")
        reports.append(
            SubsemigroupReport(
                elements=frozenset(FinMap(n, _decode(c, n)) for c in codes),
                is_closed=closed,
                is_maximal=maximal,
                description=desc,
            )
        )
    if not completeness_check(n, [r.elements for r in reports]):
        raise CompletenessFailure(
            f"a transversal of the complements generates a proper subsemigroup on {n} points"
        )
    return reports


def completeness_check(n: int, candidates) -> bool:
    """Whether every choice of one element from each candidate's complement
    generates the whole semigroup.

    Tuples are enumerated by dynamic programming over generated-closure
    states, which visits exactly the distinct closures the plain nested
    loop would produce: the closure of a tuple depends only on the closure
    of its prefix, so states can be merged without losing any tuple.
    """
    all_codes = frozenset(range(n**n))
    complements = []
    for cand in candidates:
        codes = frozenset(_encode(m.images, n) for m in cand)
        comp = sorted(all_codes - codes)
        if not comp:
            return False  # a non-proper candidate traps every tuple
        complements.append(comp)

    states: set[frozenset[int]] = {frozenset()}
    transitions: dict[tuple[frozenset[int], int], frozenset[int]] = {}
    for comp in complements:
        nxt: set[frozenset[int]] = set()
        for state in states:
            for pick in comp:
                key = (state, pick)
                if key not in transitions:
                    transitions[key] = _closure_codes(n, set(state) | {pick})
                nxt.add(transitions[key])
        states = nxt
    return all(state == all_codes for state in states)


def generates_Tn(n: int, extra) -> bool:
    """Whether the permutations together with the extra maps compose to
    every map on n points."""
    gens = set(extra)
    gens.add(FinMap.identity(n))
    if n >= 2:
        gens.add(FinMap(n, (1, 0) + tuple(range(2, n))))
        gens.add(FinMap(n, tuple(range(1, n)) + (0,)))
    return len(closure(n, gens)) == n**n
