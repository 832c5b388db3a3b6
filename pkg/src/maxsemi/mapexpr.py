"""A closed expression algebra of total self-maps of the naturals.

Expressions are built from two primitives under composition:

* ``AffinePeriodic(N, p, s, table)``: f(x) = table[x] for x < N + p and
  f(x + p) = f(x) + s for x >= N.  The table carries the exceptional prefix
  and one period of the tail.
* ``CANTOR_PROJ``: z maps to the first component of the inverse Cantor
  pairing, so every fiber is an infinite column.

``Compose(first, second)`` applies ``first`` and then ``second``; all
composition in this package reads left to right.

The class is closed under composition in the following strong sense: a
composite of two affine-periodic maps is again affine-periodic and
:func:`normalize` finds a normal form for it, while any expression
containing the pairing projection has no such form and certificates fall
back to sound interval rules.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Union

from .core import (
    ALEPH0,
    Card,
    CardInterval,
    EXACT_ALEPH0,
    EXACT_ZERO,
    Tri,
    compose_collapse,
    compose_defect,
    compose_kinf,
    tri_from_bool,
)
from .numsets import CantorColumn, EPSet, unpair


class NotInvertibleInClass(ValueError):
    """No representable expression satisfies both inverse laws."""


class InverseLawViolated(ValueError):
    """A claimed inverse pair fails u u' u = u or u' u u' = u' on the window."""

    def __init__(self, index: int, point: int):
        self.index = index
        self.point = point
        super().__init__(f"pair {index} breaks an inverse law at x={point}")


@dataclass(frozen=True)
class AffinePeriodic:
    """Total self-map with an exceptional prefix and tail law f(x+p) = f(x)+s."""

    threshold: int
    period: int
    shift: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(self.table))
        if self.period < 1:
            raise ValueError("period must be at least 1")
        if self.threshold < 0 or self.shift < 0:
            raise ValueError("threshold and shift are naturals")
        if len(self.table) != self.threshold + self.period:
            raise ValueError(
                f"table must list f on [0, {self.threshold + self.period}), "
                f"got {len(self.table)} entries"
            )
        if any(v < 0 for v in self.table):
            raise ValueError("table entries are naturals")

    @property
    def starts(self) -> tuple[int, ...]:
        """Values at the first tail period, one progression start per residue."""
        return self.table[self.threshold :]

    def __call__(self, x: int) -> int:
        if x < self.threshold + self.period:
            return self.table[x]
        off = x - self.threshold
        return self.table[self.threshold + off % self.period] + self.shift * (
            off // self.period
        )


@dataclass(frozen=True)
class CantorProj:
    """First-component projection of the Cantor pairing bijection."""

    def __call__(self, x: int) -> int:
        return unpair(x)[0]


CANTOR_PROJ = CantorProj()


@dataclass(frozen=True)
class Compose:
    """Apply ``first``, then ``second``."""

    first: "MapExpr"
    second: "MapExpr"


MapExpr = Union[AffinePeriodic, CantorProj, Compose]


def evaluate(e: MapExpr, x: int) -> int:
    """The denoted function applied to x."""
    if isinstance(e, Compose):
        return evaluate(e.second, evaluate(e.first, x))
    return e(x)


# ---------------------------------------------------------------------------
# sugar constructors


def affine(threshold: int, period: int, shift: int, table) -> AffinePeriodic:
    return AffinePeriodic(threshold, period, shift, tuple(table))


def identity() -> AffinePeriodic:
    return AffinePeriodic(0, 1, 1, (0,))


def shift_by(k: int) -> AffinePeriodic:
    """x maps to x + k."""
    return AffinePeriodic(0, 1, 1, (k,))


def times(k: int) -> AffinePeriodic:
    """x maps to k*x; k = 0 gives the constant zero map."""
    return AffinePeriodic(0, 1, k, (0,))


def divfloor(k: int) -> AffinePeriodic:
    """x maps to floor(x/k)."""
    if k < 1:
        raise ValueError("divfloor needs k >= 1")
    return AffinePeriodic(0, k, 1, (0,) * k)


def perm(images) -> AffinePeriodic:
    """Finite-support permutation: x maps to images[x] below len(images),
    identically above."""
    images = tuple(images)
    m = len(images)
    if sorted(images) != list(range(m)):
        raise ValueError("perm needs a permutation of 0..m-1")
    return AffinePeriodic(m, 1, 1, images + (m,))


def compose(*es: MapExpr) -> MapExpr:
    """Left-to-right composition of one or more expressions."""
    if not es:
        raise ValueError("compose needs at least one expression")
    out = es[0]
    for e in es[1:]:
        out = Compose(out, e)
    return out


# ---------------------------------------------------------------------------
# normalization


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _minimize(f: AffinePeriodic) -> AffinePeriodic:
    """Smallest equivalent normal form: shrink the period, then the prefix."""
    changed = True
    while changed:
        changed = False
        n, p, s, t = f.threshold, f.period, f.shift, f.table
        for q in _divisors(p)[:-1]:
            if (s * q) % p != 0:
                continue
            sq = s * q // p
            if all(t[x] == t[x - q] + sq for x in range(n + q, n + p)):
                f = AffinePeriodic(n, q, sq, t[: n + q])
                changed = True
                break
        n, p, s, t = f.threshold, f.period, f.shift, f.table
        while n > 0 and t[n - 1 + p] == t[n - 1] + s:
            n -= 1
            t = t[: n + p]
            changed = True
        if n != f.threshold:
            f = AffinePeriodic(n, p, s, t)
    return f


def _combine(f: AffinePeriodic, g: AffinePeriodic) -> AffinePeriodic:
    """Normal form of f followed by g."""
    if f.shift == 0:
        # the tail of f repeats exactly, so the composite repeats with it
        n, p, s = f.threshold, f.period, 0
    else:
        step = g.period // gcd(f.shift, g.period)
        p = f.period * step
        s = g.shift * (f.shift * step // g.period)
        n = f.threshold
        for r in range(f.period):
            start = f.table[f.threshold + r]
            if start >= g.threshold:
                q_min = 0
            else:
                q_min = -((start - g.threshold) // f.shift)  # ceil division
            n = max(n, f.threshold + r + f.period * q_min)
    table = tuple(g(f(x)) for x in range(n + p))
    return AffinePeriodic(n, p, s, table)


def normalize(e: MapExpr) -> AffinePeriodic | None:
    """An affine-periodic form extensionally equal to e, or None.

    Expressions containing the pairing projection have unbounded fiber
    sizes, which no affine-periodic tail can produce, so they yield None.
    """
    if isinstance(e, AffinePeriodic):
        return e
    if isinstance(e, CantorProj):
        return None
    nf = normalize(e.first)
    if nf is None:
        return None
    ng = normalize(e.second)
    if ng is None:
        return None
    return _minimize(_combine(nf, ng))


def affine_equal(f: AffinePeriodic, g: AffinePeriodic) -> bool:
    """Exact extensional equality of two normal forms.

    Two affine-periodic maps agree everywhere iff they agree on the common
    prefix and on two full joint periods of the common tail.
    """
    n = max(f.threshold, g.threshold)
    joint = (f.period * g.period) // gcd(f.period, g.period)
    return all(f(x) == g(x) for x in range(n + 2 * joint))


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """Parameter bounds for one map: injectivity, surjectivity, image defect
    d, collapse c, infinite-fiber count, and the finite-image flag."""

    inj: Tri
    surj: Tri
    d: CardInterval
    c: CardInterval
    kinf: CardInterval
    fin_image: Tri

    def to_json(self) -> dict:
        return {
            "inj": self.inj.value,
            "surj": self.surj.value,
            "d": self.d.to_json(),
            "c": self.c.to_json(),
            "kinf": self.kinf.to_json(),
            "finImage": self.fin_image.value,
        }


def _exact_params(f: AffinePeriodic) -> tuple[Card, Card, Card, bool]:
    """Exact (d, c, kinf, finite-image) of a normal form."""
    n, p, s = f.threshold, f.period, f.shift
    starts = f.starts
    if s == 0:
        return ALEPH0, ALEPH0, Card(len(set(starts))), True

    # collapse: two progressions in the same residue class mod s overlap in
    # all but finitely many points, forcing infinitely many collisions
    classes = [v % s for v in starts]
    if len(set(classes)) < p:
        c = ALEPH0
    else:
        collisions = 0
        for v, cnt in Counter(f.table[:n]).items():
            tail_hits = sum(
                1 for st in starts if v >= st and (v - st) % s == 0
            )
            collisions += cnt + tail_hits - 1
        c = Card(collisions)

    # defect: beyond every progression start, coverage depends only on the
    # residue mod s, so count misses below that bound
    if len(set(classes)) < s:
        d = ALEPH0
    else:
        bound = max(starts) + 1
        hit = set()
        for v in f.table:
            if v < bound:
                hit.add(v)
        for st in starts:
            hit.update(range(st, bound, s))
        d = Card(bound - len(hit))
    return d, c, Card(0), False


def _certificate_from_params(d: Card, c: Card, k: Card, fin: bool) -> Certificate:
    return Certificate(
        inj=tri_from_bool(c == Card(0)),
        surj=tri_from_bool(d == Card(0)),
        d=CardInterval.exact(d),
        c=CardInterval.exact(c),
        kinf=CardInterval.exact(k),
        fin_image=tri_from_bool(fin),
    )


_CANTOR_CERT = Certificate(
    inj=Tri.NO,
    surj=Tri.YES,
    d=EXACT_ZERO,
    c=EXACT_ALEPH0,
    kinf=EXACT_ALEPH0,
    fin_image=Tri.NO,
)


def certify(e: MapExpr) -> Certificate:
    """Exact certificate when e has a normal form or is the pairing
    projection; otherwise the tightest interval certificate the composition
    rules yield over the expression tree."""
    nf = normalize(e)
    if nf is not None:
        return _certificate_from_params(*_exact_params(nf))
    if isinstance(e, CantorProj):
        return _CANTOR_CERT
    ca = certify(e.first)
    cb = certify(e.second)
    d = compose_defect(ca.d, cb.c, cb.d, cb.inj)
    c = compose_collapse(ca.c, ca.d, cb.c, ca.surj)
    k = compose_kinf(ca.kinf, cb.kinf)

    if ca.fin_image is Tri.YES or cb.fin_image is Tri.YES:
        fin = Tri.YES  # small-image maps form an ideal
    elif ca.surj is Tri.YES:
        fin = cb.fin_image  # composite image equals the image of the second map
    elif cb.inj is Tri.YES:
        fin = ca.fin_image  # injective second factor preserves image size
    elif d.hi.is_finite:
        fin = Tri.NO  # cofinite image is infinite
    else:
        fin = Tri.UNKNOWN

    inj = c.eq_zero()
    surj = d.eq_zero()
    return Certificate(inj=inj, surj=surj, d=d, c=c, kinf=k, fin_image=fin)


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class FiniteFiber:
    elements: tuple[int, ...]


@dataclass(frozen=True)
class InfiniteFiber:
    description: EPSet | CantorColumn


@dataclass(frozen=True)
class UnknownFiber:
    sampled: tuple[int, ...]


FiberReport = Union[FiniteFiber, InfiniteFiber, UnknownFiber]


def fiber(e: MapExpr, y: int, cap: int = 1000) -> FiberReport:
    """The full preimage of y.

    Exact for normal forms and the pairing projection; otherwise the
    preimages found below ``cap``, flagged as unknown.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    nf = normalize(e)
    if nf is not None:
        return _affine_fiber(nf, y)
    if isinstance(e, CantorProj):
        return InfiniteFiber(CantorColumn(y))
    return UnknownFiber(tuple(x for x in range(cap) if evaluate(e, x) == y))


def _affine_fiber(f: AffinePeriodic, y: int) -> FiberReport:
    n, p, s = f.threshold, f.period, f.shift
    if s == 0:
        residues = frozenset(r for r in range(p) if f.starts[r] == y)
        prefix = frozenset(x for x in range(n) if f.table[x] == y)
        if residues:
            return InfiniteFiber(EPSet(n, p, residues, prefix))
        return FiniteFiber(tuple(sorted(prefix)))
    hits = [x for x in range(n) if f.table[x] == y]
    for r, st in enumerate(f.starts):
        if y >= st and (y - st) % s == 0:
            hits.append(n + r + p * ((y - st) // s))
    return FiniteFiber(tuple(sorted(hits)))


def in_image(e: MapExpr, y: int, window: int = 1000) -> Tri:
    """Whether y is attained; exact when the fiber is, sampled otherwise."""
    rep = fiber(e, y, cap=window)
    if isinstance(rep, InfiniteFiber):
        return Tri.YES
    if isinstance(rep, FiniteFiber):
        return tri_from_bool(bool(rep.elements))
    if rep.sampled:
        return Tri.YES
    return Tri.UNKNOWN


# ---------------------------------------------------------------------------
# inverses


def _least_preimage(f: AffinePeriodic, y: int) -> int | None:
    rep = _affine_fiber(f, y)
    assert isinstance(rep, FiniteFiber)
    return rep.elements[0] if rep.elements else None


def invert(e: MapExpr) -> AffinePeriodic:
    """A representable inverse e' with e e' e = e and e' e e' = e'.

    The transversal is canonical: each attained value is sent to its least
    preimage.  Off the image the values follow the least affine-periodic
    extension whose points are themselves least preimages, so both inverse
    laws hold everywhere; for injective maps this extension starts at 0.
    Raises :class:`NotInvertibleInClass` when no affine-periodic inverse
    exists, in particular for the pairing projection, whose least-preimage
    section grows quadratically.
    """
    f = normalize(e)
    if f is None:
        raise NotInvertibleInClass(
            "only affine-periodic maps have representable inverses"
        )
    n, p, s = f.threshold, f.period, f.shift
    if s == 0:
        image = sorted(set(f.table))
        bound = image[-1] + 1
        table = [0] * (bound + 1)
        for y in image:
            table[y] = f.table.index(y)
        return _minimize(AffinePeriodic(bound, 1, 0, tuple(table)))

    bound = max(f.table) + 1
    # per residue class mod s, the eventual least preimage comes from one
    # fixed progression; the minimizer of the preimage formula does not
    # depend on the value, so it can be picked once per class
    best: dict[int, int] = {}
    for r, st in enumerate(f.starts):
        key = st % s
        if key not in best or s * r - p * st < s * best[key] - p * f.starts[best[key]]:
            best[key] = r

    def in_transversal(x: int) -> bool:
        return _least_preimage(f, f(x)) == x

    def extension_base() -> int:
        # least x0 such that x0, x0+p, x0+2p, ... are all least preimages:
        # beyond the table values nothing interferes, so only finitely many
        # points per candidate need checking
        x0 = 0
        while True:
            x, ok = x0, True
            while f(x) < bound:
                if not in_transversal(x):
                    ok = False
                    break
                x += p
            if ok and in_transversal(x):
                return x0
            x0 += 1

    base = extension_base() if len(best) < s else 0
    table = []
    for y in range(bound + s):
        if y < bound:
            least = _least_preimage(f, y)
            table.append(least if least is not None else 0)
        else:
            m = y % s
            if m in best:
                r = best[m]
                table.append(n + r + p * ((y - f.starts[r]) // s))
            else:
                table.append(base)
    return _minimize(AffinePeriodic(bound, s, p, tuple(table)))


@dataclass(frozen=True)
class ChainPass:
    pass


@dataclass(frozen=True)
class ChainHypothesisViolated:
    stage: int
    witness: int


ChainVerdict = Union[ChainPass, ChainHypothesisViolated]


def chain_inverse_check(
    pairs: list[tuple[MapExpr, MapExpr]], window: int = 1000
) -> ChainVerdict:
    """Check the inverse-chain composition law on a window.

    Given pairs (u_i, u_i') that are pointwise inverses, the products
    u_0' u_1' ... u_n' and u_n ... u_1 u_0 are again inverses provided each
    partial image of the primed chain lands inside the image of the next
    map.  Verifies the inverse laws of every pair (raising
    :class:`InverseLawViolated` on a breach), then the image hypothesis,
    then both inverse laws of the two products, all on [0, window).
    """
    if not pairs:
        raise ValueError("need at least one pair")
    for i, (u, up) in enumerate(pairs):
        for x in range(window):
            v = evaluate(u, x)
            if evaluate(u, evaluate(up, v)) != v:
                raise InverseLawViolated(i, x)
            w = evaluate(up, x)
            if evaluate(up, evaluate(u, w)) != w:
                raise InverseLawViolated(i, x)

    primes = [up for _, up in pairs]
    for i in range(1, len(pairs)):
        u_i = pairs[i][0]
        for x in range(window):
            a = x
            for up in primes[:i]:
                a = evaluate(up, a)
            if in_image(u_i, a, window) is not Tri.YES:
                return ChainHypothesisViolated(stage=i, witness=a)

    def forward(x: int) -> int:
        for up in primes:
            x = evaluate(up, x)
        return x

    def backward(x: int) -> int:
        for u, _ in reversed(pairs):
            x = evaluate(u, x)
        return x

    for x in range(window):
        if forward(backward(forward(x))) != forward(x) or backward(
            forward(backward(x))
        ) != backward(x):
            raise InverseLawViolated(-1, x)
    return ChainPass()


# ---------------------------------------------------------------------------
# window statistics


@dataclass(frozen=True)
class WindowReport:
    """Empirical behavior on the window [0, M); a consistency aid only."""

    window: int
    image: tuple[int, ...]
    missed: tuple[int, ...]
    collisions: int
    fiber_histogram: dict[int, int]

    @property
    def missed_count(self) -> int:
        return len(self.missed)

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "image": list(self.image),
            "missed": list(self.missed),
            "collisions": self.collisions,
            "fiberHistogram": {str(k): v for k, v in sorted(self.fiber_histogram.items())},
        }


def window_stats(e: MapExpr, m: int) -> WindowReport:
    if m < 1:
        raise ValueError("window must be at least 1")
    counts = Counter(evaluate(e, x) for x in range(m))
    hit = {y for y in counts if y < m}
    histogram = Counter(c for y, c in counts.items() if y < m)
    return WindowReport(
        window=m,
        image=tuple(sorted(hit)),
        missed=tuple(y for y in range(m) if y not in hit),
        collisions=sum(c - 1 for c in counts.values()),
        fiber_histogram=dict(histogram),
    )


def guaranteed_value_bound(f: AffinePeriodic, m: int) -> int:
    """Largest Y such that every preimage of every y < Y lies in [0, m).

    Below this bound the window fibers are complete, so window counts are
    exact rather than approximations.
    """
    if m <= f.threshold + f.period:
        return 0
    if f.shift == 0:
        return 0
    low = min(f.starts)
    q = (m - f.threshold - f.period) // f.period
    return max(0, low + f.shift * q + 1 - f.shift)
