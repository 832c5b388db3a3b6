"""Exact small-cardinal arithmetic, interval bounds and three-valued logic.

The only cardinals that occur are the naturals and aleph-0 (written
``ALEPH0``), plus the comparison threshold aleph-0-plus which sits strictly
above every representable value.  Parameters of composed maps are tracked as
closed intervals of cardinals; the ``compose_*`` transformers below return
the tightest interval derivable from the composition inequalities

    k(fg) <= k(f) + k(g)                       (regular threshold)
    d(g) <= d(fg) <= d(f) + d(g),   with equality on the right when g is
                                    injective
    c(f) <= c(fg) <= c(f) + c(g),   with equality on the right when f is
                                    surjective
    c(g) finite and d(f) infinite  =>  d(fg) infinite
    d(f) finite and c(g) infinite  =>  c(fg) infinite

where d is the image defect, c the collapse (domain minus a transversal)
and k the count of points with infinite fibers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering


class InternalSoundnessError(AssertionError):
    """An interval intersection came out empty.

    The composition rules never contradict each other on sound inputs, so
    an empty intersection is a bug in this package, not bad data.
    """


class Tri(Enum):
    """Three-valued truth: YES and NO are proofs, UNKNOWN is ignorance."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:  # pragma: no cover
        raise TypeError("Tri does not collapse to bool; compare explicitly")


def tri_from_bool(b: bool) -> Tri:
    return Tri.YES if b else Tri.NO


def tri_not(t: Tri) -> Tri:
    if t is Tri.YES:
        return Tri.NO
    if t is Tri.NO:
        return Tri.YES
    return Tri.UNKNOWN


def tri_and(*ts: Tri) -> Tri:
    if any(t is Tri.NO for t in ts):
        return Tri.NO
    if all(t is Tri.YES for t in ts):
        return Tri.YES
    return Tri.UNKNOWN


def tri_or(*ts: Tri) -> Tri:
    if any(t is Tri.YES for t in ts):
        return Tri.YES
    if all(t is Tri.NO for t in ts):
        return Tri.NO
    return Tri.UNKNOWN


@total_ordering
@dataclass(frozen=True)
class Card:
    """A cardinal in {0, 1, 2, ...} plus aleph-0 (``finite`` is None)."""

    finite: int | None

    def __post_init__(self) -> None:
        if self.finite is not None and self.finite < 0:
            raise ValueError("finite cardinals are naturals")

    @property
    def is_aleph0(self) -> bool:
        return self.finite is None

    @property
    def is_finite(self) -> bool:
        return self.finite is not None

    def __lt__(self, other: "Card") -> bool:
        if self.is_aleph0:
            return False
        if other.is_aleph0:
            return True
        return self.finite < other.finite

    def __add__(self, other: "Card") -> "Card":
        if self.is_aleph0 or other.is_aleph0:
            return ALEPH0
        return Card(self.finite + other.finite)

    def __str__(self) -> str:
        return "aleph0" if self.is_aleph0 else str(self.finite)

    def to_json(self):
        return "aleph0" if self.is_aleph0 else self.finite


ALEPH0 = Card(None)
ZERO = Card(0)


def card(n: int) -> Card:
    return Card(n)


def card_add(a: Card, b: Card) -> Card:
    """Cardinal addition: finite sums are arithmetic, aleph-0 absorbs."""
    return a + b


class Threshold(Enum):
    """A comparison threshold mu: aleph-0 or its successor.

    Every representable Card is below ALEPH0_PLUS, and a Card is >= ALEPH0
    exactly when it equals aleph-0.
    """

    ALEPH0 = "aleph0"
    ALEPH0_PLUS = "aleph0plus"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CardInterval:
    """A closed interval of cardinals; an exact value has lo == hi."""

    lo: Card
    hi: Card

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, c: Card) -> "CardInterval":
        return cls(c, c)

    @classmethod
    def exact_finite(cls, n: int) -> "CardInterval":
        return cls.exact(Card(n))

    @classmethod
    def top(cls) -> "CardInterval":
        return cls(ZERO, ALEPH0)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, c: Card) -> bool:
        return self.lo <= c <= self.hi

    def __add__(self, other: "CardInterval") -> "CardInterval":
        return CardInterval(self.lo + other.lo, self.hi + other.hi)

    def intersect(self, other: "CardInterval") -> "CardInterval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if hi < lo:
            raise InternalSoundnessError(
                f"contradictory bounds: [{self.lo},{self.hi}] "
                f"meets [{other.lo},{other.hi}] emptily"
            )
        return CardInterval(lo, hi)

    # Three-valued clause queries.  YES/NO hold for every member of the
    # interval; UNKNOWN means the interval straddles the clause.

    def eq_zero(self) -> Tri:
        if self.hi == ZERO:
            return Tri.YES
        if self.lo > ZERO:
            return Tri.NO
        return Tri.UNKNOWN

    def gt_zero(self) -> Tri:
        return tri_not(self.eq_zero())

    def is_aleph0(self) -> Tri:
        if self.lo.is_aleph0:
            return Tri.YES
        if self.hi.is_finite:
            return Tri.NO
        return Tri.UNKNOWN

    def lt_aleph0(self) -> Tri:
        return tri_not(self.is_aleph0())

    def ge(self, mu: Threshold) -> Tri:
        if mu is Threshold.ALEPH0_PLUS:
            return Tri.NO
        return self.is_aleph0()

    def lt(self, mu: Threshold) -> Tri:
        return tri_not(self.ge(mu))

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        return f"[{self.lo},{self.hi}]"

    def to_json(self):
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}


EXACT_ZERO = CardInterval.exact(ZERO)
EXACT_ALEPH0 = CardInterval.exact(ALEPH0)


def compose_defect(
    dF: CardInterval, cG: CardInterval, dG: CardInterval, g_injective: Tri
) -> CardInterval:
    """Interval for the image defect of a composite (f applied first, then g).

    Combines the sandwich d(g) <= d(fg) <= d(f) + d(g), the equality
    d(fg) = d(f) + d(g) available when g is injective, and the jump rule
    that a finite collapse of g cannot repair an infinite defect of f.
    """
    out = CardInterval(dG.lo, dF.hi + dG.hi)
    if g_injective is Tri.YES:
        out = out.intersect(dF + dG)
    if cG.hi.is_finite and dF.lo.is_aleph0:
        out = out.intersect(EXACT_ALEPH0)
    return out


def compose_collapse(
    cF: CardInterval, dF: CardInterval, cG: CardInterval, f_surjective: Tri
) -> CardInterval:
    """Interval for the collapse of a composite (f applied first, then g).

    Dual to :func:`compose_defect`: c(f) <= c(fg) <= c(f) + c(g), with
    equality when f is surjective, and a finite defect of f cannot absorb
    an infinite collapse of g.
    """
    out = CardInterval(cF.lo, cF.hi + cG.hi)
    if f_surjective is Tri.YES:
        out = out.intersect(cF + cG)
    if dF.hi.is_finite and cG.lo.is_aleph0:
        out = out.intersect(EXACT_ALEPH0)
    return out


def compose_kinf(kF: CardInterval, kG: CardInterval) -> CardInterval:
    """Interval for the infinite-fiber count of a composite.

    Only the subadditive upper bound exists; no composition rule gives a
    positive lower bound, so the floor is 0.
    """
    return CardInterval(ZERO, kF.hi + kG.hi)
