"""Ground-set machinery: the Cantor pairing bijection and eventually
periodic subsets of the naturals.

Both are infinite objects with finite descriptions.  An ``EPSet`` decides
membership, finiteness and cofiniteness exactly; a ``CantorColumn`` is the
fiber of the pairing projection over one first component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt


def pair(x: int, y: int) -> int:
    """Cantor pairing code of (x, y), i.e. (x+y)(x+y+1)/2 + y."""
    if x < 0 or y < 0:
        raise ValueError("pairing is defined on naturals only")
    w = x + y
    return w * (w + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    """Inverse of :func:`pair`; exact for arbitrarily large codes."""
    if z < 0:
        raise ValueError("codes are naturals")
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


@dataclass(frozen=True)
class EPSet:
    """Eventually periodic subset of the naturals.

    Below ``threshold`` membership is read off the explicit ``prefix``;
    from ``threshold`` on, x is a member iff (x - threshold) mod period
    lies in ``residues``.
    """

    threshold: int
    period: int
    residues: frozenset[int] = field(default_factory=frozenset)
    prefix: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise ValueError("threshold must be a natural")
        if self.period < 1:
            raise ValueError("period must be at least 1")
        object.__setattr__(self, "residues", frozenset(self.residues))
        object.__setattr__(self, "prefix", frozenset(self.prefix))
        if any(r < 0 or r >= self.period for r in self.residues):
            raise ValueError("residues must lie in [0, period)")
        if any(x < 0 or x >= self.threshold for x in self.prefix):
            raise ValueError("prefix members must lie below the threshold")

    def __contains__(self, x: int) -> bool:
        if x < self.threshold:
            return x in self.prefix
        return (x - self.threshold) % self.period in self.residues

    @property
    def is_finite(self) -> bool:
        return not self.residues

    @property
    def is_infinite(self) -> bool:
        return bool(self.residues)

    @property
    def is_cofinite(self) -> bool:
        return len(self.residues) == self.period

    def complement(self) -> "EPSet":
        return EPSet(
            self.threshold,
            self.period,
            frozenset(range(self.period)) - self.residues,
            frozenset(range(self.threshold)) - self.prefix,
        )

    def members(self, count: int) -> list[int]:
        """The first ``count`` members in ascending order."""
        out: list[int] = []
        x = 0
        while len(out) < count:
            if x in self:
                out.append(x)
            elif x >= self.threshold and not self.residues:
                break
            x += 1
        return out

    @classmethod
    def finite(cls, xs) -> "EPSet":
        xs = frozenset(xs)
        bound = max(xs) + 1 if xs else 0
        return cls(bound, 1, frozenset(), xs)

    @classmethod
    def residue_class(cls, mod: int, r: int) -> "EPSet":
        return cls(0, mod, frozenset({r}), frozenset())

    @classmethod
    def full(cls) -> "EPSet":
        return cls(0, 1, frozenset({0}), frozenset())

    def __str__(self) -> str:
        if self.is_finite:
            return "{" + ",".join(str(x) for x in sorted(self.prefix)) + "}"
        rs = ",".join(str(r) for r in sorted(self.residues))
        return (
            f"{{x >= {self.threshold} : (x-{self.threshold}) mod {self.period}"
            f" in {{{rs}}}}} plus {sorted(self.prefix)}"
        )


@dataclass(frozen=True)
class CantorColumn:
    """The set {pair(first, y) : y a natural}.

    Not eventually periodic: consecutive members drift apart linearly.
    """

    first: int

    def __contains__(self, z: int) -> bool:
        return z >= 0 and unpair(z)[0] == self.first

    def members(self, count: int) -> list[int]:
        return [pair(self.first, y) for y in range(count)]

    def __str__(self) -> str:
        return f"{{pair({self.first},y) : y in N}}"
