"""Membership deciders for the maximal-subsemigroup families.

Five families are parameterized by the certificate values alone (S1..S5);
two by a stabilized finite set and a threshold (F1, F2); two by a filter
oracle (U1, U2); and two by a finite partition into residue classes
(A1, A2) through the class-transition relation of a map.

Verdicts are three-valued: YES and NO cite the deciding clause, UNKNOWN
names the undecided certificate component.  Deciders never sample; a
clause that exact analysis cannot reach stays unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .core import Card, Threshold, Tri, tri_and, tri_from_bool, tri_not, tri_or
from .mapexpr import (
    AffinePeriodic,
    CantorProj,
    Certificate,
    Compose,
    FiniteFiber,
    InfiniteFiber,
    MapExpr,
    certify,
    evaluate,
    fiber,
    normalize,
)
from .numsets import EPSet, pair
from .relcalc import Relation

S_FAMILIES = ("S1", "S2", "S3", "S4", "S5")


class InvalidParameters(ValueError):
    """Family parameters outside the classified range."""


class RhoUndecidable(ValueError):
    """Class-intersection cardinalities not reachable by tail analysis."""


@dataclass(frozen=True)
class FilterOracle:
    """Membership oracle for a filter of subsets of the naturals.

    ``principal`` filters consist of every superset of a fixed finite
    generator; the ``frechet`` filter consists of the cofinite sets.  Both
    are total on eventually periodic sets.  ``kappa`` is the least
    cardinality of a member.
    """

    kind: str  # "principal" | "frechet"
    generator: frozenset[int] | None = None

    def __post_init__(self) -> None:
        if self.kind == "principal":
            if not self.generator:
                raise InvalidParameters("principal filter needs a nonempty generator")
            object.__setattr__(self, "generator", frozenset(self.generator))
        elif self.kind == "frechet":
            if self.generator is not None:
                raise InvalidParameters("the cofinite filter has no generator")
        else:
            raise InvalidParameters(f"unknown filter kind {self.kind!r}")

    @classmethod
    def principal(cls, generator) -> "FilterOracle":
        return cls("principal", frozenset(generator))

    @classmethod
    def frechet(cls) -> "FilterOracle":
        return cls("frechet")

    @property
    def kappa(self) -> Card:
        if self.kind == "principal":
            return Card(len(self.generator))
        return Card(None)

    def contains(self, s: EPSet) -> Tri:
        if self.kind == "principal":
            return tri_from_bool(all(g in s for g in self.generator))
        return tri_from_bool(s.is_cofinite)

    def describe(self) -> str:
        if self.kind == "principal":
            return "principal{" + ",".join(map(str, sorted(self.generator))) + "}"
        return "frechet"


@dataclass(frozen=True)
class PartitionSpec:
    """Partition of the naturals into the n residue classes mod n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidParameters("a finite partition needs n >= 2")

    def class_of(self, x: int) -> int:
        return x % self.n


@dataclass(frozen=True)
class Verdict:
    family: str
    params: str
    answer: Tri
    reason: str

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "answer": self.answer.value,
            "reason": self.reason,
        }


# ---------------------------------------------------------------------------
# class-transition relation


def _flatten(e: MapExpr) -> list[MapExpr]:
    if isinstance(e, Compose):
        return _flatten(e.first) + _flatten(e.second)
    return [e]


def rho(e: MapExpr, part: PartitionSpec) -> Relation:
    """The relation {(i, j) : class i meets class j in infinitely many
    points under e}, computed exactly from one super-period of the tail.

    Supports normal forms, the pairing projection, and chains that apply
    the projection first and affine-periodic maps afterwards.  Raises
    :class:`RhoUndecidable` otherwise.
    """
    n = part.n
    nf = normalize(e)
    if nf is not None:
        return _rho_affine(nf, n)
    leaves = _flatten(e)
    if isinstance(leaves[0], CantorProj):
        rest = leaves[1:]
        if not rest:
            return _rho_cantor(n)
        if all(isinstance(l, AffinePeriodic) for l in rest):
            tail = rest[0]
            for l in rest[1:]:
                tail = Compose(tail, l)
            b = normalize(tail)
            assert b is not None
            return _rho_cantor_then_affine(b, n)
    raise RhoUndecidable(
        "class intersections of this composite are outside tail analysis"
    )


def _rho_affine(f: AffinePeriodic, n: int) -> Relation:
    # the relation compares image SETS, so a shift of 0 (finite image of
    # every class) gives the empty relation; with a positive shift every
    # recurring pattern contributes infinitely many distinct values
    if f.shift == 0:
        return Relation(n, 0)
    pairs = set()
    for r in range(f.period):
        for q in range(n):
            x = f.threshold + r + q * f.period
            pairs.add((x % n, (f.starts[r] + q * f.shift) % n))
    return Relation.from_pairs(n, pairs)


def _rho_cantor(n: int) -> Relation:
    # pairing codes mod n depend only on both components mod 2n
    pairs = set()
    for x in range(2 * n):
        for y in range(2 * n):
            pairs.add((pair(x, y) % n, x % n))
    return Relation.from_pairs(n, pairs)


def _rho_cantor_then_affine(b: AffinePeriodic, n: int) -> Relation:
    # first components sweep every progression {x0 + period*t}; only the
    # tail patterns contribute infinite value sets, and only when b grows
    if b.shift == 0:
        return Relation(n, 0)
    period = lcm(2 * n, b.period * n)
    pairs = set()
    for x in range(b.threshold, b.threshold + period):
        bx = b(x) % n
        for y in range(2 * n):
            pairs.add((pair(x, y) % n, bx))
    return Relation.from_pairs(n, pairs)


def realize_partition_relation(rel: Relation, n: int) -> AffinePeriodic:
    """An affine-periodic map whose class-transition relation is exactly
    ``rel``; the relation must be total, since images of infinite classes
    always land somewhere infinitely often."""
    if rel.n != n:
        raise InvalidParameters("relation size must match the partition")
    if not rel.is_total:
        raise InvalidParameters("only total relations arise from total maps")
    rows = [sorted(j for j in range(n) if (i, j) in rel) for i in range(n)]
    m = lcm(*(len(row) for row in rows))
    table = []
    for x in range(n * m):
        i, t = x % n, x // n
        table.append(rows[i][t % len(rows[i])])
    return AffinePeriodic(0, n * m, n, tuple(table))


# ---------------------------------------------------------------------------
# family deciders


def _cite(parts: list[str]) -> str:
    return "; ".join(parts)


def in_S(variant: str, cert: Certificate) -> Verdict:
    """Membership in one of the five families cut out by certificate values:

    S1: c = 0 or d > 0          S2: c > 0 or d = 0
    S3: c finite or d infinite  S4: c infinite or d finite
    S5: the infinite-fiber count is finite
    """
    d, c, k = cert.d, cert.c, cert.kinf
    if variant == "S1":
        clauses = [("c(f)=0", c.eq_zero()), ("d(f)>0", d.gt_zero())]
    elif variant == "S2":
        clauses = [("c(f)>0", c.gt_zero()), ("d(f)=0", d.eq_zero())]
    elif variant == "S3":
        clauses = [("c(f)<aleph0", c.lt_aleph0()), ("d(f)>=aleph0", d.is_aleph0())]
    elif variant == "S4":
        clauses = [("c(f)>=aleph0", c.is_aleph0()), ("d(f)<aleph0", d.lt_aleph0())]
    elif variant == "S5":
        clauses = [("k(f,aleph0)<aleph0", k.lt_aleph0())]
    else:
        raise InvalidParameters(f"unknown family {variant!r}")
    answer = tri_or(*(t for _, t in clauses))
    if answer is Tri.YES:
        reason = _cite([name for name, t in clauses if t is Tri.YES])
    elif answer is Tri.NO:
        reason = _cite([f"not {name}" for name, _ in clauses])
    else:
        reason = _cite(
            [f"{name} undecided by interval" for name, t in clauses if t is Tri.UNKNOWN]
        )
    return Verdict(variant, "mu=aleph0" if variant in ("S3", "S4") else "", answer, reason)


def in_frakF(cert: Certificate) -> Tri:
    """Membership in the ideal of maps with finite image."""
    return cert.fin_image


def _gamma_image(e: MapExpr, gamma: frozenset[int]) -> frozenset[int]:
    return frozenset(evaluate(e, g) for g in gamma)


def _gamma_subset_image(e: MapExpr, gamma: frozenset[int]) -> Tri:
    out = Tri.YES
    for g in sorted(gamma):
        rep = fiber(e, g)
        if isinstance(rep, InfiniteFiber):
            continue
        if isinstance(rep, FiniteFiber):
            if not rep.elements:
                return Tri.NO
            continue
        out = Tri.UNKNOWN
    return out


def _gamma_preimage_subset(e: MapExpr, gamma: frozenset[int]) -> Tri:
    """Whether the full preimage of gamma is contained in gamma."""
    out = Tri.YES
    for g in sorted(gamma):
        rep = fiber(e, g)
        if isinstance(rep, InfiniteFiber):
            return Tri.NO
        if isinstance(rep, FiniteFiber):
            if not set(rep.elements) <= gamma:
                return Tri.NO
            continue
        out = Tri.UNKNOWN
    return out


def _f_params(gamma: frozenset[int], mu: Threshold) -> str:
    return "gamma={" + ",".join(map(str, sorted(gamma))) + f"}}, mu={mu}"


def _in_f1(gamma: frozenset[int], mu: Threshold, e: MapExpr) -> tuple[Tri, str]:
    cert = certify(e)
    d_ge = cert.d.ge(mu)
    not_covered = tri_not(_gamma_subset_image(e, gamma))
    pre = _gamma_preimage_subset(e, gamma)
    small_c = cert.c.lt(mu)
    ideal = cert.fin_image
    answer = tri_or(d_ge, not_covered, tri_and(pre, small_c), ideal)
    bits = []
    if d_ge is Tri.YES:
        bits.append(f"d(f)>={mu}")
    if not_covered is Tri.YES:
        bits.append("gamma not within the image")
    if tri_and(pre, small_c) is Tri.YES:
        bits.append(f"preimage of gamma inside gamma and c(f)<{mu}")
    if ideal is Tri.YES:
        bits.append("finite image")
    if answer is Tri.NO:
        bits = ["every clause fails"]
    if answer is Tri.UNKNOWN:
        bits = ["a clause is undecided by the certificate or fiber query"]
    return answer, _cite(bits)


def _in_f2(gamma: frozenset[int], nu: Threshold, e: MapExpr) -> tuple[Tri, str]:
    cert = certify(e)
    c_ge = cert.c.ge(nu)
    img = _gamma_image(e, gamma)
    shrinks = tri_from_bool(len(img) < len(gamma))
    fixes = tri_from_bool(img == gamma)
    small_d = cert.d.lt(nu)
    ideal = cert.fin_image
    answer = tri_or(c_ge, shrinks, tri_and(fixes, small_d), ideal)
    bits = []
    if c_ge is Tri.YES:
        bits.append(f"c(f)>={nu}")
    if shrinks is Tri.YES:
        bits.append("gamma collapses to fewer points")
    if tri_and(fixes, small_d) is Tri.YES:
        bits.append(f"gamma f = gamma and d(f)<{nu}")
    if ideal is Tri.YES:
        bits.append("finite image")
    if answer is Tri.NO:
        bits = ["every clause fails"]
    if answer is Tri.UNKNOWN:
        bits = ["a clause is undecided by the certificate"]
    return answer, _cite(bits)


def in_F(variant: str, gamma, mu: Threshold, e: MapExpr) -> Verdict:
    """Membership in the families attached to a stabilized finite set.

    F1(gamma, mu): d >= mu, or gamma not covered by the image, or the full
    preimage of gamma stays inside gamma with c < mu; plus the finite-image
    ideal.  F2(gamma, nu) is the dual through images.  A singleton gamma
    only yields a maximal F2 at the top threshold, so other parameters are
    rejected.
    """
    gamma = frozenset(gamma)
    if not gamma:
        raise InvalidParameters("gamma must be nonempty")
    if variant == "F1":
        answer, reason = _in_f1(gamma, mu, e)
    elif variant == "F2":
        if len(gamma) == 1 and mu is not Threshold.ALEPH0_PLUS:
            raise InvalidParameters(
                "a singleton gamma requires the top threshold for F2"
            )
        answer, reason = _in_f2(gamma, mu, e)
    else:
        raise InvalidParameters(f"unknown family {variant!r}")
    return Verdict(variant, _f_params(gamma, mu), answer, reason)


def _frechet_u1(mu: Threshold, e: MapExpr) -> tuple[Tri, str]:
    cert = certify(e)
    d_ge = cert.d.ge(mu)
    image_outside = cert.d.is_aleph0()  # image cofinite iff defect finite
    small_c = cert.c.lt(mu)
    # over every subset: some non-cofinite set maps onto a cofinite one
    # iff the defect is finite while the collapse is infinite
    preserving = tri_or(cert.d.is_aleph0(), cert.c.lt_aleph0())
    ideal = cert.fin_image
    answer = tri_or(d_ge, image_outside, tri_and(small_c, preserving), ideal)
    bits = []
    if d_ge is Tri.YES:
        bits.append(f"d(f)>={mu}")
    if image_outside is Tri.YES:
        bits.append("the image is not cofinite")
    if tri_and(small_c, preserving) is Tri.YES:
        bits.append(
            f"c(f)<{mu} and non-members map to non-members"
            " (defect infinite or collapse finite)"
        )
    if ideal is Tri.YES:
        bits.append("finite image")
    if answer is Tri.NO:
        bits = ["every clause fails"]
    if answer is Tri.UNKNOWN:
        bits = ["a clause is undecided by the certificate"]
    return answer, _cite(bits)


def _frechet_u2(mu: Threshold, e: MapExpr) -> tuple[Tri, str]:
    cert = certify(e)
    c_ge = cert.c.ge(mu)
    # restriction to every cofinite set collapses iff c is infinite
    always_collapsing = cert.c.is_aleph0()
    small_d = cert.d.lt(mu)
    # every cofinite set keeps a cofinite image iff the defect is finite
    preserving = cert.d.lt_aleph0()
    ideal = cert.fin_image
    answer = tri_or(c_ge, always_collapsing, tri_and(small_d, preserving), ideal)
    bits = []
    if c_ge is Tri.YES:
        bits.append(f"c(f)>={mu}")
    if always_collapsing is Tri.YES:
        bits.append("c(f) infinite, so every cofinite restriction collapses")
    if tri_and(small_d, preserving) is Tri.YES:
        bits.append(f"d(f)<{mu} and cofinite sets keep cofinite images")
    if ideal is Tri.YES:
        bits.append("finite image")
    if answer is Tri.NO:
        bits = ["every clause fails"]
    if answer is Tri.UNKNOWN:
        bits = ["a clause is undecided by the certificate"]
    return answer, _cite(bits)


def in_U(variant: str, filt: FilterOracle, mu: Threshold, e: MapExpr) -> Verdict:
    """Membership in the filter-stabilizer families.

    Principal filters reduce to the finite-set families over the
    generator.  For the cofinite filter, the universally quantified
    clauses reduce to exact certificate criteria (defect finite iff images
    of cofinite sets stay cofinite, and so on), evaluated three-valued.
    """
    if variant not in ("U1", "U2"):
        raise InvalidParameters(f"unknown family {variant!r}")
    params = f"filter={filt.describe()}, mu={mu}"
    if filt.kind == "principal":
        gamma = filt.generator
        if variant == "U1":
            answer, reason = _in_f1(gamma, mu, e)
        else:
            answer, reason = _in_f2(gamma, mu, e)
        reason = "via the finite-set families on the generator: " + reason
        return Verdict(variant, params, answer, reason)
    if variant == "U1":
        answer, reason = _frechet_u1(mu, e)
    else:
        answer, reason = _frechet_u2(mu, e)
    return Verdict(variant, params, answer, reason)


def in_A(variant: str, part: PartitionSpec, e: MapExpr) -> Verdict:
    """Membership in the partition-stabilizer families: the class
    transition relation is a permutation, or it (A1) respectively its
    converse (A2) fails to be total."""
    if variant not in ("A1", "A2"):
        raise InvalidParameters(f"unknown family {variant!r}")
    params = f"n={part.n}"
    try:
        r = rho(e, part)
    except RhoUndecidable as exc:
        return Verdict(variant, params, Tri.UNKNOWN, str(exc))
    if r.is_permutation:
        return Verdict(variant, params, Tri.YES, "the class relation is a permutation")
    probe = r if variant == "A1" else r.inverse()
    side = "" if variant == "A1" else "converse of the "
    if not probe.is_total:
        return Verdict(
            variant, params, Tri.YES, f"the {side}class relation is not total"
        )
    return Verdict(
        variant,
        params,
        Tri.NO,
        f"the class relation {r} is not a permutation and the {side}relation is total",
    )
