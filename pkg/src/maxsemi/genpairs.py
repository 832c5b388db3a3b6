"""Deciders for when two certified maps, together with a stabilized
subgroup of permutations, generate the whole semigroup of self-maps.

The base condition is shared: up to swapping, one map must be injective
with infinite defect and the other surjective with infinitely many
infinite fibers.  Each stabilized structure then adds escape clauses for
its own families, and every refusal names a family that provably contains
both maps, so refusals can be independently rechecked.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations
from typing import Optional, Union

from .core import Threshold, Tri, tri_and, tri_or
from .classify import (
    FilterOracle,
    PartitionSpec,
    RhoUndecidable,
    S_FAMILIES,
    Verdict,
    in_A,
    in_F,
    in_S,
    in_U,
    rho,
)
from .mapexpr import (
    Certificate,
    FiniteFiber,
    InfiniteFiber,
    MapExpr,
    certify,
    evaluate,
    fiber,
)


class UnsupportedFilter(ValueError):
    """Only principal filters admit a decision procedure here."""


@dataclass(frozen=True)
class Witness:
    """A family containing both maps, named so classify can recheck it."""

    family: str
    gamma: frozenset[int] | None = None
    mu: Threshold | None = None
    n: int | None = None
    filter_kind: str | None = None

    def describe(self) -> str:
        bits = [self.family]
        if self.gamma is not None:
            bits.append("gamma={" + ",".join(map(str, sorted(self.gamma))) + "}")
        if self.mu is not None:
            bits.append(f"mu={self.mu}")
        if self.n is not None:
            bits.append(f"n={self.n}")
        return " ".join(bits)

    def to_json(self) -> dict:
        out: dict = {"family": self.family}
        if self.gamma is not None:
            out["gamma"] = sorted(self.gamma)
        if self.mu is not None:
            out["mu"] = str(self.mu)
        if self.n is not None:
            out["n"] = self.n
        if self.filter_kind is not None:
            out["filter"] = self.filter_kind
        return out

    def check(self, e: MapExpr) -> Verdict:
        """Evaluate the named predicate on one map."""
        if self.family in S_FAMILIES:
            return in_S(self.family, certify(e))
        if self.family in ("F1", "F2"):
            return in_F(self.family, self.gamma, self.mu, e)
        if self.family in ("U1", "U2"):
            return in_U(
                self.family, FilterOracle.principal(self.gamma), self.mu, e
            )
        if self.family in ("A1", "A2"):
            return in_A(self.family, PartitionSpec(self.n), e)
        raise ValueError(f"unknown witness family {self.family!r}")


GENERATES = "generates"
DOES_NOT_GENERATE = "does_not_generate"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Decision:
    answer: str
    witness: Optional[Witness] = None
    blocking: Optional[str] = None

    def to_json(self) -> dict:
        out: dict = {"answer": self.answer}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.blocking is not None:
            out["blocking"] = self.blocking
        return out


def _base_roles(cf: Certificate, cg: Certificate) -> Tri:
    """Whether (f, g) in this order meet the base condition: f injective
    with infinite defect, g surjective with infinitely many infinite
    fibers."""
    return tri_and(cf.inj, cf.d.is_aleph0(), cg.surj, cg.kinf.is_aleph0())


def _search_witness(candidates) -> tuple[Optional[Witness], bool]:
    """First candidate family holding both maps decisively; also reports
    whether any candidate was left undecided."""
    saw_unknown = False
    for witness, va, vb in candidates:
        if va is Tri.YES and vb is Tri.YES:
            return witness, saw_unknown
        if va is Tri.UNKNOWN or vb is Tri.UNKNOWN:
            saw_unknown = True
    return None, saw_unknown


def _s_witness(f: MapExpr, g: MapExpr) -> tuple[Optional[Witness], bool]:
    cf, cg = certify(f), certify(g)
    return _search_witness(
        (Witness(fam), in_S(fam, cf).answer, in_S(fam, cg).answer)
        for fam in S_FAMILIES
    )


def decide_sym_pair(f: MapExpr, g: MapExpr) -> Decision:
    """Together with all permutations, do f and g generate everything?

    Yes exactly when, up to swapping, one map is injective with infinite
    defect and the other surjective with infinite contraction index.  On
    refusal some family S1..S5 contains both maps and is returned as the
    witness.
    """
    cf, cg = certify(f), certify(g)
    fg = _base_roles(cf, cg)
    gf = _base_roles(cg, cf)
    if fg is Tri.YES or gf is Tri.YES:
        return Decision(GENERATES)
    if fg is Tri.NO and gf is Tri.NO:
        witness, saw_unknown = _s_witness(f, g)
        if witness is not None:
            return Decision(DOES_NOT_GENERATE, witness=witness)
        if saw_unknown:
            return Decision(
                UNKNOWN,
                blocking="refusal is certain but every witness family is undecided",
            )
        raise AssertionError(
            "refused pair escapes every base family; certificates are unsound"
        )
    return Decision(
        UNKNOWN,
        blocking="an interval certificate leaves the base condition undecided",
    )


def _nonempty_subsets(sigma: frozenset[int]) -> list[frozenset[int]]:
    items = sorted(sigma)
    return [
        frozenset(c)
        for c in chain.from_iterable(
            combinations(items, k) for k in range(1, len(items) + 1)
        )
    ]


def _preimage_escapes(e: MapExpr, gamma: frozenset[int]) -> Tri:
    """Whether the full preimage of gamma contains a point outside gamma.

    An empty preimage does not escape: containment holds vacuously.
    """
    found_unknown = False
    for g in sorted(gamma):
        rep = fiber(e, g)
        if isinstance(rep, InfiniteFiber):
            return Tri.YES  # an infinite fiber cannot fit inside a finite set
        elif isinstance(rep, FiniteFiber):
            if not set(rep.elements) <= gamma:
                return Tri.YES
        else:
            if not set(rep.sampled) <= gamma:
                return Tri.YES
            found_unknown = True
    return Tri.UNKNOWN if found_unknown else Tri.NO


def _covers(e: MapExpr, gamma: frozenset[int]) -> Tri:
    """Whether gamma lies inside the image of e."""
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


def _gamma_clauses(a: MapExpr, b: MapExpr, gamma: frozenset[int]) -> Tri:
    """The escape disjunction at one stabilized set, with a the injective
    and b the surjective map of the pair:

    (i)   gamma a leaves gamma and the b-preimage of gamma leaves gamma;
    (ii)  gamma b leaves gamma, its b-preimage leaves gamma, and b is
          injective on gamma;
    (iii) gamma a leaves gamma, its a-preimage leaves gamma, and gamma is
          covered by the image of a.
    """
    img_a = frozenset(evaluate(a, x) for x in gamma)
    img_b = frozenset(evaluate(b, x) for x in gamma)
    a_moves = Tri.YES if not img_a <= gamma else Tri.NO
    b_moves = Tri.YES if not img_b <= gamma else Tri.NO
    b_pre_escapes = _preimage_escapes(b, gamma)
    a_pre_escapes = _preimage_escapes(a, gamma)
    b_injective_here = Tri.YES if len(img_b) == len(gamma) else Tri.NO
    clause_i = tri_and(a_moves, b_pre_escapes)
    clause_ii = tri_and(b_moves, b_pre_escapes, b_injective_here)
    clause_iii = tri_and(a_moves, a_pre_escapes, _covers(a, gamma))
    return tri_or(clause_i, clause_ii, clause_iii)


def _stab_witness(
    f: MapExpr, g: MapExpr, gamma: frozenset[int]
) -> tuple[Optional[Witness], bool]:
    candidates = [("F1", Threshold.ALEPH0_PLUS), ("F2", Threshold.ALEPH0_PLUS)]
    candidates.append(("F1", Threshold.ALEPH0))
    if len(gamma) >= 2:
        candidates.append(("F2", Threshold.ALEPH0))
    return _search_witness(
        (
            Witness(fam, gamma=gamma, mu=mu),
            in_F(fam, gamma, mu, f).answer,
            in_F(fam, gamma, mu, g).answer,
        )
        for fam, mu in candidates
    )


def _decide_over_gammas(
    f: MapExpr, g: MapExpr, gammas: list[frozenset[int]]
) -> Decision:
    base = decide_sym_pair(f, g)
    if base.answer is not GENERATES:
        return base
    cf = certify(f)
    a, b = (f, g) if _base_roles(cf, certify(g)) is Tri.YES else (g, f)
    for gamma in gammas:
        ok = _gamma_clauses(a, b, gamma)
        if ok is Tri.YES:
            continue
        if ok is Tri.UNKNOWN:
            return Decision(
                UNKNOWN,
                blocking="a fiber query at gamma={%s} is undecided"
                % ",".join(map(str, sorted(gamma))),
            )
        witness, saw_unknown = _stab_witness(f, g, gamma)
        if witness is not None:
            return Decision(DOES_NOT_GENERATE, witness=witness)
        if saw_unknown:
            return Decision(
                UNKNOWN,
                blocking="refusal is certain but every witness family is undecided",
            )
        raise AssertionError(
            "pair trapped at a stabilized set but no family holds both maps"
        )
    return Decision(GENERATES)


def decide_pointwise_stab_pair(sigma, f: MapExpr, g: MapExpr) -> Decision:
    """Decision relative to the pointwise stabilizer of the finite set
    sigma: the base condition plus the escape clauses at every nonempty
    subset of sigma."""
    sigma = frozenset(sigma)
    if not sigma:
        raise ValueError("sigma must be a nonempty finite set")
    return _decide_over_gammas(f, g, _nonempty_subsets(sigma))


def decide_filter_pair(filt: FilterOracle, f: MapExpr, g: MapExpr) -> Decision:
    """Decision relative to the stabilizer of a finitely generated filter.

    Only principal oracles are decidable here; refusals are reported in
    filter language (U1/U2 over the generator).  The cofinite filter and
    any non-principal oracle are refused outright: no finite procedure can
    follow a filter with no least member.
    """
    if filt.kind != "principal":
        raise UnsupportedFilter(
            "only principal filter oracles admit a generating-pair decision"
        )
    gamma = filt.generator
    decision = _decide_over_gammas(f, g, [gamma])
    if decision.answer is DOES_NOT_GENERATE and decision.witness.family in (
        "F1",
        "F2",
    ):
        w = decision.witness
        renamed = Witness(
            "U1" if w.family == "F1" else "U2",
            gamma=w.gamma,
            mu=w.mu,
            filter_kind="principal",
        )
        return Decision(DOES_NOT_GENERATE, witness=renamed)
    return decision


def decide_partition_pair(part: PartitionSpec, f: MapExpr, g: MapExpr) -> Decision:
    """Decision relative to the stabilizer of the partition into residue
    classes: the base condition plus an escape clause on the class
    transition relations of the two maps."""
    base = decide_sym_pair(f, g)
    if base.answer is not GENERATES:
        return base
    a, b = (f, g) if _base_roles(certify(f), certify(g)) is Tri.YES else (g, f)
    try:
        ra = rho(a, part)
        rb = rho(b, part)
    except RhoUndecidable as exc:
        return Decision(UNKNOWN, blocking=str(exc))
    n = part.n
    clause_i = not ra.is_permutation and not rb.is_permutation
    clause_ii = not ra.is_permutation and ra.inverse().is_total
    clause_iii = not rb.is_permutation and rb.is_total
    if clause_i or clause_ii or clause_iii:
        return Decision(GENERATES)
    witness, saw_unknown = _search_witness(
        (
            Witness(fam, n=n),
            in_A(fam, part, f).answer,
            in_A(fam, part, g).answer,
        )
        for fam in ("A1", "A2")
    )
    if witness is not None:
        return Decision(DOES_NOT_GENERATE, witness=witness)
    if saw_unknown:
        return Decision(
            UNKNOWN,
            blocking="refusal is certain but every witness family is undecided",
        )
    raise AssertionError(
        "pair trapped at a partition but neither class family holds both maps"
    )
