import random
from collections import Counter

import pytest

from maxsemi.classify import (
    FilterOracle,
    InvalidParameters,
    PartitionSpec,
    RhoUndecidable,
    S_FAMILIES,
    in_A,
    in_F,
    in_S,
    in_U,
    in_frakF,
    realize_partition_relation,
    rho,
)
from maxsemi.core import (
    ALEPH0,
    Card,
    CardInterval,
    Threshold,
    Tri,
    compose_collapse,
    compose_defect,
    compose_kinf,
)
from maxsemi.mapexpr import (
    CANTOR_PROJ,
    Certificate,
    Compose,
    affine,
    certify,
    divfloor,
    identity,
    perm,
    shift_by,
    times,
)
from maxsemi.numsets import EPSet, unpair
from maxsemi.relcalc import Relation

from oracles import affine_pool, random_affine

HALVE, DOUBLE, IDENT = divfloor(2), times(2), identity()
A0, A0P = Threshold.ALEPH0, Threshold.ALEPH0_PLUS


def test_rho_examples():
    assert rho(shift_by(1), PartitionSpec(2)) == Relation.from_pairs(2, [(0, 1), (1, 0)])
    assert rho(HALVE, PartitionSpec(2)) == Relation.full(2)
    assert rho(IDENT, PartitionSpec(3)) == Relation.identity(3)
    assert rho(DOUBLE, PartitionSpec(2)) == Relation.from_pairs(2, [(0, 0), (1, 0)])


def _brute_rho(func, n, window, threshold):
    """Distinct image values of each class pair seen on a window; pairs
    with many distinct values approximate the infinite intersections."""
    values = {}
    for x in range(window):
        v = func(x)
        values.setdefault((x % n, v % n), set()).add(v)
    return {k for k, vs in values.items() if len(vs) > threshold}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rho_cantor_matches_brute_force(n):
    got = rho(CANTOR_PROJ, PartitionSpec(n))
    brute = _brute_rho(lambda z: unpair(z)[0], n, 120000, 8)
    assert got.pairs == frozenset(brute)


def test_rho_on_random_normal_forms_matches_sampling():
    rng = random.Random(99)
    for _ in range(60):
        f = random_affine(rng)
        n = rng.choice([2, 3, 4])
        got = rho(f, PartitionSpec(n))
        brute = _brute_rho(f, n, 4000 * n, 30)
        assert got.pairs == frozenset(brute), (f, n)


def test_rho_empty_for_finite_image_maps():
    const = affine(0, 1, 0, [7])
    assert rho(const, PartitionSpec(3)) == Relation(3, 0)
    mod2 = affine(0, 2, 0, [0, 1])
    assert rho(mod2, PartitionSpec(2)) == Relation(2, 0)
    # the empty relation is not total, so finite-image maps join both families
    assert in_A("A1", PartitionSpec(2), const).answer is Tri.YES
    assert in_A("A2", PartitionSpec(2), const).answer is Tri.YES


def test_rho_cantor_then_affine():
    e = Compose(CANTOR_PROJ, DOUBLE)
    got = rho(e, PartitionSpec(2))
    brute = _brute_rho(lambda z: 2 * unpair(z)[0], 2, 60000, 8)
    assert got.pairs == frozenset(brute)
    squash = Compose(CANTOR_PROJ, affine(0, 1, 0, [5]))
    assert rho(squash, PartitionSpec(2)) == Relation(2, 0)


def test_rho_undecidable_for_affine_then_cantor():
    with pytest.raises(RhoUndecidable):
        rho(Compose(DOUBLE, CANTOR_PROJ), PartitionSpec(2))


def test_realize_partition_relation_exhaustive():
    for n in (2, 3):
        for mask in range(1 << (n * n)):
            rel = Relation(n, mask)
            if not rel.is_total:
                continue
            f = realize_partition_relation(rel, n)
            assert rho(f, PartitionSpec(n)) == rel


def test_in_s_examples():
    assert in_S("S1", certify(HALVE)).answer is Tri.NO
    assert in_S("S1", certify(DOUBLE)).answer is Tri.YES
    assert in_S("S5", certify(CANTOR_PROJ)).answer is Tri.NO
    assert in_S("S3", certify(HALVE)).answer is Tri.NO
    v = in_S("S1", certify(DOUBLE))
    assert "c(f)=0" in v.reason


def test_in_s_unknown_cites_interval():
    cert = Certificate(
        inj=Tri.UNKNOWN,
        surj=Tri.UNKNOWN,
        d=CardInterval(Card(0), ALEPH0),
        c=CardInterval(Card(0), ALEPH0),
        kinf=CardInterval(Card(0), ALEPH0),
        fin_image=Tri.UNKNOWN,
    )
    v = in_S("S1", cert)
    assert v.answer is Tri.UNKNOWN
    assert "undecided" in v.reason


def test_in_frakf_examples():
    assert in_frakF(certify(IDENT)) is Tri.NO
    assert in_frakF(certify(affine(0, 1, 0, [5]))) is Tri.YES
    assert in_frakF(certify(HALVE)) is Tri.NO


def test_in_f_examples():
    assert in_F("F1", {0}, A0P, DOUBLE).answer is Tri.YES
    assert in_F("F2", {0}, A0P, shift_by(1)).answer is Tri.NO
    assert in_F("F1", {0}, A0P, perm([1, 0])).answer is Tri.NO
    with pytest.raises(InvalidParameters):
        in_F("F2", {0}, A0, IDENT)
    with pytest.raises(InvalidParameters):
        in_F("F1", set(), A0, IDENT)


def test_in_f_finite_image_clause():
    const = affine(0, 1, 0, [7])
    assert in_F("F2", {0}, A0P, const).answer is Tri.YES
    assert in_F("F1", {0, 1}, A0, const).answer is Tri.YES


def test_in_u_examples():
    assert in_U("U1", FilterOracle.principal({0}), A0P, DOUBLE).answer is Tri.YES
    assert in_U("U1", FilterOracle.frechet(), A0P, DOUBLE).answer is Tri.YES
    assert in_U("U1", FilterOracle.frechet(), A0P, IDENT).answer is Tri.YES


def test_in_u_frechet_derived_cases():
    fr = FilterOracle.frechet()
    # surjective with infinite collapse: in U2 through the collapse clause,
    # out of U1 at the countable threshold
    assert in_U("U2", fr, A0, HALVE).answer is Tri.YES
    assert in_U("U1", fr, A0, HALVE).answer is Tri.NO
    assert in_U("U1", fr, A0P, CANTOR_PROJ).answer is Tri.NO
    assert in_U("U2", fr, A0P, CANTOR_PROJ).answer is Tri.YES
    # unnormalizable composite leaves the quantified clause unknown
    e = Compose(DOUBLE, CANTOR_PROJ)
    assert in_U("U1", fr, A0P, e).answer is Tri.UNKNOWN


def test_principal_u_equals_f_on_pool():
    rng = random.Random(31)
    pool = [random_affine(rng) for _ in range(120)] + [CANTOR_PROJ, IDENT]
    for gamma in ({0}, {0, 1}):
        oracle = FilterOracle.principal(gamma)
        for e in pool:
            for mu in (A0, A0P):
                assert (
                    in_U("U1", oracle, mu, e).answer
                    == in_F("F1", gamma, mu, e).answer
                )
                if len(gamma) >= 2 or mu is A0P:
                    assert (
                        in_U("U2", oracle, mu, e).answer
                        == in_F("F2", gamma, mu, e).answer
                    )


def test_filter_oracle_membership():
    fr = FilterOracle.frechet()
    assert fr.contains(EPSet.residue_class(2, 0)) is Tri.NO
    assert fr.contains(EPSet.full()) is Tri.YES
    assert fr.contains(EPSet(3, 1, frozenset({0}), frozenset())) is Tri.YES
    assert fr.kappa == ALEPH0
    pr = FilterOracle.principal({0, 4})
    assert pr.contains(EPSet.finite({0, 4, 9})) is Tri.YES
    assert pr.contains(EPSet.finite({0})) is Tri.NO
    assert pr.kappa == Card(2)


def test_in_a_examples():
    assert in_A("A1", PartitionSpec(2), shift_by(1)).answer is Tri.YES
    assert in_A("A1", PartitionSpec(2), HALVE).answer is Tri.NO
    assert in_A("A2", PartitionSpec(2), HALVE).answer is Tri.NO
    assert in_A("A2", PartitionSpec(2), DOUBLE).answer is Tri.YES
    v = in_A("A1", PartitionSpec(2), Compose(DOUBLE, CANTOR_PROJ))
    assert v.answer is Tri.UNKNOWN


def _fold_interval_certificate(f, g) -> Certificate:
    ca, cb = certify(f), certify(g)
    d = compose_defect(ca.d, cb.c, cb.d, cb.inj)
    c = compose_collapse(ca.c, ca.d, cb.c, ca.surj)
    k = compose_kinf(ca.kinf, cb.kinf)
    return Certificate(
        inj=c.eq_zero(),
        surj=d.eq_zero(),
        d=d,
        c=c,
        kinf=k,
        fin_image=Tri.UNKNOWN,
    )


def test_decisive_verdicts_stable_under_exactification():
    # a verdict the interval certificate already decides must agree with
    # the verdict on the exact certificate of the same composite
    rng = random.Random(77)
    checked = 0
    for _ in range(300):
        f, g = random_affine(rng), random_affine(rng)
        folded = _fold_interval_certificate(f, g)
        exact = certify(Compose(f, g))
        for fam in S_FAMILIES:
            vi = in_S(fam, folded).answer
            ve = in_S(fam, exact).answer
            if vi is not Tri.UNKNOWN:
                checked += 1
                assert vi == ve, (f, g, fam)
    assert checked > 200


FAMILY_PREDICATES = {
    "S1": lambda e: in_S("S1", certify(e)).answer,
    "S2": lambda e: in_S("S2", certify(e)).answer,
    "S3": lambda e: in_S("S3", certify(e)).answer,
    "S4": lambda e: in_S("S4", certify(e)).answer,
    "S5": lambda e: in_S("S5", certify(e)).answer,
    "F1({0},aleph0)": lambda e: in_F("F1", {0}, A0, e).answer,
    "F1({0},aleph0plus)": lambda e: in_F("F1", {0}, A0P, e).answer,
    "F1({0,1},aleph0)": lambda e: in_F("F1", {0, 1}, A0, e).answer,
    "F1({0,1},aleph0plus)": lambda e: in_F("F1", {0, 1}, A0P, e).answer,
    "F2({0},aleph0plus)": lambda e: in_F("F2", {0}, A0P, e).answer,
    "F2({0,1},aleph0)": lambda e: in_F("F2", {0, 1}, A0, e).answer,
    "F2({0,1},aleph0plus)": lambda e: in_F("F2", {0, 1}, A0P, e).answer,
    "A1(n=2)": lambda e: in_A("A1", PartitionSpec(2), e).answer,
    "A2(n=2)": lambda e: in_A("A2", PartitionSpec(2), e).answer,
    "A1(n=3)": lambda e: in_A("A1", PartitionSpec(3), e).answer,
    "A2(n=3)": lambda e: in_A("A2", PartitionSpec(3), e).answer,
}


def closure_violations(name, predicate, pairs_wanted, seed):
    """Number of member pairs whose composite is decisively outside."""
    pool = affine_pool()
    members = [f for f in pool if predicate(f) is Tri.YES]
    assert len(members) >= 2, f"pool too thin for {name}"
    rng = random.Random(seed)
    bad = 0
    for _ in range(pairs_wanted):
        f, g = rng.choice(members), rng.choice(members)
        if predicate(Compose(f, g)) is Tri.NO:
            bad += 1
    return bad


@pytest.mark.parametrize("name", sorted(FAMILY_PREDICATES), ids=str)
def test_family_closure_smoke(name):
    assert closure_violations(name, FAMILY_PREDICATES[name], 120, seed=hash(name) % 10**6) == 0


def test_verdict_json_shape():
    v = in_F("F1", {0}, A0P, DOUBLE)
    payload = v.to_json()
    assert set(payload) == {"family", "params", "answer", "reason"}
    assert payload["answer"] == "yes"
