import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from affcox.crystal import (CrystalGroup, FiniteQuotient, build_affine_group, make_quotient,
                            psi_certificate, scale_isomorphism, scale_map)
from affcox.exceptions import CertificateError, ConsistencyError, PreconditionError
from affcox.finite import TableGroup
from affcox.intmat import identity
from affcox.weyl import point_group_for
from oracles import brute_isomorphic, cyclic_table, dihedral_table, klein_four_table

INF = math.inf
FAMILIES = ["A~1", "A~2", "C~2", "G~2", "A~3", "B~3", "C~3"]


@pytest.fixture(scope="module")
def groups():
    return {f: build_affine_group(f) for f in FAMILIES}


@pytest.fixture(scope="module")
def dinf(groups):
    return groups["A~1"]


def reflection(g):
    return g.point_group.generator_indices[0]


def test_infinite_dihedral_products(dinf):
    s = reflection(dinf)
    x = dinf.element((1,), s)
    assert x * x == dinf.identity
    assert dinf.translation((2,)) * dinf.translation((5,)) == dinf.translation((7,))
    assert dinf.inv(dinf.element((5,), s)) == dinf.element((5,), s)
    assert dinf.inv(dinf.translation((3,))) == dinf.translation((-3,))


def test_a2_product_uses_first_matrix(groups):
    g = groups["A~2"]
    s1, s2 = g.point_group.generator_indices
    x = g.element((1, 0), s1) * g.element((0, 1), s2)
    M = g.point_group.elements[s1]
    assert x.a == (1 + M[0][1], M[1][1])
    assert x.w == g.point_group.mul(s1, s2)


def test_element_orders(dinf):
    s = reflection(dinf)
    assert dinf.element_order(dinf.identity) == 1
    assert dinf.element_order(dinf.element((5,), s)) == 2
    assert dinf.element_order(dinf.translation((1,))) == INF


def test_translation_tests(dinf):
    s = reflection(dinf)
    t = dinf.is_translation(dinf.translation((7,)))
    assert t.by_component and t.by_formula
    t = dinf.is_translation(dinf.element((0,), s))
    assert not t.by_component and not t.by_formula
    t = dinf.is_translation(dinf.identity)
    assert t.by_component and t.by_formula


def test_commutator_witness(dinf):
    # [x, y] = x^-1 y^-1 x y; with x = (0, s), y = (1, e)^2 this is (4, e)
    s = reflection(dinf)
    x, y = dinf.element((0,), s), dinf.translation((1,)) ** 2
    c = dinf.commutator(x, y)
    assert c == dinf.translation((4,))
    assert c != dinf.identity


def test_divisibility(groups):
    g = groups["A~2"]
    assert g.divisibility_profile(g.translation((1, 1)), [2, 3, 5]) == [False] * 3
    assert g.divisibility_profile(g.translation((6, 10)), [2]) == [True]
    assert g.divisibility_profile(g.identity, [2, 3]) == [True, True]
    with pytest.raises(PreconditionError):
        g.divisibility_profile(g.element((0, 0), 1), [2])


def test_build_examples(groups):
    assert groups["A~1"].point_group.order == 2 and groups["A~1"].rank == 1
    assert groups["A~2"].point_group.order == 6
    assert groups["C~2"].point_group.order == 8
    with pytest.raises(PreconditionError):
        build_affine_group("A3")


@pytest.mark.parametrize("family", FAMILIES)
def test_certificate(groups, family):
    rep = psi_certificate(groups[family])
    assert rep.ok and all(rep.items[i] for i in range(1, 7))
    assert rep.torsion_free_quotient_order == 2 ** groups[family].rank


def test_certificate_detects_trivial_action():
    pg = point_group_for("A~2")
    g = CrystalGroup(pg, action=[identity(2)] * pg.order, require_faithful=False)
    rep = psi_certificate(g)
    assert not rep.ok and 6 in rep.failures
    with pytest.raises(CertificateError) as err:
        rep.raise_for_failure()
    assert err.value.item in rep.failures
    with pytest.raises(PreconditionError):
        CrystalGroup(pg, action=[identity(2)] * pg.order)


def test_consistency_error_on_broken_action():
    pg = point_group_for("A~1")
    bad = CrystalGroup(pg, action=[((1,),), ((1,),)], require_faithful=False)
    with pytest.raises(ConsistencyError):
        bad.is_translation(bad.element((0,), 1))


def test_group_axioms_on_box(groups):
    for f in ["A~2", "C~2"]:
        g = groups[f]
        box = g.box(1)
        rng = random.Random(1)
        triples = [tuple(rng.choice(box) for _ in range(3)) for _ in range(400)]
        for x, y, z in triples:
            assert (x * y) * z == x * (y * z)
        for x in box:
            assert x * g.inv(x) == g.identity == g.inv(x) * x


@given(st.sampled_from(FAMILIES), st.integers(0, 10**6), st.integers(1, 40))
def test_torsion_law(family, seed, radius):
    g = build_affine_group(family)
    x = g.random_element(random.Random(seed), radius)
    order = g.element_order(x)
    k = g.point_group.orders[x.w]
    assert order in (k, INF)
    assert (order == k) == (not any(g.cyclic_sum(x)))


@given(st.sampled_from(FAMILIES), st.integers(0, 10**6))
def test_translation_tests_agree(family, seed):
    g = build_affine_group(family)
    x = g.random_element(random.Random(seed), 5)
    t = g.is_translation(x)
    assert t.by_component == t.by_formula == (x.w == 0)


def test_scale_examples(groups):
    dinf = groups["A~1"]
    s = reflection(dinf)
    phi = scale_map(dinf, 2)
    x = dinf.element((1,), s)
    assert phi(x * x) == phi(x) * phi(x) == dinf.identity
    for m in (1, 3):
        rep = scale_isomorphism(groups["A~2"], m, random_pairs=100)
        assert rep.ok and not rep.violations


@pytest.mark.parametrize("family,m", [("A~1", 2), ("A~1", 3), ("A~2", 2), ("C~2", 3), ("G~2", 2)])
def test_quotient_projection(groups, family, m):
    g = groups[family]
    q = make_quotient(g, m)
    assert q.order == m ** g.rank * g.point_group.order
    rng = random.Random(7)
    for _ in range(200):
        x, y = g.random_element(rng, 20), g.random_element(rng, 20)
        assert q.project(x * y) == q.mul(q.project(x), q.project(y))


def test_quotient_tables_match_fixtures(groups):
    q2 = make_quotient(groups["A~1"], 2)
    assert brute_isomorphic(q2.table, klein_four_table())
    assert not brute_isomorphic(q2.table, cyclic_table(4))
    q3 = make_quotient(groups["A~1"], 3)
    assert brute_isomorphic(q3.table, dihedral_table(3))
    assert not brute_isomorphic(q3.table, cyclic_table(6))
    TableGroup(q3.table)  # group axioms


def test_scale_then_reduce_is_consistent(groups):
    # reducing (m a, w) mod m k agrees with reducing (a, w) mod k and rescaling
    g = groups["A~2"]
    m, k = 2, 3
    big, small = make_quotient(g, m * k), make_quotient(g, k)
    phi = scale_map(g, m)
    for x in g.box(2):
        a_big, w_big = big.normal_form(big.project(phi(x)))
        a_small, w_small = small.normal_form(small.project(x))
        assert w_big == w_small
        assert a_big == tuple((m * c) % (m * k) for c in a_small)


def test_element_json_round_trip(groups):
    g = groups["C~2"]
    x = g.element((3, -2), 5)
    assert g.decode(json.loads(json.dumps(g.encode(x)))) == x


def test_mismatched_parents(groups):
    with pytest.raises(PreconditionError):
        groups["A~2"].mul(groups["A~2"].identity, groups["C~2"].identity)


def test_quotient_vectorised_matches_scalar(groups):
    q = make_quotient(groups["G~2"], 2)
    X = np.arange(q.order)
    Y = np.roll(X, 5)
    assert all(q.mul_many(X, Y)[i] == q.mul(int(X[i]), int(Y[i])) for i in range(q.order))
    assert isinstance(q, FiniteQuotient)
