import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affcox.crystal import build_affine_group, make_quotient
from affcox.exceptions import CapExceeded, PreconditionError
from affcox.finite import AbelianGroup, TableGroup, cyclic
from affcox.intmat import identity
from affcox.lattice import IntegerLattice, WModuleLattice
from affcox.quotients import (abelianization_invariants, conjugacy_classes, eval_formula_on_quotient,
                              find_isomorphism, fingerprint, is_isomorphism, iso_bruteforce,
                              module_fingerprint, module_genus_compare, spacegroup_genus_compare)
from affcox.weyl import generate_closure, point_group_for
from oracles import (brute_fixed_points, brute_isomorphic, cyclic_table, dihedral_table,
                     klein_four_table, naive_formula_check_commutes_with_squares)

FAMILIES = ["A~1", "A~2", "C~2", "G~2"]


@pytest.fixture(scope="module")
def groups():
    return {f: build_affine_group(f) for f in FAMILIES + ["A~3", "B~3", "C~3"]}


def test_fingerprint_dinf(groups):
    f2 = fingerprint(make_quotient(groups["A~1"], 2))
    assert (f2.order, f2.exponent, f2.abelian, f2.involutions) == (4, 2, True, 3)
    assert f2.abelianization == (2, 2)
    f3 = fingerprint(make_quotient(groups["A~1"], 3))
    assert f3.order == 6 and not f3.abelian
    assert sorted(size for size, _ in f3.class_sizes) == [1, 2, 3]
    assert f3.abelianization == (2,) and f3.derived_order == 3


def test_fingerprint_trivial():
    f = fingerprint(TableGroup([[0]]))
    assert f.order == 1 and f.exponent == 1 and f.abelianization == ()
    assert f.order_histogram == ((1, 1),) and f.class_sizes == ((1, 1),)


@pytest.mark.parametrize("moduli,expected", [((4,), (4,)), ((2, 2), (2, 2)), ((6,), (6,)),
                                             ((2, 4), (2, 4)), ((3, 3), (3, 3))])
def test_abelianization_of_abelian(moduli, expected):
    assert abelianization_invariants(AbelianGroup(moduli)) == expected


def test_abelianization_dihedral():
    assert abelianization_invariants(TableGroup(dihedral_table(4))) == (2, 2)
    assert abelianization_invariants(TableGroup(dihedral_table(5))) == (2,)


def test_iso_examples(groups):
    q2 = make_quotient(groups["A~1"], 2)
    assert iso_bruteforce(q2, TableGroup(klein_four_table()))
    q3 = make_quotient(groups["A~1"], 3)
    assert not iso_bruteforce(q3, TableGroup(cyclic_table(6)))
    assert iso_bruteforce(q3, q3)
    phi = find_isomorphism(q3, TableGroup(dihedral_table(3)))
    assert phi is not None and is_isomorphism(q3, TableGroup(dihedral_table(3)), phi)


def test_iso_cap(groups):
    big = make_quotient(groups["C~2"], 9)
    with pytest.raises(CapExceeded):
        iso_bruteforce(big, big)


@pytest.mark.parametrize("family,m", [("A~1", 4), ("A~2", 2), ("C~2", 2), ("G~2", 2), ("A~2", 3)])
def test_shuffled_copies(groups, family, m):
    q = make_quotient(groups[family], m)
    rng = np.random.default_rng(11)
    base = fingerprint(q)
    for _ in range(20 if q.order <= 64 else 3):
        H = q.relabeled(rng.permutation(q.order))
        assert fingerprint(H) == base
    H = q.relabeled(rng.permutation(q.order))
    phi = find_isomorphism(TableGroup(q.table, check=False), H)
    assert phi is not None and is_isomorphism(q, H, phi)


def test_small_groups_against_bruteforce():
    tables = [cyclic_table(8), dihedral_table(4), [[a ^ b for b in range(8)] for a in range(8)],
              TableGroup(cyclic_table(2)).relabeled([1, 0]).table.tolist()]
    groups_ = [TableGroup(t) for t in tables[:3]] + [AbelianGroup((2, 4))]
    for G in groups_:
        for H in groups_:
            expected = brute_isomorphic(G.table, H.table)
            assert iso_bruteforce(G, H) == expected
            if fingerprint(G) != fingerprint(H):
                assert not iso_bruteforce(G, H)


def test_quaternion_vs_dihedral():
    # same order histogram up to involutions; fingerprints must tell them apart
    q8 = quaternion_table()
    Q, D = TableGroup(q8), TableGroup(dihedral_table(4))
    assert fingerprint(Q) != fingerprint(D)
    assert not iso_bruteforce(Q, D)


def quaternion_table():
    units = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    mul = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
           (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
           (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
           (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    T = []
    for s1, b1 in units:
        row = []
        for s2, b2 in units:
            s, b = mul[(b1, b2)]
            row.append(units.index((s * s1 * s2, b)))
        T.append(row)
    return T


def test_genus_examples(groups):
    r = spacegroup_genus_compare(groups["A~2"], groups["G~2"], [2])
    assert r.distinguished_at == 2 and r.results[0].method == "order"
    r = spacegroup_genus_compare(groups["A~2"], groups["C~2"], [2])
    assert r.distinguished_at == 2
    r = spacegroup_genus_compare(groups["C~2"], groups["C~2"], [2, 3])
    assert r.distinguished_at is None
    assert r.verdict == "not distinguished within tested moduli"
    assert [x.verdict for x in r.results] == ["isomorphic", "isomorphic"]
    with pytest.raises(PreconditionError):
        spacegroup_genus_compare(groups["C~2"], groups["C~2"], [])
    assert json.loads(json.dumps(r.to_json()))["schema"] == "affcox.genus/1"


def test_bc3_split_at_two(groups):
    r = spacegroup_genus_compare(groups["B~3"], groups["C~3"], [2])
    assert r.results[0].fingerprints[0].order == r.results[0].fingerprints[1].order == 384
    assert r.distinguished_at == 2


@pytest.mark.parametrize("pair", [("A~2", "C~2"), ("C~2", "G~2"), ("B~3", "C~3")])
def test_genus_symmetric_and_monotone(groups, pair):
    a, b = groups[pair[0]], groups[pair[1]]
    ab = spacegroup_genus_compare(a, b, [2, 3])
    ba = spacegroup_genus_compare(b, a, [2, 3])
    assert [r.verdict for r in ab.results] == [r.verdict for r in ba.results]
    more = spacegroup_genus_compare(a, b, [2, 3, 4])
    assert (ab.distinguished_at is None) or more.distinguished_at is not None


def a2_reflection_action():
    # trivial group versus the order-2 group generated by [[1,1],[0,-1]] acting on Z^2
    return generate_closure([((-1, 1), (0, 1))])


def test_module_fixed_points_differ():
    pg = a2_reflection_action()
    trivial = WModuleLattice(IntegerLattice.full(2), pg, action=[identity(2)] * pg.order)
    moving = WModuleLattice(IntegerLattice.full(2), pg)
    fp_t, fp_m = module_fingerprint(trivial, 2, 1), module_fingerprint(moving, 2, 1)
    M = pg.elements[1]
    assert fp_t.per_element[1][0] == 4
    assert fp_m.per_element[1][0] == brute_fixed_points(M, 2) == 2
    rep = module_genus_compare(trivial, moving, [2], 1)
    assert rep.entries[0]["verdict"] == "different"
    assert not rep.same_within_tested


def test_module_scaling_by_two_at_three():
    pg = point_group_for("A~2")
    L = WModuleLattice(IntegerLattice.full(2), pg)
    rep = module_genus_compare(L, L.scaled(2), [3], 2)
    assert rep.same_within_tested
    assert rep.entries[0]["method"] == "exact"


@pytest.mark.parametrize("family", ["A~1", "A~2", "C~2", "G~2"])
def test_module_self_comparison(family):
    pg = point_group_for(family)
    L = WModuleLattice(IntegerLattice.full(pg.rank), pg)
    rep = module_genus_compare(L, L, [2, 3, 5], 2)
    assert rep.same_within_tested


def test_module_sublattice_can_differ():
    # the index-3 invariant sublattice of the A~2 action differs from Z^2 at p = 3
    pg = point_group_for("A~2")
    from affcox.lattice import invariant_sublattices
    N = next(L for L in invariant_sublattices(pg, 3) if L.index == 3)
    rep = module_genus_compare(WModuleLattice(IntegerLattice.full(2), pg), WModuleLattice(N, pg), [3], 1)
    assert not rep.same_within_tested
    rep2 = module_genus_compare(WModuleLattice(IntegerLattice.full(2), pg), WModuleLattice(N, pg), [2], 1)
    assert rep2.same_within_tested


def test_module_mismatched_groups():
    a, b = point_group_for("A~2"), point_group_for("C~2")
    with pytest.raises(PreconditionError):
        module_genus_compare(WModuleLattice(IntegerLattice.full(2), a),
                             WModuleLattice(IntegerLattice.full(2), b), [2], 1)
    with pytest.raises(PreconditionError):
        module_genus_compare(WModuleLattice(IntegerLattice.full(2), a),
                             WModuleLattice(IntegerLattice.full(2), a), [], 1)


def test_formula_on_quotients(groups):
    q3 = make_quotient(groups["A~1"], 3)
    sols = eval_formula_on_quotient(q3, "A y. [x, y^2] = 1")
    assert sols == [i for i in range(q3.order) if q3.is_translation_image(i)]
    assert sols == [x for x in range(6) if naive_formula_check_commutes_with_squares(q3.table, x)]
    assert eval_formula_on_quotient(q3, "x = 1") == [q3.identity]
    q2 = make_quotient(groups["A~1"], 2)
    assert eval_formula_on_quotient(q2, "A y. [x, y] = 1") == [0, 1, 2, 3]
    with pytest.raises(PreconditionError):
        eval_formula_on_quotient(q2, "x = y")


def test_fingerprint_cap(groups):
    with pytest.raises(CapExceeded):
        fingerprint(cyclic(10), cap=5)


def test_conjugacy_classes_dihedral():
    labels = conjugacy_classes(TableGroup(dihedral_table(4)))
    assert sorted(np.bincount(labels).tolist()) == [1, 1, 2, 2, 2]


@settings(max_examples=15)
@given(st.sampled_from([(4,), (2, 2), (8,), (2, 4), (2, 2, 2), (3, 3), (9,)]), st.integers(0, 2**32 - 1))
def test_fingerprint_invariant_under_relabeling(moduli, seed):
    G = AbelianGroup(moduli)
    H = G.relabeled(np.random.default_rng(seed).permutation(G.order))
    assert fingerprint(G) == fingerprint(H)
    assert iso_bruteforce(G, H)
