import json

import numpy as np
import pytest

from descent_quiver import quiver as Q
from descent_quiver.lattice import integer_partitions, partition_label
from descent_quiver.quiver import PathElement, QuiverGraph
from figures import A7_ARROWS, A7_VERTICES, B6_ARROWS, B6_VERTICES

CASES = [("A", 3), ("A", 4), ("B", 2), ("B", 3)]


# -- closed forms ---------------------------------------------------------------


def test_closed_form_a7_matches_drawing():
    g = Q.closed_form_quiver_A(7)
    assert g == QuiverGraph(tuple(A7_VERTICES), A7_ARROWS)
    assert g.out_neighbors("3211") == {"511", "421", "331"}
    assert g.in_neighbors("7") == {"61", "52", "43"}
    assert not g.out_neighbors("7")
    assert not g.out_neighbors("1111111") and not g.in_neighbors("1111111")


def test_closed_form_b6_matches_drawing():
    g = Q.closed_form_quiver_B(6)
    assert len(g.vertices) == 30
    assert g == QuiverGraph(tuple(B6_VERTICES), B6_ARROWS)
    assert g.multiplicity("321", "6") == 2
    assert g.in_neighbors("0") == {"51", "42", "41", "32", "31", "21"}
    assert g.multiplicity("33", "0") == g.multiplicity("22", "0") == g.multiplicity("11", "0") == 0


@pytest.mark.parametrize("n", range(1, 10))
def test_closed_form_a_rule(n):
    g = Q.closed_form_quiver_A(n)
    assert sorted(g.vertices) == sorted(partition_label(p) for p in integer_partitions(n))
    assert all(m == 1 for m in g.arrows.values())
    assert not g.out_neighbors(partition_label((1,) * n))
    assert g.is_acyclic()


@pytest.mark.parametrize("n", range(1, 9))
def test_closed_form_b_shape(n):
    g = Q.closed_form_quiver_B(n)
    assert all(m in (1, 2) for m in g.arrows.values())
    assert g.is_acyclic()
    # deleting two parts or adding three always changes the part count by two
    assert all(g.ranks[a] - g.ranks[b] == 2 for a, b in g.arrows)


def test_closed_form_validation():
    with pytest.raises(ValueError):
        Q.closed_form_quiver_A(0)
    with pytest.raises(ValueError):
        Q.closed_form_quiver("D", 4)


def test_graph_serialization():
    g = Q.closed_form_quiver_B(6)
    assert QuiverGraph.from_json(g.to_json()) == g
    data = json.loads(g.to_json())
    assert set(data) == {"vertices", "arrows"}
    assert {"from": "321", "to": "6", "mult": 2} in data["arrows"]
    assert g.to_dot().count('"321" -> "6";') == 2
    r = g.reversed()
    assert r.multiplicity("6", "321") == 2 and r.reversed() == g
    with pytest.raises(ValueError):
        QuiverGraph(("a",), {("a", "b"): 1})


def test_cycle_detection():
    assert not QuiverGraph(("a", "b"), {("a", "b"): 1, ("b", "a"): 1}).is_acyclic()


# -- orientation and incidence -------------------------------------------------------


@pytest.mark.parametrize("t,n", CASES)
def test_orientation_numbers(ws, t, n):
    w = ws(t, n)
    O, W, lat = w.orientation, w.system, w.lattice
    assert np.all(O.sigma[W.identity] == 1)
    assert Q.cocycle_law(O)
    for h in w.arrangement.hyperplanes:
        r = W.reflection(h.normal)
        H = lat.flat_of_zeros(frozenset([h.index]))
        assert O.sigma[r, H] == 1 and O.sigma[r, lat.top] == -1
    if W.central_element is not None:
        for f in lat.flats:
            assert O.sigma[W.central_element, f.index] == (-1) ** f.dim


@pytest.mark.parametrize("t,n", CASES)
def test_incidence_identities(ws, t, n):
    from descent_quiver.verify import check_incidence

    assert check_incidence(ws(t, n)) == {"ok": True, "opposite": True, "transport": True, "diamond": True}


def test_incidence_requires_facet(ws):
    w = ws("A", 3)
    with pytest.raises(ValueError):
        w.orientation.incidence_number(w.arrangement.chambers[0], w.arrangement.identity_face)


# -- phi ------------------------------------------------------------------------------


@pytest.mark.parametrize("system", ["first", "second"])
@pytest.mark.parametrize("t,n", CASES)
def test_phi_suite(ws, t, n, system):
    w = ws(t, n)
    phi = w.phi(system)
    assert Q.phi_well_defined(phi)
    assert Q.phi_idempotent_sandwich(phi)
    kernel = Q.verify_kernel_relations(phi)
    assert kernel["sums_vanish"] and kernel["image_rank_is_mobius"]
    assert Q.phi_equivariant(phi)
    assert Q.phi_surjective_rank(phi) == w.kF.dim
    for X in range(len(w.lattice)):
        assert phi((X,)) == phi.system[X]


def test_phi_a3_single_interval(ws):
    w = ws("A", 3)
    phi, lat = w.phi(), w.lattice
    mids = [z for z in range(len(lat)) if (lat.bottom, z) in lat.covers]
    assert len(mids) == 3
    total = w.kF.zero()
    for z in mids:
        total = total + phi((lat.top, z, lat.bottom))
    assert total.is_zero() and Q.verify_kernel_relations(phi)["intervals"] == 1


def test_phi_b2_diamond(ws):
    w = ws("B", 2)
    phi, lat = w.phi(), w.lattice
    mids = [z for z in range(len(lat)) if (lat.bottom, z) in lat.covers]
    assert len(mids) == 4
    P = PathElement()
    for z in mids:
        P = P + PathElement.path((lat.top, z, lat.bottom))
    assert phi(P).is_zero()


def test_phi_rejects_non_arrow(ws):
    w = ws("A", 3)
    phi, lat = w.phi(), w.lattice
    with pytest.raises(ValueError):
        phi.arrow_with(lat.top, lat.bottom, w.arrangement.identity_face)


# -- norm sums ----------------------------------------------------------------------------


@pytest.mark.parametrize("t,n", CASES)
def test_norm_sums(ws, t, n):
    from descent_quiver.verify import check_path_norms

    assert check_path_norms(ws(t, n))["ok"]


def test_path_element_algebra():
    a = PathElement.path((3, 1))
    b = PathElement.path((1, 0))
    assert (a - a).is_zero()
    assert (a + b).scale(2).terms == {(3, 1): 2, (1, 0): 2}
    assert (b * a).terms == {(3, 1, 0): 1}


# -- numeric quivers --------------------------------------------------------------------------


@pytest.mark.parametrize("system", ["first", "second"])
@pytest.mark.parametrize("t,n", CASES)
def test_kF_quiver_is_hasse_diagram(ws, t, n, system):
    w = ws(t, n)
    counts = Q.quiver_of_kF_numeric(w.kF, system)
    assert counts == {(x, y): 1 for y, x in w.lattice.covers}


@pytest.mark.parametrize("t,n", CASES + [("A", 5)])
def test_invariant_quiver_matches_closed_form(ws, t, n):
    w = ws(t, n)
    g = Q.quiver_of_invariant_numeric(w.invariant)
    assert g == Q.closed_form_quiver(t, n)
    assert all(Q.structural_checks(g, w.orbit_poset, t).values())


def test_invariant_quiver_a4_example(ws):
    g = Q.quiver_of_invariant_numeric(ws("A", 4).invariant)
    assert g.multiplicity("211", "31") == 1
    assert g.multiplicity("1111", "211") == 0


@pytest.mark.parametrize("t,n", CASES)
def test_no_arrow_condition(ws, t, n):
    w = ws(t, n)
    g = Q.quiver_of_invariant_numeric(w.invariant)
    cond = Q.no_arrow_condition(w.orientation, w.orbit_poset)
    assert any(cond.values())
    for (a, b), reversed_all in cond.items():
        if reversed_all:
            assert g.multiplicity(a, b) == 0


def test_expansion_lemma_b3(ws):
    O = ws("B", 3).orientation
    inst = Q.expansion_lemma_instances(O)
    assert inst
    assert all(Q.check_expansion_lemma(O, p) for p in inst)


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 2)])
def test_loewy_length_type_b(ws, n, expected):
    inv = ws("B", n).invariant
    assert inv.loewy_length() == expected <= Q.loewy_bound("B", n)
