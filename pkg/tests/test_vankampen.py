import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from z2embed.complexes import (
    JoinComplex,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    disjoint_union,
)
from z2embed.delprod import (
    SymCycle,
    all_tori,
    deleted_product,
    economic_deleted_product,
    graph_torus,
    random_symmetric_cycle,
    symmetrized_torus,
    triple_deleted_product,
)
from z2embed.vankampen import (
    DegenerateDrawing,
    Drawing,
    cocycle_for_seed,
    intersection_cocycle,
    random_generic_drawing,
    segment_parity,
    van_kampen_number,
)


def _float_crossing(sigma, tau):
    """Do two simplices with ``len(sigma) + len(tau) == dim + 2`` cross? (floating point)."""
    sigma = np.array(sigma, dtype=float)
    tau = np.array(tau, dtype=float)
    dim = sigma.shape[1]
    rows = np.vstack([np.hstack([sigma.T, -tau.T]),
                      np.hstack([np.ones(len(sigma)), np.zeros(len(tau))]),
                      np.hstack([np.zeros(len(sigma)), np.ones(len(tau))])])
    rhs = np.zeros(dim + 2)
    rhs[-2:] = 1
    sol = np.linalg.solve(rows, rhs)
    return int(bool((sol > 1e-9).all()))


def _well_conditioned(sigma, tau, margin=1e-6):
    sigma = np.array(sigma, dtype=float)
    tau = np.array(tau, dtype=float)
    rows = np.vstack([np.hstack([sigma.T, -tau.T]),
                      np.hstack([np.ones(len(sigma)), np.zeros(len(tau))]),
                      np.hstack([np.zeros(len(sigma)), np.ones(len(tau))])])
    if abs(np.linalg.det(rows)) < 1e-6:
        return False
    rhs = np.zeros(len(rows))
    rhs[-2:] = 1
    return bool((np.abs(np.linalg.solve(rows, rhs)) > margin).all())


def test_segment_examples():
    assert segment_parity([(0, 0), (2, 2)], [(0, 2), (2, 0)], 2) == 1
    assert segment_parity([(0, 0), (2, 0)], [(0, 1), (2, 1)], 2) == 0
    assert segment_parity([(0, 0), (1, 0)], [(3, 1), (3, 2)], 2) == 0
    with pytest.raises(DegenerateDrawing):
        segment_parity([(0, 0), (2, 0)], [(1, 0), (1, 5)], 2)
    with pytest.raises(DegenerateDrawing):
        segment_parity([(0, 0), (2, 0)], [(1, 0), (3, 0)], 2)


def test_triangles_in_r4():
    sigma = [(-1, -1, 0, 0), (2, -1, 0, 0), (-1, 2, 0, 0)]
    tau = [(0, 0, -1, -1), (0, 0, 2, -1), (0, 0, -1, 2)]
    assert segment_parity(sigma, tau, 4) == 1
    shifted = [(x, y, z, w + 10) for x, y, z, w in tau]
    assert segment_parity(sigma, shifted, 4) == 0


coords = st.integers(-50, 50)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=4, max_size=4))
def test_segment_parity_matches_float_oracle(pts):
    sigma, tau = pts[:2], pts[2:]
    assume(_well_conditioned(sigma, tau))
    assert segment_parity(sigma, tau, 2) == _float_crossing(sigma, tau)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords, coords), min_size=6, max_size=6))
def test_triangle_parity_matches_float_oracle(pts):
    sigma, tau = pts[:3], pts[3:]
    assume(_well_conditioned(sigma, tau))
    assert segment_parity(sigma, tau, 4) == _float_crossing(sigma, tau)


def test_drawing_validates_dimension():
    with pytest.raises(ValueError):
        Drawing(2, {0: (1, 2, 3)})


def test_drawings_are_deterministic():
    g = complete_graph(5)
    assert random_generic_drawing(g, 7) == random_generic_drawing(g, 7)
    assert random_generic_drawing(g, 7) != random_generic_drawing(g, 8)


def test_planar_drawing_of_k4_has_zero_cocycle():
    g = complete_graph(4)
    d = Drawing(2, {0: (0, 0), 1: (12, 0), 2: (0, 12), 3: (3, 3)})
    assert set(intersection_cocycle(d, deleted_product(g)).values()) == {0}


def test_convex_drawing_of_k5_crosses_five_times():
    g = complete_graph(5)
    pentagon = {0: (0, 10), 1: (10, 3), 2: (6, -8), 3: (-6, -8), 4: (-10, 3)}
    cocycle = intersection_cocycle(Drawing(2, pentagon), deleted_product(g))
    assert sum(cocycle.values()) == 5
    assert van_kampen_number(economic_deleted_product(g), cocycle) == 1


SEEDS = range(6)


@pytest.mark.parametrize("g", [complete_graph(5), complete_bipartite(3, 3)], ids=["K5", "K33"])
def test_kuratowski_economic_dp_is_one(g):
    c = economic_deleted_product(g)
    assert {van_kampen_number(c, cocycle_for_seed(g, s)) for s in SEEDS} == {1}


@pytest.mark.parametrize("sizes", [(3, 3), (3, 3, 3)])
def test_triple_dp_is_one(sizes):
    j = JoinComplex(sizes)
    x = j.triple_subcomplexes[0]
    c = triple_deleted_product(j, x)
    for s in SEEDS[:3]:
        assert van_kampen_number(c, cocycle_for_seed(j, s)) == 1


def test_tori_are_zero():
    j = JoinComplex((4, 4))
    tori = all_tori(j)
    for s in SEEDS[:3]:
        cc = cocycle_for_seed(j, s)
        assert {van_kampen_number(symmetrized_torus(j, p, q), cc) for p, q in tori} == {0}
    g = disjoint_union(cycle_graph(3), cycle_graph(3))
    t = graph_torus(g, g.walk_chain([0, 1, 2]), g.walk_chain([3, 4, 5]))
    assert {van_kampen_number(t, cocycle_for_seed(g, s)) for s in SEEDS} == {0}


def test_drawing_and_cocycle_agree():
    j = JoinComplex((3, 3))
    d = random_generic_drawing(j, 3)
    c = triple_deleted_product(j, j.triple_subcomplexes[0])
    assert van_kampen_number(c, d) == van_kampen_number(c, cocycle_for_seed(j, 3))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["K33", "K5", "join33", "join44"]), st.integers(0, 2**31))
def test_symmetric_cycle_number_is_drawing_independent(which, seed):
    cx = {"K33": complete_bipartite(3, 3), "K5": complete_graph(5),
          "join33": JoinComplex((3, 3)), "join44": JoinComplex((4, 4))}[which]
    c = random_symmetric_cycle(deleted_product(cx), np.random.default_rng(seed))
    assert len({van_kampen_number(c, cocycle_for_seed(cx, s)) for s in range(3)}) == 1


def test_non_cycle_orbit_depends_on_drawing():
    """A single swap orbit is symmetric but not a cycle, so its parity varies with the drawing."""
    g = complete_graph(5)
    dp = deleted_product(g)
    vals = set()
    for s, c in itertools.product(range(8), range(0, len(dp.cells), 2)):
        vals.add(van_kampen_number(SymCycle(dp, (1 << c) | (1 << dp.swap[c])), cocycle_for_seed(g, s)))
    assert vals == {0, 1}
