import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    deleted_cells,
    graph_facets,
    graph_vertices,
    join_top_faces,
    rank2,
    symmetric_cycle_dims,
)
from z2embed.complexes import (
    DISJOINT_CYCLE_PAIR,
    K5,
    K33,
    Graph,
    JoinComplex,
    Octahedron,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    disjoint_union,
    subdivide,
    wheel_graph,
)
from z2embed.delprod import (
    DecompositionError,
    SymCycle,
    TensorElement,
    cycle_space_dims,
    deleted_product,
    deleted_product_cells,
    economic_deleted_product,
    generator_decomposition,
    graph_symmetric_decomposition,
    graph_torus,
    is_symmetric_cycle,
    ker_im_check,
    random_symmetric_cycle,
    symmetrized_torus,
    tensor_inverse,
    tensor_iso,
    tensor_swap_matrix,
    tilde3_tensor,
    triple_decomposition_identity,
    triple_deleted_product,
)
from z2embed.gf2 import Gf2Vector


def _sizes(max_n=5, max_len=3):
    return [s for k in range(2, max_len + 1) for s in itertools.combinations_with_replacement(
        range(3, max_n + 1), k)]


# -- cells and dimensions --------------------------------------------------


@pytest.mark.parametrize("sizes", [(3, 3), (3, 4), (4, 4), (3, 3, 3)])
def test_cells_match_exhaustive_scan(sizes):
    j = JoinComplex(sizes)
    faces = join_top_faces(sizes)
    expected = [(faces[i], faces[k]) for i, k in deleted_cells(faces)]
    assert deleted_product_cells(j) == expected
    assert all(s != t for s, t in expected)
    assert len(expected) == np.prod(sizes) * np.prod([n - 1 for n in sizes])


def test_k33_cell_count():
    assert len(deleted_product_cells(JoinComplex((3, 3)))) == 36


@pytest.mark.parametrize("n,k,full", [(3, 1, 1), (4, 1, 25), (5, 1, 121),
                                      (3, 2, 1), (4, 2, 125), (5, 2, 1331)])
def test_full_dimension_formula(n, k, full):
    assert cycle_space_dims(JoinComplex((n,) * (k + 1)))[0] == full == (n * n - 3 * n + 1) ** (k + 1)


@pytest.mark.parametrize("sizes", [(3, 3), (3, 4), (4, 4), (3, 5), (3, 3, 3), (3, 3, 4)])
def test_dimensions_match_dense_oracle(sizes):
    assert cycle_space_dims(JoinComplex(sizes)) == symmetric_cycle_dims(join_top_faces(sizes))


@pytest.mark.parametrize("sizes", _sizes(5, 2) + [(3, 4, 5), (4, 4, 4)])
def test_mixed_full_dimension_is_product(sizes):
    expected = int(np.prod([n * n - 3 * n + 1 for n in sizes]))
    assert cycle_space_dims(JoinComplex(sizes))[0] == expected


def test_symmetric_dimension_example():
    assert cycle_space_dims(JoinComplex((4, 4))) == (25, 13)


# -- symmetric cycles -----------------------------------------------------


def test_is_symmetric_cycle_examples():
    j = JoinComplex((4, 4))
    dp = deleted_product(j)
    assert is_symmetric_cycle(SymCycle(dp, 0))
    c, s = dp.orbits[0]
    assert not is_symmetric_cycle(SymCycle(dp, (1 << c) | (1 << s)))
    assert not is_symmetric_cycle(SymCycle(dp, 1 << c))
    t = symmetrized_torus(j, Octahedron(((1, 2), (1, 2))), Octahedron(((3, 4), (3, 4))))
    assert is_symmetric_cycle(t)
    assert len(t) == 32


def test_torus_sizes_and_errors():
    j = JoinComplex((4, 4, 4))
    p = Octahedron(((1, 2), (1, 2), (1, 2)))
    q = Octahedron(((3, 4), (3, 4), (3, 4)))
    assert len(symmetrized_torus(j, p, q)) == 128
    with pytest.raises(DecompositionError):
        symmetrized_torus(j, p, Octahedron(((1, 3), (3, 4), (3, 4))))


@pytest.mark.parametrize("sizes", [(3, 3), (4, 4), (3, 3, 3), (3, 4, 4)])
def test_triple_deleted_products(sizes):
    j = JoinComplex(sizes)
    for x in j.triple_subcomplexes[:3]:
        c = triple_deleted_product(j, x)
        assert is_symmetric_cycle(c)
        assert len(c) == 9 * 4 if j.k == 1 else len(c) == 27 * 8
        for e in x.faces():
            assert triple_decomposition_identity(j, x, e)


def test_random_symmetric_cycles_are_symmetric_cycles():
    j = JoinComplex((4, 4))
    dp = deleted_product(j)
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert is_symmetric_cycle(random_symmetric_cycle(dp, rng))


# -- tensor coordinates ---------------------------------------------------


@pytest.mark.parametrize("sizes", [(3, 3), (4, 4), (3, 3, 3), (3, 4)])
def test_triple_maps_to_tilde3_tensor(sizes):
    j = JoinComplex(sizes)
    assert tensor_iso(triple_deleted_product(j, j.standard_triple())) == tilde3_tensor(sizes)


@pytest.mark.parametrize("sizes", [(3, 3), (4, 4), (4, 5), (3, 3, 3), (4, 4, 3)])
def test_tensor_round_trip(sizes):
    j = JoinComplex(sizes)
    dp = deleted_product(j)
    rng = np.random.default_rng(len(sizes) * 10 + sum(sizes))
    basis = dp.symmetric_cycle_basis()
    for _ in range(100):
        c = random_symmetric_cycle(dp, rng, basis)
        assert tensor_inverse(j, tensor_iso(c)).bits == c.bits


@pytest.mark.parametrize("sizes", [(3, 3), (4, 4), (3, 4), (3, 3, 3)])
def test_swap_equivariance_on_basis(sizes):
    j = JoinComplex(sizes)
    dp = deleted_product(j)
    t = tensor_swap_matrix(sizes)
    for b in range(t.cols):
        v = Gf2Vector(1 << b, t.cols)
        c = tensor_inverse(j, TensorElement(tuple(sizes), v.bits))
        image = tensor_inverse(j, TensorElement(tuple(sizes), t.apply(v).bits))
        assert image.bits == dp.swap_bits(c.bits)


def test_torus_maps_to_tensor_plus_swap():
    j = JoinComplex((4, 4))
    p = Octahedron(((1, 2), (1, 2)))
    q = Octahedron(((3, 4), (3, 4)))
    x = tensor_iso(symmetrized_torus(j, p, q)).bits
    t = tensor_swap_matrix((4, 4))
    assert t.apply(Gf2Vector(x, t.cols)).bits == x


@pytest.mark.parametrize("sizes", _sizes(5, 3))
def test_ker_im_decomposition(sizes):
    rep = ker_im_check(sizes)
    assert rep.ker_dim == rep.im_dim + 1
    assert not rep.tilde3_in_im


def test_ker_im_examples():
    rep = ker_im_check((3,))
    assert (rep.ker_dim, rep.im_dim) == (1, 0)
    rep = ker_im_check((4, 4))
    assert (rep.ker_dim, rep.im_dim) == (13, 12)
    rep = ker_im_check((3, 4))
    assert (rep.ker_dim, rep.im_dim) == (3, 2)


# -- generator decomposition ----------------------------------------------


def test_generator_decomposition_examples():
    j = JoinComplex((4, 4))
    x = j.triple_subcomplexes[5]
    dec = generator_decomposition(triple_deleted_product(j, x))
    assert dec.total(j).bits == triple_deleted_product(j, x).bits
    p = Octahedron(((1, 2), (1, 2)))
    q = Octahedron(((3, 4), (3, 4)))
    dec = generator_decomposition(symmetrized_torus(j, p, q))
    assert dec.total(j).bits == symmetrized_torus(j, p, q).bits
    dp = deleted_product(j)
    c, s = dp.orbits[0]
    with pytest.raises(DecompositionError):
        generator_decomposition(SymCycle(dp, (1 << c) | (1 << s)))


def test_triple_is_its_own_decomposition_in_k33():
    j = JoinComplex((3, 3))
    dec = generator_decomposition(triple_deleted_product(j, j.standard_triple()))
    assert dec.tori == [] and dec.triples == [j.standard_triple()]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 3), (4, 4), (3, 4), (4, 5), (3, 3, 3)]), st.integers(0, 2**32 - 1))
def test_generator_decomposition_reconstructs(sizes, seed):
    j = JoinComplex(sizes)
    c = random_symmetric_cycle(deleted_product(j), np.random.default_rng(seed))
    dec = generator_decomposition(c)
    assert dec.total(j).bits == c.bits
    for p, q in dec.tori:
        assert is_symmetric_cycle(symmetrized_torus(j, p, q))


# -- graphs ---------------------------------------------------------------


def _graph_dims(g):
    faces = list(g.edges)
    return symmetric_cycle_dims(faces, graph_vertices, graph_facets)


@pytest.mark.parametrize("g", [complete_graph(5), complete_bipartite(3, 3), wheel_graph(6),
                               complete_graph(6), disjoint_union(cycle_graph(3), cycle_graph(4))],
                         ids=["K5", "K33", "W6", "K6", "C3+C4"])
def test_graph_dimensions_match_dense_oracle(g):
    dp = deleted_product(g)
    assert (dp.full_cycle_dimension(), dp.symmetric_cycle_dimension()) == _graph_dims(g)


def test_k5_has_one_symmetric_cycle_the_economic_product():
    g = complete_graph(5)
    dp = deleted_product(g)
    basis = dp.symmetric_cycle_basis()
    assert len(basis) == 1
    econ = economic_deleted_product(g)
    assert econ.bits == basis[0]
    pieces = graph_symmetric_decomposition(econ)
    assert [(p.kind, p.shape) for p in pieces] == [("EconomicDP", K5)]


def test_economic_product_of_unsubdivided_k33_is_the_triple_product():
    g = complete_bipartite(3, 3)
    j = JoinComplex((3, 3))
    e = economic_deleted_product(g)
    t = triple_deleted_product(j, j.standard_triple())
    as_pairs = {frozenset(map(frozenset, p)) for p in e.dp.face_pairs(e.bits)}
    # relabel the join face ((0, a), (1, b)) as the edge (a - 1, b + 2)
    t_pairs = {frozenset(frozenset((s[0][1] - 1, s[1][1] + 2)) for s in pair)
               for pair in t.dp.face_pairs(t.bits)}
    assert as_pairs == t_pairs


def test_economic_product_of_subdivided_k5_counts():
    g = subdivide(complete_graph(5), (0, 1))
    e = economic_deleted_product(g)
    assert is_symmetric_cycle(e)
    # the branch 0-1 has two edges and is disjoint from the 3 branches of K5 - {0,1}
    assert len(e) == 30 + 2 * 3 * 2 - 3 * 2
    with pytest.raises(DecompositionError):
        economic_deleted_product(wheel_graph(5))


def test_disjoint_triangles_give_one_torus():
    g = disjoint_union(cycle_graph(3), cycle_graph(3))
    dp = deleted_product(g)
    (c,) = dp.symmetric_cycle_basis()
    pieces = graph_symmetric_decomposition(SymCycle(dp, c))
    assert [(p.kind, p.shape) for p in pieces] == [("SymTorus", DISJOINT_CYCLE_PAIR)]


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_wheel_symmetric_space_is_zero(n):
    assert deleted_product(wheel_graph(n)).symmetric_cycle_dimension() == 0


def test_trees_have_no_symmetric_cycles():
    tree = Graph.from_edges([(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 6)])
    assert deleted_product(tree).symmetric_cycle_dimension() == 0


def test_two_disjoint_k5_decompose():
    g = disjoint_union(complete_graph(5), complete_graph(5))
    dp = deleted_product(g)
    for b in dp.symmetric_cycle_basis():
        c = SymCycle(dp, b)
        pieces = graph_symmetric_decomposition(c)
        total = 0
        for p in pieces:
            total ^= p.cycle.bits
            assert is_symmetric_cycle(p.cycle)
        assert total == b


def test_minimal_piece_with_two_overlapping_tori_is_resolved():
    """A swap-minimal cycle whose support is planar and not a cycle pair."""
    g = Graph.from_edges([(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5),
                          (2, 5), (3, 4)])
    t1 = graph_torus(g, g.walk_chain([0, 2, 5]), g.walk_chain([1, 3, 4]))
    t2 = graph_torus(g, g.walk_chain([1, 2, 5]), g.walk_chain([0, 3, 4]))
    c = t1 + t2
    dp = c.dp
    # minimality oracle: the boundary restricted to the orbits of c has a 1-dimensional kernel
    orbit_of = {}
    for o, (a, b) in enumerate(dp.orbits):
        orbit_of[a] = orbit_of[b] = o
    orbits = sorted({orbit_of[ci] for ci in range(dp.ncells) if c.bits >> ci & 1})
    bounds = [dp.boundary(dp.orbit_bits(1 << o)) for o in orbits]
    height = max(b.bit_length() for b in bounds)
    dense = [[(b >> r) & 1 for b in bounds] for r in range(height)]
    assert len(orbits) - rank2(dense) == 1
    pieces = graph_symmetric_decomposition(c)
    total = 0
    for p in pieces:
        total ^= p.cycle.bits
    assert total == c.bits
    assert {p.kind for p in pieces} == {"SymTorus"}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["K5", "K33", "K6", "K5+C3", "K33sub", "K3,4"]), st.integers(0, 2**32 - 1))
def test_graph_decomposition_sums_to_input(name, seed):
    g = {"K5": complete_graph(5), "K33": complete_bipartite(3, 3), "K6": complete_graph(6),
         "K5+C3": disjoint_union(complete_graph(5), cycle_graph(3)),
         "K33sub": subdivide(complete_bipartite(3, 3), (0, 3), 2),
         "K3,4": complete_bipartite(3, 4)}[name]
    dp = deleted_product(g)
    c = random_symmetric_cycle(dp, np.random.default_rng(seed))
    pieces = graph_symmetric_decomposition(c)
    total = 0
    for p in pieces:
        total ^= p.cycle.bits
        assert p.kind in ("SymTorus", "EconomicDP")
        if p.kind == "EconomicDP":
            assert p.shape in (K5, K33)
    assert total == c.bits
