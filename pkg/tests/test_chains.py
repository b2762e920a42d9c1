import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import rank2
from z2embed import chains
from z2embed.chains import (
    Chain,
    ChainError,
    RookSet,
    boundary_matrix,
    chordless_decomposition,
    cycle_space_basis,
    face_to_rook,
    four_cycle_decomposition,
    h1_basis_tilde,
    is_cycle,
    parallelepiped,
    relation_reduction_k1,
    rook_decomposition,
    rook_to_face,
    tilde_basis_edges,
    tilde_coordinates,
    tilde_tree_edges,
)
from z2embed.complexes import JoinComplex, Octahedron, bits_of, complete_graph, deleted_graph

SIZES = [s for k in (1, 2) for s in itertools.product(range(3, 6), repeat=k + 1)]


def _sum_rooks(sizes, octs):
    pts = set()
    for o in octs:
        pts ^= set(o.faces())
    return RookSet(tuple(sizes), frozenset(pts))


def _random_rook_cycle(sizes, rng):
    """Random sum of octahedra: a rook cycle generated without the basis."""
    pts = set()
    for _ in range(rng.integers(0, 8)):
        pairs = tuple(tuple(sorted(rng.choice(np.arange(1, n + 1), 2, replace=False).tolist()))
                      for n in sizes)
        pts ^= set(Octahedron(pairs).faces())
    return RookSet(tuple(sizes), frozenset(pts))


def test_boundary_examples():
    j = JoinComplex((3, 3))
    assert not is_cycle(Chain.from_faces(j, [(1, 1)]))
    assert is_cycle(Chain.of_octahedron(j, Octahedron(((1, 2), (1, 2)))))
    assert is_cycle(Chain(j, 1, 0))
    with pytest.raises(ChainError):
        boundary_matrix(j, 2)


@pytest.mark.parametrize("sizes", SIZES)
def test_octahedra_are_cycles_and_basis_size_is_nullity(sizes):
    j = JoinComplex(sizes)
    for o in j.octahedra[:: max(1, len(j.octahedra) // 20)]:
        assert is_cycle(Chain.of_octahedron(j, o))
    d = boundary_matrix(j, j.k)
    nullity = len(j.top_faces) - rank2(d.to_lists())
    assert len(cycle_space_basis(j)) == nullity


@pytest.mark.parametrize("sizes,dim", [((3, 3), 4), ((3, 3, 3), 8), ((4, 3), 6)])
def test_basis_sizes(sizes, dim):
    assert len(cycle_space_basis(JoinComplex(sizes))) == dim


def test_duality_examples():
    j = JoinComplex((3, 3))
    o = Octahedron(((1, 2), (2, 3)))
    assert face_to_rook(Chain.of_octahedron(j, o)).points == frozenset(
        itertools.product((1, 2), (2, 3)))
    assert face_to_rook(Chain(j, 1, 0)).points == frozenset()
    square = RookSet((3, 3), frozenset({(1, 1), (1, 2), (2, 1), (2, 2)}))
    assert rook_to_face(square) == Chain.from_faces(j, [(1, 1), (1, 2), (2, 1), (2, 2)])


def test_rook_decomposition_examples():
    sizes = (3, 3)
    single = _sum_rooks(sizes, [parallelepiped(sizes, (2, 1))])
    assert rook_decomposition(single) == [parallelepiped(sizes, (2, 1))]
    square = RookSet(sizes, frozenset({(1, 1), (1, 2), (2, 1), (2, 2)}))
    parts = rook_decomposition(square)
    assert parts == [parallelepiped(sizes, a) for a in [(1, 1), (1, 2), (2, 1), (2, 2)]]
    assert _sum_rooks(sizes, parts) == square
    assert rook_decomposition(RookSet(sizes, frozenset())) == []
    with pytest.raises(ChainError):
        rook_decomposition(RookSet(sizes, frozenset({(1, 1)})))


@pytest.mark.parametrize("sizes", [(3, 3), (4, 4), (3, 3, 3), (4, 3)])
def test_rook_decomposition_round_trip(sizes):
    rng = np.random.default_rng(sum(sizes))
    for _ in range(200):
        c = _random_rook_cycle(sizes, rng)
        assert c.is_rook_cycle()
        assert _sum_rooks(sizes, rook_decomposition(c)) == c


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(3, 3), (4, 3), (3, 3, 3)]), st.sets(st.integers(0, 80)))
def test_cycle_iff_rook_cycle(sizes, picks):
    j = JoinComplex(sizes)
    faces = j.top_faces
    c = Chain.from_faces(j, [faces[p % len(faces)] for p in picks])
    assert is_cycle(c) == face_to_rook(c).is_rook_cycle()


def test_relation_reduction_examples():
    j = JoinComplex((4, 4))
    alpha = [Octahedron(((1, 2), (1, 2))), Octahedron(((1, 2), (2, 3))), Octahedron(((1, 2), (1, 3)))]
    rels = relation_reduction_k1(j, alpha)
    acc = set()
    for r in rels:
        acc ^= set(r.octahedra())
    assert acc == set(alpha)
    sq = Octahedron(((1, 2), (1, 2)))
    assert relation_reduction_k1(j, [sq, sq]) == []
    with pytest.raises(ChainError):
        relation_reduction_k1(j, [sq])


def test_relation_reduction_random_zero_sums():
    j = JoinComplex((4, 4))
    rng = np.random.default_rng(7)
    for _ in range(30):
        # any octahedron set plus its basis expansion sums to zero
        octs = [j.octahedra[i] for i in rng.choice(len(j.octahedra), 4, replace=False)]
        combo = list(octs)
        for o in octs:
            combo += rook_decomposition(face_to_rook(Chain.of_octahedron(j, o)))
        acc = set()
        for r in relation_reduction_k1(j, combo):
            acc ^= set(r.octahedra())
        expected = set()
        for o in combo:
            expected ^= {o}
        assert acc == expected


def test_h1_basis_tilde_examples():
    assert len(h1_basis_tilde(4)) == 5
    assert len(h1_basis_tilde(3)) == 1
    assert h1_basis_tilde(3)[0] == (1 << 6) - 1


@pytest.mark.parametrize("n", [4, 5, 6])
def test_h1_basis_tilde_structure(n):
    dg = deleted_graph(n)
    g = dg.graph
    basis = h1_basis_tilde(n)
    # cyclomatic number of the connected graph K~_n
    assert len(basis) == len(g.edges) - g.n + 1 == n * n - 3 * n + 1
    assert rank2([[c >> e & 1 for e in range(len(g.edges))] for c in basis]) == len(basis)
    tree = [dg.edge(i, j) for i, j in tilde_tree_edges(n)]
    t = nx.Graph([g.edges[e] for e in tree])
    assert nx.is_tree(t) and t.number_of_nodes() == 2 * n
    s_edges = [dg.edge(i, j) for i, j in tilde_basis_edges(n)]
    for c, e in zip(basis, s_edges):
        assert g.is_cycle(c)
        assert [x for x in s_edges if c >> x & 1] == [e]


@pytest.mark.parametrize("n", [4, 5])
def test_t_image_of_basis_cycle(n):
    dg = deleted_graph(n)
    for i, j in tilde_basis_edges(n):
        lhs = dg.t_chain(chains.tilde_basis_cycle(dg, i, j))
        # for (j, i) = (3, 2) the walk 1 2' 3 1' 3 2' reduces to zero
        rhs = chains.tilde_basis_cycle(dg, 2, 3) ^ chains.tilde_basis_cycle(dg, j, i)
        assert lhs == rhs


@pytest.mark.parametrize("n", [4, 5])
def test_tilde_coordinates_reconstruct(n):
    basis = h1_basis_tilde(n)
    rng = np.random.default_rng(n)
    for _ in range(50):
        c = 0
        coeffs = rng.integers(0, 2, len(basis))
        for b, x in zip(basis, coeffs):
            if x:
                c ^= b
        assert tilde_coordinates(n, c) == sum(int(x) << i for i, x in enumerate(coeffs))


def _has_chord(g, cyc):
    pos = {v: i for i, v in enumerate(cyc)}
    m = len(cyc)
    for u, v in g.edges:
        if u in pos and v in pos and abs(pos[u] - pos[v]) not in (1, m - 1):
            return True
    return False


def test_chordless_examples():
    g = complete_graph(4)
    tri = g.walk_chain([0, 1, 2])
    assert [sorted(c) for c in chordless_decomposition(g, tri)] == [[0, 1, 2]]
    square = chordless_decomposition(g, g.walk_chain([0, 1, 2, 3]))
    assert len(square) == 2 and all(len(c) == 3 for c in square)
    assert chordless_decomposition(g, 0) == []
    with pytest.raises(ChainError):
        chordless_decomposition(g, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 7), st.lists(st.lists(st.integers(0, 6), min_size=3, max_size=7), max_size=4))
def test_chordless_decomposition_sums_and_has_no_chords(n, walks):
    g = complete_graph(n)
    c = 0
    for w in walks:
        w = [x % n for x in w]
        if len(set(w)) == len(w):
            c ^= g.walk_chain(w)
    parts = chordless_decomposition(g, c)
    total = 0
    for p in parts:
        total ^= g.walk_chain(p)
        assert not _has_chord(g, p)
    assert total == c


def test_four_cycle_examples():
    dg = deleted_graph(4)
    sq = dg.walk("1", "2'", "3", "4'")
    assert [dg.graph.walk_chain(c) for c in four_cycle_decomposition(4, sq)] == [sq]
    hexagon = dg.walk("1", "2'", "3", "1'", "2", "3'")
    parts = four_cycle_decomposition(4, hexagon)
    expected = {dg.walk("1", "2'", "3", "4'"), dg.walk("2", "3'", "1", "4'"),
                dg.walk("3", "1'", "2", "4'")}
    assert {dg.graph.walk_chain(p) for p in parts} == expected
    dg5 = deleted_graph(5)
    a, b = dg5.walk("1", "2'", "3", "4'"), dg5.walk("2", "5'", "4", "1'")
    parts = four_cycle_decomposition(5, a ^ b)
    assert len(parts) == 2
    with pytest.raises(ChainError):
        four_cycle_decomposition(3, h1_basis_tilde(3)[0])


@pytest.mark.parametrize("n", [4, 5, 6])
def test_four_cycle_decomposition_sums(n):
    basis = h1_basis_tilde(n)
    g = deleted_graph(n).graph
    rng = np.random.default_rng(n)
    for _ in range(40):
        c = 0
        for b, x in zip(basis, rng.integers(0, 2, len(basis))):
            if x:
                c ^= b
        parts = four_cycle_decomposition(n, c)
        total = 0
        for p in parts:
            assert len(p) == 4
            total ^= g.walk_chain(p)
        assert total == c


def test_octahedron_coordinates_match_rook_decomposition():
    j = JoinComplex((4, 3))
    idx = chains.basis_index(j)
    for o in j.octahedra:
        coords = chains.octahedron_coordinates(j, o)
        parts = rook_decomposition(face_to_rook(Chain.of_octahedron(j, o)))
        assert sorted(bits_of(coords)) == sorted(idx[tuple(a for a, _ in p.pairs)] for p in parts)
