import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from z2embed import chains
from z2embed.complexes import JoinComplex, complete_bipartite, complete_graph
from z2embed.conditions import BForm, KnComplex, basis_size, bform_expand, is_independent, is_nontrivial
from z2embed.criterion import (
    CriterionError,
    HypothesisViolation,
    check_R_prime,
    face_map_from_hom,
    homology_basis_chains,
    hom_from_generators,
    symmetric_generators,
    torus_identity,
    y_squared,
)
from z2embed.delprod import (
    all_tori,
    deleted_product,
    is_symmetric_cycle,
    random_symmetric_cycle,
    triple_deleted_product,
)
from z2embed.gf2 import Gf2Matrix, Gf2Vector
from z2embed.gram import OmegaSpec, construct_Y


def _vec(bits, n):
    return Gf2Vector(bits, n)


def _random_psi(rng, beta, dim):
    return Gf2Matrix(beta, dim, [int(x) for x in rng.integers(0, 1 << dim, beta)])


# -- homomorphisms --------------------------------------------------------


def test_hom_from_independent_generators():
    omega = Gf2Matrix.identity(2)
    gens = [0b01, 0b10]
    vals = [_vec(0b01, 2), _vec(0b11, 2)]
    psi = hom_from_generators(gens, vals, omega, 2)
    assert psi.apply(_vec(0b01, 2)) == vals[0]
    assert psi.apply(_vec(0b10, 2)) == vals[1]


def test_hom_with_consistent_relation():
    omega = Gf2Matrix.hyperbolic(1)
    # the third generator is the sum of the first two and the values sum to zero
    gens = [0b01, 0b10, 0b11]
    vals = [_vec(0b01, 2), _vec(0b01, 2), _vec(0b00, 2)]
    psi = hom_from_generators(gens, vals, omega, 2)
    for g, v in zip(gens, vals):
        for h, w in zip(gens, vals):
            assert omega.bilinear(psi.apply(_vec(g, 2)), psi.apply(_vec(h, 2))) == omega.bilinear(v, w)


def test_hom_rejects_inconsistent_relation():
    omega = Gf2Matrix.identity(2)
    gens = [0b01, 0b10, 0b11]
    vals = [_vec(0b01, 2), _vec(0b10, 2), _vec(0b01, 2)]
    with pytest.raises(HypothesisViolation) as err:
        hom_from_generators(gens, vals, omega, 2)
    assert err.value.relation == [0, 1, 2]
    with pytest.raises(CriterionError):
        hom_from_generators([1], [], omega, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**31))
def test_hom_reproduces_pairings_of_images(dim, beta, seed):
    """Values that come from a true homomorphism always satisfy the hypothesis."""
    rng = np.random.default_rng(seed)
    omega = Gf2Matrix.identity(beta)
    phi = _random_psi(rng, beta, dim)
    gens = [int(x) for x in rng.integers(0, 1 << dim, dim + 2)]
    vals = [phi.apply(_vec(g, dim)) for g in gens]
    psi = hom_from_generators(gens, vals, omega, dim)
    for g, v in zip(gens, vals):
        for h, w in zip(gens, vals):
            assert omega.bilinear(psi.apply(_vec(g, dim)), psi.apply(_vec(h, dim))) == omega.bilinear(v, w)


# -- face maps ------------------------------------------------------------


@pytest.mark.parametrize("cx", [JoinComplex((3, 3)), JoinComplex((4, 3)), KnComplex(5),
                                complete_bipartite(3, 3)], ids=str)
def test_face_map_lifts_random_hom(cx):
    rng = np.random.default_rng(0)
    basis = homology_basis_chains(cx)
    for beta in (0, 1, 3):
        psi = _random_psi(rng, beta, len(basis))
        y = face_map_from_hom(psi, cx)
        for b, c in enumerate(basis):
            assert y.hat(c) == psi.col(b).bits


def test_face_map_of_zero_hom_is_zero():
    cx = JoinComplex((3, 3))
    y = face_map_from_hom(Gf2Matrix.zeros(2, 4), cx)
    assert set(y.values) == {0}
    with pytest.raises(CriterionError):
        face_map_from_hom(Gf2Matrix.zeros(2, 3), cx)


def test_lifts_differ_by_a_coboundary_and_agree_on_symmetric_cycles():
    """Two lifts of one hom differ on every cycle by zero, so y^2 agrees on symmetric cycles."""
    cx = JoinComplex((4, 4))
    rng = np.random.default_rng(5)
    basis = homology_basis_chains(cx)
    psi = _random_psi(rng, 3, len(basis))
    y = face_map_from_hom(psi, cx)
    # perturb by the coboundary of a vertex cochain: a face gets the sum over its vertices
    faces = cx.top_faces
    verts = sorted({(i, a) for f in faces for i, a in enumerate(f)})
    w = {v: int(rng.integers(0, 8)) for v in verts}
    shifted = []
    for f, val in zip(faces, y.values):
        for i, a in enumerate(f):
            val ^= w[(i, a)]
        shifted.append(val)
    y2 = type(y)(cx, y.beta, tuple(shifted))
    for c in basis:
        assert y.hat(c) == y2.hat(c)
    omega = Gf2Matrix.identity(3)
    dp = deleted_product(cx)
    for _ in range(20):
        c = random_symmetric_cycle(dp, rng)
        assert y_squared(c, y, omega) == y_squared(c, y2, omega)


# -- y^2 on generators ------------------------------------------------------


def test_torus_identity_on_all_tori():
    cx = JoinComplex((4, 4))
    rng = np.random.default_rng(2)
    psi = _random_psi(rng, 4, len(homology_basis_chains(cx)))
    y = face_map_from_hom(psi, cx)
    omega = Gf2Matrix.hyperbolic(2)
    dp = deleted_product(cx)
    idx = cx.top_index
    for p, q in all_tori(cx):
        pc = sum(1 << idx[f] for f in p.faces())
        qc = sum(1 << idx[f] for f in q.faces())
        lhs, rhs = torus_identity([(pc, qc)], y, omega, dp)
        assert lhs == rhs


def test_graph_torus_identity_on_disjoint_cycles():
    g = complete_graph(6)
    non_tree, basis = chains.fundamental_cycle_basis(g)
    rng = np.random.default_rng(4)
    y = face_map_from_hom(_random_psi(rng, 3, len(basis)), g)
    dp = deleted_product(g)
    p, q = g.walk_chain([0, 1, 2]), g.walk_chain([3, 4, 5])
    p2, q2 = g.walk_chain([0, 2, 1]), g.walk_chain([3, 5, 4])
    lhs, rhs = torus_identity([(p, q), (p2, q2)], y, Gf2Matrix.identity(3), dp)
    assert lhs == rhs


def test_triple_dp_y_squared_is_s_sum():
    """On a triple deleted product y^2 equals the complementary-pair sum of the Gram form."""
    from z2embed.conditions import OctMatrix, s_sum
    from z2embed.gram import gram

    cx = JoinComplex((3, 3, 3))
    rng = np.random.default_rng(9)
    h = basis_size(cx)
    spec = OmegaSpec("I", h + 1)
    for _ in range(10):
        a = rng.integers(0, 2, (h, h))
        a = (np.triu(a) + np.triu(a, 1).T) % 2
        b = Gf2Matrix.from_lists(a.tolist(), h)
        psi = construct_Y(b, spec)
        y = face_map_from_hom(psi, cx)
        full = OctMatrix(cx, bform_expand(BForm(cx, b)).matrix)
        for x in cx.triple_subcomplexes[:4]:
            c = triple_deleted_product(cx, x)
            e = x.faces()[0]
            assert y_squared(c, y, spec.matrix()) == s_sum(full, x, e)
        assert gram(psi, spec) == b


# -- the criterion --------------------------------------------------------


@pytest.mark.parametrize("cx", [JoinComplex((3, 3)), JoinComplex((3, 4)), KnComplex(5),
                                complete_graph(5), complete_bipartite(3, 3)], ids=str)
def test_generators_are_symmetric_cycles(cx):
    gens = symmetric_generators(cx)
    assert gens
    for g in gens:
        assert is_symmetric_cycle(g.cycle)
    dp = g.cycle.dp
    span = {0}
    for g in gens:
        span |= {s ^ dp.bits_to_orbits(g.cycle.bits) for s in span}
    assert len(span) == 2 ** dp.symmetric_cycle_dimension()


def test_zero_map_fails_on_k33_and_passes_on_k4():
    j = JoinComplex((3, 3))
    y = face_map_from_hom(Gf2Matrix.zeros(0, 4), j)
    verdict = check_R_prime(j, y, Gf2Matrix(0, 0))
    assert not verdict and verdict.failing
    g = complete_graph(4)
    y = face_map_from_hom(Gf2Matrix.zeros(0, 3), g)
    assert check_R_prime(g, y, Gf2Matrix(0, 0))


@pytest.mark.parametrize("cx", [JoinComplex((3, 3)), KnComplex(5)], ids=str)
def test_r_prime_matches_conditions_on_samples(cx):
    rng = np.random.default_rng(11)
    h = basis_size(cx)
    spec = OmegaSpec("I", h + 1)
    seen = set()
    for _ in range(40):
        a = rng.integers(0, 2, (h, h))
        a = (np.triu(a) + np.triu(a, 1).T) % 2
        b = Gf2Matrix.from_lists(a.tolist(), h)
        full = bform_expand(BForm(cx, b))
        y = face_map_from_hom(construct_Y(b, spec), cx)
        expected = bool(is_independent(full)) and bool(is_nontrivial(full))
        assert bool(check_R_prime(cx, y, spec.matrix())) == expected
        seen.add(expected)
    assert seen == {True, False}
