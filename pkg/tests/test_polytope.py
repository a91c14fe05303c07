from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from convnormal.errors import (DegenerateSegment, EpsilonOutOfRange,
                               NonUnimodularMatrix, NotAFacet, NotAVertex,
                               NotLattice, ZeroDimensional)
from convnormal.exactnum import Halfspace, lp_feasible, Region
from convnormal.fixtures import random_unimodular, reeve, rng_for
from convnormal.polytope import (Segment, alg_width, contains_point, cube,
                                 dilate, edge_lengths, facet_layer,
                                 from_vertices, is_simple, is_smooth,
                                 is_unimodular_simplex, lattice_length,
                                 min_edge_length, simplex, translate,
                                 unimodular_image, visible_facets, volume)

D2 = simplex(2)


def facet(P, normal):
    return next(F for F in P.facets if F.normal == normal)


def test_from_vertices_drops_boundary_point():
    P = from_vertices([(0, 0), (1, 0), (0, 1), (Fr(1, 2), Fr(1, 2))])
    assert len(P.vertices) == 3 and len(P.facets) == 3


def test_square_and_double_triangle():
    Q = from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(Q.facets) == 4 and len(Q.edges) == 4
    T = from_vertices([(0, 0), (2, 0), (0, 2)])
    assert {(F.normal, F.offset) for F in T.facets} == {((1, 0), 0), ((0, 1), 0), ((-1, -1), -2)}
    assert len(T.edges) == 3


def test_lower_dimensional_carries_equations():
    P = from_vertices([(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert P.dim == 1 and len(P.equations) == 2
    assert P.vertices == ((0, 0, 0), (2, 2, 2))


@pytest.mark.parametrize("a, b, length", [
    ((0, 0), (3, 6), 3),
    ((0, 0), (1, 0), 1),
    ((0, 0), (Fr(1, 2), Fr(1, 2)), Fr(1, 2)),
])
def test_lattice_length(a, b, length):
    assert lattice_length(Segment(a, b)) == length


def test_lattice_length_degenerate():
    with pytest.raises(DegenerateSegment):
        lattice_length(Segment((1, 1), (1, 1)))


def test_min_edge_length():
    assert min_edge_length(simplex(2, 6)) == 6
    assert min_edge_length(cube(2)) == 1
    assert min_edge_length(from_vertices([(0, 0), (4, 0), (0, 6)])) == 2
    with pytest.raises(ZeroDimensional):
        min_edge_length(from_vertices([(1, 1)]))


def test_alg_width():
    assert alg_width(cube(2), facet(cube(2), (0, 1))) == 1
    for c in (1, 3, Fr(5, 2)):
        P = simplex(3, c)
        assert alg_width(P, facet(P, (-1, -1, -1))) == c
    T = from_vertices([(0, 0), (2, 0), (0, 3)])
    assert alg_width(T, facet(T, (1, 0))) == 2
    with pytest.raises(NotAFacet):
        alg_width(T, Halfspace((1, 1), 0))


def test_facet_layer():
    sq = cube(2)
    L, top = facet_layer(sq, facet(sq, (0, 1)), Fr(1, 3))
    assert L.vertices == ((0, 0), (0, Fr(1, 3)), (1, 0), (1, Fr(1, 3)))
    assert top.normal == (0, -1) and top.offset == Fr(-1, 3)
    P = simplex(2, 3)
    L, _ = facet_layer(P, facet(P, (-1, -1)), 1)
    assert set(L.vertices) == {(3, 0), (0, 3), (2, 0), (0, 2)}
    full, top = facet_layer(P, facet(P, (-1, -1)), 3)
    assert full.vertices == P.vertices and top is None
    with pytest.raises(EpsilonOutOfRange):
        facet_layer(P, facet(P, (-1, -1)), 4)


def test_visible_facets():
    assert [F.normal for F in visible_facets(D2, (0, 0))] == [(-1, -1)]
    assert sorted(F.normal for F in visible_facets(cube(2), (0, 0))) == [(-1, 0), (0, -1)]
    P = simplex(3, 2)
    assert [F.normal for F in visible_facets(P, (2, 0, 0))] == [(1, 0, 0)]
    with pytest.raises(NotAVertex):
        visible_facets(D2, (1, 1))


def test_transforms():
    assert dilate(D2, 2).vertices == ((0, 0), (0, 2), (2, 0))
    assert min_edge_length(translate(D2, (Fr(1, 3), 0))) == 1
    S = unimodular_image(D2, [[1, 1], [0, 1]])
    assert set(S.vertices) == {(0, 0), (1, 0), (1, 1)}
    assert is_unimodular_simplex(S)
    with pytest.raises(NonUnimodularMatrix):
        unimodular_image(D2, [[2, 0], [0, 1]])


def test_contains_point():
    assert contains_point(D2, (Fr(1, 3), Fr(1, 3)))
    assert not contains_point(D2, (Fr(2, 3), Fr(2, 3)))
    for v in reeve(3).vertices:
        assert contains_point(reeve(3), v)


def test_volume():
    assert volume(simplex(4)) == Fr(1, 24)
    assert volume(cube(3)) == 1
    assert volume(reeve(2)) == Fr(1, 3)
    with pytest.warns(UserWarning):
        assert volume(from_vertices([(0, 0), (1, 1)])) == 0


def test_combinatorial_predicates():
    for d in (1, 2, 3):
        S = simplex(d)
        assert is_unimodular_simplex(S) and is_simple(S) and is_smooth(S)
    assert not is_unimodular_simplex(reeve(2))
    T = simplex(2, 3)
    assert not is_unimodular_simplex(T) and is_smooth(T)
    with pytest.raises(NotLattice):
        is_smooth(simplex(2, Fr(1, 2)))


# ---------------------------------------------------------------------------
# properties

small = st.integers(0, 4)


@st.composite
def point_sets(draw, d=None):
    d = d if d is not None else draw(st.integers(2, 3))
    n = draw(st.integers(d + 1, d + 4))
    return [tuple(draw(small) for _ in range(d)) for _ in range(n)]


@given(point_sets())
def test_dual_description_round_trip(pts):
    P = from_vertices(pts)
    if P.dim < P.ambient_dim:
        return
    ref = oracles.brute_facets(pts)
    for v in P.vertices:
        vals = [F.value(v) for F in P.facets]
        assert all(x >= 0 for x in vals)
        assert sum(1 for x in vals if x == 0) >= P.dim
        assert oracles.inside(ref, v)
    for p in pts:
        assert contains_point(P, p)
    # each vertex is extreme: P without it is strictly smaller at that corner
    for i, v in enumerate(P.vertices):
        rest = from_vertices([w for j, w in enumerate(P.vertices) if j != i])
        assert not contains_point(rest, v)
    # facets irredundant: dropping one admits a point beyond it
    for F in P.facets:
        others = tuple(G for G in P.facets if G != F) + (F.complement(),)
        assert lp_feasible(Region(P.ambient_dim, others)) is not None


@given(point_sets(2), st.integers(0, 10**6))
def test_lattice_length_invariance(pts, seed):
    P = from_vertices(pts)
    if P.dim == 0:
        return
    rng = rng_for(seed)
    U = random_unimodular(2, rng)
    Q = unimodular_image(P, U, (Fr(1, 3), 2))
    assert sorted(edge_lengths(Q)) == sorted(edge_lengths(P))
    assert sorted(edge_lengths(translate(P, (Fr(1, 2), 0)))) == sorted(edge_lengths(P))


@given(point_sets(), st.fractions(Fr(1, 4), 5, max_denominator=7))
def test_dilation_scales(pts, c):
    P = from_vertices(pts)
    if P.dim < P.ambient_dim or c == 0:
        return
    Q = dilate(P, c)
    assert len(Q.edges) == len(P.edges)
    assert sorted(edge_lengths(Q)) == sorted(c * e for e in edge_lengths(P))
    for F in P.facets:
        cF = Halfspace(F.normal, c * F.offset)
        assert alg_width(Q, cF) == c * alg_width(P, F)
        full, _ = facet_layer(P, F, alg_width(P, F))
        assert full.vertices == P.vertices


@given(point_sets(2))
def test_volume_matches_shoelace(pts):
    P = from_vertices(pts)
    if P.dim < 2:
        return
    assert volume(P) == oracles.shoelace(oracles.ccw(P.vertices))
