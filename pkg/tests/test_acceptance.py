"""Acceptance criteria.  Each test carries a ``criterion`` marker; the
terminal summary prints one PASS/FAIL line per criterion."""

import time
from fractions import Fraction as Fr

import pytest

import oracles
from convnormal.bounds import (cn_closed_bound, cn_recursive_bound,
                               height_gauge_exact, height_gauge_falsify)
from convnormal.covers import (check_cn, check_cn_at, check_corner_cover,
                               check_cover, check_vertex_homothety_cover,
                               simplex_ppd_cover)
from convnormal.exactnum import det
from convnormal.fixtures import (hollow3, random_lattice_polytope,
                                 random_unimodular, reeve, rng_for)
from convnormal.latticepts import (SimplicialCone, check_integrally_closed,
                                   check_normal, hilbert_basis)
from convnormal.polytope import (contains_point, cube, from_vertices, simplex,
                                 unimodular_image)

crit = pytest.mark.criterion
D2 = simplex(2)


def in_open_middle_triangle(w):
    x, y = w
    return x + y > 1 and x < 1 and y < 1


@crit(1, "Δ₂ is not convex-normal at c=2; exact witness in the open middle triangle; < 1 s")
def test_unimodular_triangle_not_cn():
    t0 = time.perf_counter()
    rep = check_cn_at(D2, 2)
    elapsed = time.perf_counter() - t0
    assert rep.covered is False
    assert all(isinstance(x, Fr) for x in rep.witness)
    assert in_open_middle_triangle(rep.witness)
    for x in [(0, 0), (1, 0), (0, 1)]:
        assert oracles.inside(oracles.brute_facets([(2, 0), (0, 2), (0, 0)]), rep.witness)
        piece = oracles.brute_facets([(x[0], x[1]), (x[0] + 1, x[1]), (x[0], x[1] + 1)])
        assert not oracles.inside(piece, rep.witness)
    assert elapsed < 1.0


@crit(2, "24Δ₂ passes CN on the grid {2, 5/2} with k=4, exact; < 10 min")
def test_dilated_triangle_cn_grid():
    t0 = time.perf_counter()
    summary = check_cn(simplex(2, 24), 4, [2, Fr(5, 2)])
    assert [r.covered for r in summary.reports] == [True, True]
    assert all(r.mode == "exact" for r in summary.reports)
    assert summary.holds is True
    assert time.perf_counter() - t0 < 600


def _assert_ppd(P):
    cover, rep = simplex_ppd_cover(P)
    assert rep.covered is True
    assert cover.boxes
    for B in cover.polytopes():
        for v in B.vertices:
            assert contains_point(P, v)
    return cover


@crit(3, "simplex parallelepiped covers verified for 6Δ₂, an SL₂(Z) image of 6Δ₂, and 12Δ₃")
@pytest.mark.parametrize("name", ["6D2", "skew6D2", "12D3"])
def test_simplex_ppd_cover(name):
    if name == "6D2":
        P = simplex(2, 6)
    elif name == "skew6D2":
        P = unimodular_image(simplex(2, 6), random_unimodular(2, rng_for(7)))
    else:
        P = simplex(3, 12)
    cover = _assert_ppd(P)
    if name == "6D2":
        assert all(abs(det(E)) == 1 for _, E in cover.boxes)


def _random_3polytopes(count, seed):
    rng = rng_for(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(4, 9))
        out.append(random_lattice_polytope(3, n, 4, rng))
    return out


@crit(4, "integral closedness agrees with the all-degrees ≤ d+1 oracle on 20 random 3-polytopes; Reeve(2) and hollow3 verdicts")
def test_ic_oracle_agreement():
    disagreements = []
    for P in _random_3polytopes(20, 2024):
        rep = check_integrally_closed(P)
        ref = oracles.ic_oracle(P.vertices, 4)
        if rep.integrally_closed != (ref is None):
            disagreements.append(P.vertices)
        if rep.witness is not None:
            c, z = rep.witness
            sums = oracles.ic_oracle(P.vertices, c)
            assert sums is not None
    assert disagreements == []


@crit(4, "integral closedness agrees with the all-degrees ≤ d+1 oracle on 20 random 3-polytopes; Reeve(2) and hollow3 verdicts")
def test_ic_named_fixtures():
    r = check_integrally_closed(reeve(2))
    assert r.integrally_closed is False
    assert r.witness == (2, (1, 1, 1))
    h = check_normal(hollow3())
    assert (h.normal, h.summand, h.integrally_closed) == (True, False, False)


def _random_polygon(rng, box=6):
    return random_lattice_polytope(2, int(rng.integers(3, 7)), box, rng)


@crit(5, "homothety covers: c=d+1 vertex copies, unit cube at c∈{1,3/2,2,3}, c=(d+1)/d")
def test_high_c_covers():
    rng = rng_for(55)
    polys = [_random_polygon(rng) for _ in range(5)] + _random_3polytopes(3, 56)
    for P in polys:
        rep = check_vertex_homothety_cover(P, P.dim + 1, "high_c")
        assert rep.covered is True


@crit(5, "homothety covers: c=d+1 vertex copies, unit cube at c∈{1,3/2,2,3}, c=(d+1)/d")
@pytest.mark.parametrize("c", [1, Fr(3, 2), 2, 3])
def test_cube_convex_normal(c):
    assert check_cn_at(cube(3), c).covered is True


@crit(5, "homothety covers: c=d+1 vertex copies, unit cube at c∈{1,3/2,2,3}, c=(d+1)/d")
def test_low_c_covers():
    rng = rng_for(57)
    polys = [_random_polygon(rng) for _ in range(3)] + _random_3polytopes(2, 58)
    for P in polys:
        rep = check_vertex_homothety_cover(P, Fr(P.dim + 1, P.dim), "low_c")
        assert rep.covered is True


@crit(6, "height gauge: exact value 1/d for d ≤ 8; 10⁵ seeded trials at d=2,3,4 never go below 1/d")
def test_height_gauge():
    for d in range(1, 9):
        value, normal = height_gauge_exact(d)
        assert value * d == 1
        assert normal == (1,) * d
    for d in (2, 3, 4):
        rep = height_gauge_falsify(d, 100_000, seed=d)
        assert rep.violations == 0
        assert rep.min_observed >= Fr(1, d)


@crit(7, "edge-length recursion: (2,4)→24, (3,4)→48, closed (3,4)=72, recursive ≤ closed for d ≤ 10")
def test_bound_recursion():
    assert cn_recursive_bound(2, 4)[0] == 24
    assert cn_recursive_bound(3, 4)[0] == 48
    assert cn_closed_bound(3, 4) == 72
    for d in range(1, 11):
        for k in (2, Fr(5, 2), 3, 4):
            cn, bcn, _ = cn_recursive_bound(d, k)
            assert isinstance(cn, Fr) and isinstance(bcn, Fr)
            assert cn <= cn_closed_bound(d, k)


@crit(8, "Hilbert-basis heights ≤ d−1 on 100+ random simplicial cones; cone((1,0),(1,q)) has q+1 elements")
def test_hilbert_heights():
    rng = rng_for(8)
    count = 0
    for d, wanted in ((2, 60), (3, 50)):
        n = 0
        while n < wanted:
            G = [tuple(int(x) for x in rng.integers(-9, 10, size=d)) for _ in range(d)]
            if det(G) == 0:
                continue
            hb = hilbert_basis(SimplicialCone(tuple(G)))
            assert max(hb.heights) <= d - 1
            n += 1
        count += n
    assert count >= 100
    for q in range(1, 6):
        hb = hilbert_basis(SimplicialCone(((1, 0), (1, q))))
        assert sorted(hb.elements) == [(1, j) for j in range(q + 1)]


@crit(9, "corner region of 6Δ₂ at the origin is covered by its parallelepipeds; < 1 min")
def test_corner_cover_6D2():
    t0 = time.perf_counter()
    rep = check_corner_cover(simplex(2, 6), (0, 0), 1)
    assert rep.covered is True and rep.mode == "exact"
    assert time.perf_counter() - t0 < 60


INVARIANCE_FIXTURES = {
    "D2": lambda: simplex(2),
    "3D2": lambda: simplex(2, 3),
    "square": lambda: cube(2),
    "reeve2": lambda: reeve(2),
}


@crit(10, "CN and IC verdicts unchanged under 20 random unimodular images with integral translation")
@pytest.mark.parametrize("name", list(INVARIANCE_FIXTURES))
def test_unimodular_invariance(name):
    P = INVARIANCE_FIXTURES[name]()
    rng = rng_for(list(INVARIANCE_FIXTURES).index(name) + 100)
    base_cn = check_cn_at(P, 2).covered
    base_ic = check_integrally_closed(P).integrally_closed
    for _ in range(20):
        U = random_unimodular(P.ambient_dim, rng)
        t = tuple(int(x) for x in rng.integers(-3, 4, size=P.ambient_dim))
        Q = unimodular_image(P, U, t)
        assert check_cn_at(Q, 2).covered == base_cn
        assert check_integrally_closed(Q).integrally_closed == base_ic


def cover_instances(count=60, seed=11):
    """Small planar instances with both verdicts: fan triangulations with a
    triangle possibly dropped, plus random overlapping polygons."""
    rng = rng_for(seed)
    out = []
    while len(out) < count:
        T = random_lattice_polytope(2, int(rng.integers(3, 7)), 4, rng)
        kind = len(out) % 3
        if kind < 2:
            ring = oracles.ccw(T.vertices)
            tris = [from_vertices([ring[0], ring[i], ring[i + 1]]) for i in range(1, len(ring) - 1)]
            if kind == 1:
                tris.pop(int(rng.integers(0, len(tris))))
            extra = [random_lattice_polytope(2, 3, 4, rng) for _ in range(int(rng.integers(0, 3)))]
            pieces = (tris + extra)[:6]
        else:
            pieces = [random_lattice_polytope(2, int(rng.integers(3, 6)), 4, rng)
                      for _ in range(int(rng.integers(1, 7)))]
        out.append((T, pieces))
    return out


@crit(11, "exact cover verdicts agree with inclusion-exclusion area and 1/64 grid sampling on ≥ 50 instances")
def test_cover_cross_validation():
    instances = cover_instances()
    negatives = positives = 0
    for T, pieces in instances:
        rep = check_cover(T, pieces)
        area_t = oracles.shoelace(oracles.ccw(T.vertices))
        area_u = oracles.union_area_within(T.vertices, [p.vertices for p in pieces])
        assert rep.covered == (area_u == area_t)
        grid = oracles.grid_uncovered(T.vertices, [p.vertices for p in pieces])
        if grid is not None:
            assert rep.covered is False
        if rep.covered is False:
            negatives += 1
            w = rep.witness
            assert oracles.inside(oracles.brute_facets(T.vertices), w)
            for p in pieces:
                assert not oracles.inside(oracles.brute_facets(p.vertices), w)
        else:
            positives += 1
    assert len(instances) >= 50
    assert negatives > 0 and positives > 0


@crit(12, "verdicts and witnesses identical with 1 worker and with several workers")
def test_worker_determinism():
    runs = [
        lambda w: check_cn_at(D2, 2, workers=w),
        lambda w: check_cn_at(simplex(2, 24), 2, workers=w),
        lambda w: check_cn_at(simplex(2, 2), Fr(7, 3), workers=w),
        lambda w: check_corner_cover(simplex(2, 6), (0, 0), 1, workers=w),
        lambda w: check_corner_cover(D2, (0, 0), 1, workers=w),
        lambda w: simplex_ppd_cover(simplex(2, 6), workers=w)[1],
    ]
    runs += [lambda w, T=T, p=p: check_cover(T, p, workers=w) for T, p in cover_instances(12, 99)]
    for run in runs:
        a, b = run(1), run(4)
        assert (a.covered, a.witness) == (b.covered, b.witness)
