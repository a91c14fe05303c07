"""Rational polytopes in dual (vertex + facet) description.

Facets are stored as :class:`Halfspace` objects ``normal . x >= offset`` with a
primitive integer normal, so the "algebraic distance" ``normal . x - offset``
of a point to a facet hyperplane is rational.  The Euclidean distance is that
value divided by ``|normal|`` and is never formed.

Polytopes of dimension below the ambient dimension carry their affine hull as
a tuple of equations ``normal . x = offset``; facets are then only meaningful
relative to that hull.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (DegenerateSegment, DimensionMismatch, EmptyInput,
                     EpsilonOutOfRange, NonUnimodularMatrix,
                     NotAFacet, NotAVertex, NotLattice, ZeroDimensional)
from .exactnum import (Halfspace, as_fraction, det, dot, inverse, is_integral,
                       matvec, nullspace, primitive_part, qvec, rank,
                       row_reduce, snf, solve, to_int_vector, vadd, vscale,
                       vsub)


def _hs_key(h: Halfspace):
    return (h.normal, h.offset)


@dataclass(frozen=True)
class Polytope:
    ambient_dim: int
    vertices: tuple
    facets: tuple
    edges: tuple
    dim: int
    equations: tuple = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self._index is None:
            object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def vertex_index(self, v) -> int:
        try:
            return self._index[qvec(v)]
        except KeyError:
            raise NotAVertex(f"{v} is not a vertex") from None

    @property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def facets_through(self, v) -> list[Halfspace]:
        return [F for F in self.facets if F.value(v) == 0]

    def facet_vertices(self, F: Halfspace) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if F.value(v) == 0]

    def halfspaces(self) -> tuple:
        """Facets plus both sides of every hull equation."""
        eq = []
        for h in self.equations:
            eq.append(h)
            eq.append(Halfspace(tuple(-a for a in h.normal), -h.offset))
        return self.facets + tuple(eq)

    def __repr__(self):
        return f"Polytope(dim={self.dim}, ambient_dim={self.ambient_dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple


def _make(ambient_dim, vertices, facets, edges, dim, equations=()) -> Polytope:
    """Assemble a polytope in canonical order, remapping edge indices."""
    order = sorted(range(len(vertices)), key=lambda i: vertices[i])
    new = {old: k for k, old in enumerate(order)}
    verts = tuple(vertices[i] for i in order)
    eds = tuple(sorted(tuple(sorted((new[a], new[b]))) for a, b in edges))
    return Polytope(ambient_dim, verts, tuple(sorted(facets, key=_hs_key)), eds, dim,
                    tuple(sorted(equations, key=_hs_key)))


def _affine_rank(points: Sequence) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([vsub(p, p0) for p in points[1:]])


def _hull_full(Y: list, r: int) -> list[tuple]:
    """Facets ``(normal, offset)`` of a full-dimensional point set in Q^r."""
    if r == 1:
        lo, hi = min(y[0] for y in Y), max(y[0] for y in Y)
        return [((1,), lo), ((-1,), -hi)]
    seen = set()
    out = []
    for combo in itertools.combinations(range(len(Y)), r):
        base = Y[combo[0]]
        diffs = [vsub(Y[i], base) for i in combo[1:]]
        ns = nullspace(diffs, r)
        if len(ns) != 1:
            continue
        n = ns[0]
        off = dot(n, base)
        vals = [dot(n, y) - off for y in Y]
        if all(v >= 0 for v in vals):
            key = (n, off)
        elif all(v <= 0 for v in vals):
            key = (tuple(-a for a in n), -off)
        else:
            continue
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def from_vertices(points: Sequence[Sequence]) -> Polytope:
    """Convex hull of a finite point set: extreme points, facets, edge graph."""
    pts = [qvec(p) for p in points]
    if not pts:
        raise EmptyInput("no points given")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionMismatch("points of different lengths")
    pts = sorted(set(pts))
    p0 = pts[0]
    diffs = [vsub(p, p0) for p in pts[1:]]
    R, pivots = row_reduce(diffs) if diffs else ([], [])
    r = len(pivots)
    equations = [Halfspace(n, dot(n, p0)) for n in nullspace(diffs, d)] if r < d else []
    if r == 0:
        return _make(d, [p0], [], [], 0, equations)
    J = pivots
    Y = [tuple(p[j] for j in J) for p in pts]
    raw = _hull_full(Y, r)
    facets = []
    for n, off in raw:
        full = [0] * d
        for k, j in enumerate(J):
            full[j] = n[k]
        facets.append(Halfspace(tuple(full), Fraction(off)))
    tight = [[k for k, (n, off) in enumerate(raw) if dot(n, y) == off] for y in Y]
    vert_ids = [i for i in range(len(Y)) if rank([raw[k][0] for k in tight[i]]) == r]
    vertices = [pts[i] for i in vert_ids]
    edges = []
    for a, b in itertools.combinations(range(len(vert_ids)), 2):
        common = set(tight[vert_ids[a]]) & set(tight[vert_ids[b]])
        normals = [raw[k][0] for k in common]
        if (rank(normals) if normals else 0) == r - 1:
            edges.append((a, b))
    return _make(d, vertices, facets, edges, r, equations)


def from_halfspaces(halfspaces: Sequence[Halfspace], ambient_dim: int,
                    equations: Sequence[Halfspace] = ()) -> Optional[Polytope]:
    """Vertex enumeration for a bounded H-description; None when empty."""
    hs = list(halfspaces)
    eqs = list(equations)
    k = ambient_dim - len(eqs)
    points = set()
    for combo in itertools.combinations(range(len(hs)), k):
        rows = [h.normal for h in eqs] + [hs[i].normal for i in combo]
        rhs = [h.offset for h in eqs] + [hs[i].offset for i in combo]
        x = solve(rows, rhs)
        if x is None:
            continue
        if all(h.value(x) >= 0 for h in hs):
            points.add(x)
    if not points:
        return None
    return from_vertices(list(points))


def parallelepiped(base: Sequence, edge_vectors: Sequence[Sequence]) -> Polytope:
    """``base + sum lambda_i e_i`` with ``0 <= lambda_i <= 1``; full-dimensional."""
    base = qvec(base)
    E = [qvec(e) for e in edge_vectors]
    d = len(base)
    if len(E) != d:
        raise DimensionMismatch("need exactly d edge vectors")
    Einv = inverse([list(col) for col in zip(*E)])  # rows: dual basis
    facets = []
    for i in range(d):
        n = primitive_part(Einv[i])
        scale = next(Fraction(a) / b for a, b in zip(n, Einv[i]) if b != 0)
        lo = dot(n, base)
        facets.append(Halfspace(n, lo))
        facets.append(Halfspace(tuple(-a for a in n), -(lo + scale)))
    corners = []
    for bits in itertools.product((0, 1), repeat=d):
        p = base
        for bit, e in zip(bits, E):
            if bit:
                p = vadd(p, e)
        corners.append(p)
    edges = []
    for a, b in itertools.combinations(range(len(corners)), 2):
        if sum(x != y for x, y in zip(bin(a)[2:].zfill(d), bin(b)[2:].zfill(d))) == 1:
            edges.append((a, b))
    return _make(d, corners, facets, edges, d)


# ---------------------------------------------------------------------------
# metric quantities


def lattice_length(seg) -> Fraction:
    """Lattice length of a rational segment (``Segment`` or a pair of points)."""
    a, b = (seg.a, seg.b) if isinstance(seg, Segment) else seg
    v = vsub(qvec(b), qvec(a))
    if not any(v):
        raise DegenerateSegment("segment endpoints coincide")
    p = primitive_part(v)
    k = next(i for i, x in enumerate(p) if x != 0)
    return v[k] / p[k]


def edge_lengths(P: Polytope) -> list[Fraction]:
    return [lattice_length((P.vertices[a], P.vertices[b])) for a, b in P.edges]


def min_edge_length(P: Polytope) -> Fraction:
    """E(P): the least lattice length over the edges."""
    if P.dim < 1:
        raise ZeroDimensional("a point has no edges")
    return min(edge_lengths(P))


def get_facet(P: Polytope, F) -> Halfspace:
    """Resolve a facet handle (index or Halfspace) to the stored facet."""
    if isinstance(F, int):
        if 0 <= F < len(P.facets):
            return P.facets[F]
        raise NotAFacet(f"no facet with index {F}")
    for G in P.facets:
        if G.normal == tuple(F.normal) and G.offset == F.offset:
            return G
    raise NotAFacet(f"{F} is not a facet of the polytope")


def alg_width(P: Polytope, F) -> Fraction:
    """Width of P over facet F in algebraic units (primitive normal)."""
    F = get_facet(P, F)
    return max(F.value(v) for v in P.vertices)


def facet_layer(P: Polytope, F, eps_alg) -> tuple[Polytope, Optional[Halfspace]]:
    """The layer of P within algebraic distance ``eps_alg`` of facet F.

    Returns the layer polytope and its top facet parallel to F (None when
    the layer is all of P).
    """
    F = get_facet(P, F)
    eps = as_fraction(eps_alg)
    w = alg_width(P, F)
    if not (0 < eps <= w):
        raise EpsilonOutOfRange(f"eps {eps} outside (0, {w}]")
    if eps == w:
        return P, None
    top = Halfspace(tuple(-a for a in F.normal), -(F.offset + eps))
    layer = from_halfspaces(P.facets + (top,), P.ambient_dim, P.equations)
    return layer, get_facet(layer, top)


def visible_facets(P: Polytope, v) -> list[Halfspace]:
    """Facets not containing vertex v."""
    v = P.vertices[P.vertex_index(v)]
    return [F for F in P.facets if F.value(v) > 0]


def contains_point(P: Polytope, x) -> bool:
    x = qvec(x)
    if len(x) != P.ambient_dim:
        raise DimensionMismatch("point and polytope dimensions differ")
    return all(F.value(x) >= 0 for F in P.facets) and all(E.value(x) == 0 for E in P.equations)


# ---------------------------------------------------------------------------
# maps


def dilate(P: Polytope, c) -> Polytope:
    c = as_fraction(c)
    if c <= 0:
        raise ValueError("dilation factor must be positive")
    return Polytope(P.ambient_dim, tuple(vscale(c, v) for v in P.vertices),
                    tuple(Halfspace(F.normal, c * F.offset) for F in P.facets),
                    P.edges, P.dim,
                    tuple(Halfspace(E.normal, c * E.offset) for E in P.equations))


def translate(P: Polytope, t) -> Polytope:
    t = qvec(t)
    return Polytope(P.ambient_dim, tuple(vadd(v, t) for v in P.vertices),
                    tuple(F.shifted(t) for F in P.facets), P.edges, P.dim,
                    tuple(E.shifted(t) for E in P.equations))


def unimodular_image(P: Polytope, U: Sequence[Sequence[int]], t=None) -> Polytope:
    """``x -> U x + t`` for an integer matrix with determinant +-1."""
    U = [[int(a) for a in row] for row in U]
    if abs(det(U)) != 1:
        raise NonUnimodularMatrix("matrix determinant is not +-1")
    t = qvec(t) if t is not None else tuple(Fraction(0) for _ in U)
    Uinv = inverse(U)
    UinvT = [list(col) for col in zip(*Uinv)]

    def image(h):
        n = tuple(int(a) for a in matvec(UinvT, h.normal))
        return Halfspace(n, h.offset + dot(n, t))

    verts = [vadd(matvec(U, v), t) for v in P.vertices]
    return _make(P.ambient_dim, verts, [image(F) for F in P.facets], list(P.edges), P.dim,
                 [image(E) for E in P.equations])


# ---------------------------------------------------------------------------
# triangulation and volume


def pulling_triangulation(points: Sequence, facet_sets: Sequence[frozenset], dim: int,
                          linear: bool = False) -> list[tuple]:
    """Pulling triangulation of a polytope (or pointed cone when ``linear``).

    ``facet_sets`` lists, for each facet, the indices of the points on it.
    Every simplex is returned as a sorted tuple of point indices.
    """

    def rk(S):
        pts = [points[i] for i in S]
        return rank(pts) if linear else _affine_rank(pts)

    def tri(S: frozenset, k: int) -> list[tuple]:
        size = k if linear else k + 1
        if len(S) == size:
            return [tuple(sorted(S))]
        p0 = min(S)
        subs = set()
        for F in facet_sets:
            G = S & F
            if p0 not in G and rk(G) == k - 1:
                subs.add(frozenset(G))
        out = []
        for G in sorted(subs, key=sorted):
            for s in tri(G, k - 1):
                out.append(tuple(sorted(s + (p0,))))
        return out

    return tri(frozenset(range(len(points))), dim)


def triangulate(P: Polytope) -> list[tuple]:
    facet_sets = [frozenset(P.facet_vertices(F)) for F in P.facets]
    return pulling_triangulation(P.vertices, facet_sets, P.dim)


def volume(P: Polytope) -> Fraction:
    """Exact Euclidean volume; lower-dimensional input gives 0 with a warning."""
    d = P.ambient_dim
    if P.dim < d:
        warnings.warn("volume of a lower-dimensional polytope is 0", LowerDimensionalWarning)
        return Fraction(0)
    total = Fraction(0)
    for s in triangulate(P):
        v0 = P.vertices[s[0]]
        total += abs(det([vsub(P.vertices[i], v0) for i in s[1:]]))
    return total / math.factorial(d)


class LowerDimensionalWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# combinatorial type


def edge_directions(P: Polytope, v) -> list[tuple]:
    """Primitive integer directions of the edges leaving vertex v."""
    i = P.vertex_index(v)
    return [primitive_part(vsub(P.vertices[j], P.vertices[i])) for j in P.neighbors(i)]


def _require_lattice(P: Polytope):
    if not P.is_lattice:
        raise NotLattice("polytope has non-integral vertices")


def is_simplex(P: Polytope) -> bool:
    return len(P.vertices) == P.dim + 1


def is_unimodular_simplex(P: Polytope) -> bool:
    _require_lattice(P)
    if not is_simplex(P):
        return False
    if P.dim == 0:
        return True
    v0 = P.vertices[0]
    M = [to_int_vector(vsub(v, v0)) for v in P.vertices[1:]]
    return snf(M) == [1] * P.dim


def is_simple(P: Polytope) -> bool:
    return all(len(P.neighbors(i)) == P.dim for i in range(len(P.vertices)))


def is_smooth(P: Polytope) -> bool:
    _require_lattice(P)
    if not is_simple(P):
        return False
    return all(snf(edge_directions(P, v)) == [1] * P.dim for v in P.vertices)


def simplex(d: int, c=1) -> Polytope:
    """``c`` times the standard simplex conv(0, e_1, ..., e_d)."""
    pts = [tuple(0 for _ in range(d))]
    pts += [tuple(c if j == i else 0 for j in range(d)) for i in range(d)]
    return from_vertices(pts)


def cube(d: int, l=1) -> Polytope:
    return parallelepiped([0] * d, [[l if j == i else 0 for j in range(d)] for i in range(d)])
