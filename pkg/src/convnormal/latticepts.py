"""Lattice points, the affine lattice of a lattice polytope, normality checks
and Hilbert bases of simplicial cones."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (EmptyInput, NotFullRankInOwnSpan, NotLattice, NotSimple,
                     PointNotInMultiple)
from .exactnum import (Halfspace, Region, dot, fourier_motzkin_project, hnf,
                       integer_kernel, inverse, primitive_part, qvec, rank,
                       row_reduce, snf, solve, to_int_vector, vadd, vsub)
from .polytope import (Polytope, dilate, edge_directions, from_vertices,
                       is_simple)


def enumerate_lattice_points(P: Polytope, shift=None) -> list[tuple]:
    """All points of ``shift + Z^d`` inside P, in lexicographic order.

    Coordinates are bounded one at a time by the Fourier-Motzkin shadows of
    P, so no bounding-box scan is involved.
    """
    d = P.ambient_dim
    shift = qvec(shift) if shift is not None else tuple(Fraction(0) for _ in range(d))
    hs = tuple(Halfspace(h.normal, h.offset - dot(h.normal, shift)) for h in P.halfspaces())
    systems = {d: Region(d, hs)}
    for k in range(d, 1, -1):
        systems[k - 1] = fourier_motzkin_project(systems[k], k - 1)
    out = []

    def rec(prefix: tuple):
        k = len(prefix)
        if k == d:
            out.append(vadd(shift, prefix))
            return
        lo = hi = None
        for h in systems[k + 1].constraints:
            a = h.normal[k]
            rest = h.offset - dot(h.normal[:k], prefix)
            if a > 0:
                b = rest / a
                lo = b if lo is None or b > lo else lo
            elif a < 0:
                b = rest / a
                hi = b if hi is None or b < hi else hi
            elif rest > 0:
                return
        if lo is None or hi is None:
            raise ValueError("polytope is unbounded")
        for z in range(math.ceil(lo), math.floor(hi) + 1):
            rec(prefix + (z,))

    rec(())
    return out


def lattice_points(P: Polytope) -> list[tuple]:
    """``P ∩ Z^d`` as integer tuples."""
    return [to_int_vector(p) for p in enumerate_lattice_points(P)]


# ---------------------------------------------------------------------------
# affine lattice


@dataclass(frozen=True)
class AffineLattice:
    basepoint: tuple
    basis: tuple
    invariant_factors: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_summand(self) -> bool:
        return all(f == 1 for f in self.invariant_factors)

    def coordinates(self, x) -> tuple:
        """Coefficients of ``x - basepoint`` in the basis (rational)."""
        v = vsub(qvec(x), self.basepoint)
        if not self.basis:
            return ()
        pivots = [next(j for j, a in enumerate(row) if a) for row in self.basis]
        A = [[self.basis[i][j] for i in range(self.rank)] for j in pivots]
        y = solve(A, [v[j] for j in pivots])
        if any(dot([row[j] for row in self.basis], y) != v[j] for j in range(len(v))):
            raise ValueError(f"{x} is not in the affine span of the lattice")
        return y

    def point(self, y, scale=1) -> tuple:
        """``scale * basepoint + sum y_i b_i``."""
        p = tuple(scale * a for a in self.basepoint)
        for yi, b in zip(y, self.basis):
            p = tuple(a + yi * bi for a, bi in zip(p, b))
        return p


def affine_lattice(points: Sequence[Sequence[int]]) -> AffineLattice:
    """The lattice spanned by all differences of the given integer points."""
    pts = [to_int_vector(p) for p in points]
    if not pts:
        raise EmptyInput("no points given")
    p0 = pts[0]
    diffs = [vsub(p, p0) for p in pts[1:]]
    if not diffs or not any(any(r) for r in diffs):
        return AffineLattice(p0, (), ())
    H, _ = hnf(diffs)
    basis = tuple(tuple(r) for r in H if any(r))
    return AffineLattice(p0, basis, tuple(snf(basis)))


# ---------------------------------------------------------------------------
# decomposition and integral closedness


def _in_multiple(P: Polytope, c, z) -> bool:
    return (all(dot(F.normal, z) >= c * F.offset for F in P.facets)
            and all(dot(E.normal, z) == c * E.offset for E in P.equations))


class _Decomposer:
    """Depth-first search for ``z = x_1 + ... + x_c`` with memoized failures."""

    def __init__(self, P: Polytope, points=None):
        self.P = P
        self.points = points if points is not None else lattice_points(P)
        self.point_set = set(self.points)
        self.failed = set()

    def run(self, c: int, z: tuple) -> Optional[list]:
        if c == 1:
            return [z] if z in self.point_set else None
        if (c, z) in self.failed:
            return None
        center = [Fraction(a, c) for a in z]

        def key(x):
            return (sum((a - b) ** 2 for a, b in zip(x, center)), x)

        for x in sorted(self.points, key=key):
            rest = vsub(z, x)
            if not _in_multiple(self.P, c - 1, rest):
                continue
            tail = self.run(c - 1, rest)
            if tail is not None:
                return [x] + tail
        self.failed.add((c, z))
        return None


def decompose(P: Polytope, c: int, z) -> Optional[list]:
    """Write ``z`` as a sum of ``c`` lattice points of P, or return None."""
    if not P.is_lattice:
        raise NotLattice("decomposition needs a lattice polytope")
    z = to_int_vector(z)
    if not _in_multiple(P, c, z):
        raise PointNotInMultiple(f"{z} is not in {c}P")
    parts = _Decomposer(P).run(c, z)
    if parts is not None:
        assert tuple(map(sum, zip(*parts))) == z
    return parts


@dataclass
class ICReport:
    integrally_closed: bool
    normal: bool
    summand: bool
    witness: Optional[tuple] = None
    degrees_checked: list = field(default_factory=list)
    normal_witness: Optional[tuple] = None

    def __post_init__(self):
        assert self.integrally_closed == (self.normal and self.summand), \
            "integral closedness must equal normality plus the summand property"

    def to_json(self) -> dict:
        def wit(w):
            return None if w is None else {"degree": w[0], "point": [str(x) for x in w[1]]}
        return {"integrally_closed": self.integrally_closed, "normal": self.normal,
                "summand": self.summand, "witness": wit(self.witness),
                "normal_witness": wit(self.normal_witness), "degrees_checked": list(self.degrees_checked)}


def default_degrees(dim: int, max_degree: Optional[int] = None) -> list[int]:
    top = max_degree if max_degree is not None else max(2, dim - 1)
    return list(range(2, top + 1))


def _first_failure(P: Polytope, degrees) -> Optional[tuple]:
    dec = _Decomposer(P)
    for c in degrees:
        for z in enumerate_lattice_points(dilate(P, c)):
            z = to_int_vector(z)
            if dec.run(c, z) is None:
                return (c, z)
    return None


def _normal_failure(P: Polytope, L: AffineLattice, degrees) -> Optional[tuple]:
    if L.rank == 0:
        return None
    verts = [to_int_vector(L.coordinates(v)) for v in P.vertices]
    PL = from_vertices(verts)
    fail = _first_failure(PL, degrees)
    if fail is None:
        return None
    c, y = fail
    return (c, to_int_vector(L.point(y, scale=c)))


def _report(P: Polytope, max_degree: Optional[int]) -> ICReport:
    if not P.is_lattice:
        raise NotLattice("integral closedness is defined for lattice polytopes")
    degrees = default_degrees(P.dim, max_degree)
    L = affine_lattice(lattice_points(P))
    ic_fail = _first_failure(P, degrees)
    normal_fail = _normal_failure(P, L, degrees)
    return ICReport(
        integrally_closed=ic_fail is None,
        normal=normal_fail is None,
        summand=L.is_summand,
        witness=ic_fail,
        degrees_checked=degrees,
        normal_witness=normal_fail,
    )


def check_integrally_closed(P: Polytope, max_degree: Optional[int] = None) -> ICReport:
    """Check every lattice point of cP for c = 2..max(2, dim-1) (overridable).

    ``witness`` is the first ``(c, z)`` without a decomposition.
    """
    return _report(P, max_degree)


def check_normal(P: Polytope, max_degree: Optional[int] = None) -> ICReport:
    """Normality: the same check carried out in coordinates of the lattice L."""
    return _report(P, max_degree)


# ---------------------------------------------------------------------------
# simplicial cones and Hilbert bases


@dataclass(frozen=True)
class SimplicialCone:
    generators: tuple

    def __post_init__(self):
        gens = tuple(primitive_part(g) for g in self.generators)
        if rank(gens) != len(gens):
            raise NotFullRankInOwnSpan("cone generators are linearly dependent")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def ambient_dim(self) -> int:
        return len(self.generators[0])

    def coefficients(self, x) -> tuple:
        """Coordinates of x in the generator basis (x must lie in the span)."""
        G = self.generators
        m, d = len(G), len(G[0])
        _, pivots = row_reduce(G)
        A = [[G[i][j] for i in range(m)] for j in pivots]
        lam = solve(A, [x[j] for j in pivots])
        if any(sum(lam[i] * G[i][j] for i in range(m)) != x[j] for j in range(d)):
            raise ValueError(f"{x} is outside the linear span of the cone")
        return lam

    def contains(self, x) -> bool:
        try:
            return all(l >= 0 for l in self.coefficients(x))
        except ValueError:
            return False

    def facet_halfspaces(self, apex) -> list[Halfspace]:
        """Inequalities of ``apex + C`` for a full-dimensional cone."""
        Ginv = inverse([list(col) for col in zip(*self.generators)])
        return [Halfspace.make(row, dot(row, apex)) for row in Ginv]


@dataclass(frozen=True)
class HilbertBasis:
    cone: SimplicialCone
    elements: tuple
    heights: tuple

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.cone.generators],
                "elements": [list(e) for e in self.elements],
                "heights": [str(h) for h in self.heights]}


def box_points(C: SimplicialCone, closed: bool = True) -> list[tuple]:
    """Nonzero lattice points of the fundamental parallelepiped of C."""
    G = C.generators
    m, d = len(G), len(G[0])
    K = integer_kernel(G, d)
    B = integer_kernel(K, d) if K else [tuple(int(i == j) for j in range(d)) for i in range(d)]
    # generators in B-coordinates
    _, piv = row_reduce(B)
    Acols = [[B[i][j] for i in range(m)] for j in piv]
    A = [to_int_vector(solve(Acols, [g[j] for j in piv])) for g in G]
    H, _ = hnf(A)
    diag = [H[i][i] for i in range(m)]
    pts = set()
    for y in itertools.product(*[range(h) for h in diag]):
        p = [0] * d
        for yi, b in zip(y, B):
            if yi:
                p = [a + yi * bi for a, bi in zip(p, b)]
        lam = C.coefficients(p)
        frac = [l - math.floor(l) for l in lam]
        q = tuple(int(sum(f * g[j] for f, g in zip(frac, G))) for j in range(d))
        zero_idx = [i for i, f in enumerate(frac) if f == 0]
        subsets = itertools.chain.from_iterable(
            itertools.combinations(zero_idx, r) for r in range(len(zero_idx) + 1)) if closed else [()]
        for S in subsets:
            x = q
            for i in S:
                x = tuple(a + b for a, b in zip(x, G[i]))
            if any(x):
                pts.add(x)
    return sorted(pts)


def hilbert_basis(C: SimplicialCone) -> HilbertBasis:
    """Minimal additive generators of ``C ∩ Z^d`` with normalized heights."""
    cands = box_points(C, closed=True)
    coeffs = {x: C.coefficients(x) for x in cands}
    cands.sort(key=lambda x: (sum(coeffs[x]), x))
    basis = []
    for z in cands:
        lz = coeffs[z]
        if any(all(a >= b for a, b in zip(lz, coeffs[h])) for h in basis):
            continue
        basis.append(z)
    heights = tuple(sum(coeffs[h]) for h in basis)
    return HilbertBasis(C, tuple(basis), heights)


def corner_cone(P: Polytope, v) -> SimplicialCone:
    return SimplicialCone(tuple(edge_directions(P, v)))


def gauge_k(P: Polytope) -> Fraction:
    """Largest normalized Hilbert-basis height over all corner cones of P."""
    if not is_simple(P):
        raise NotSimple("corner cones of a non-simple polytope are not simplicial")
    return max(max(hilbert_basis(corner_cone(P, v)).heights) for v in P.vertices)
