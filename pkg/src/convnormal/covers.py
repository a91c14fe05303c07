"""Deciding whether a polytope is covered by a finite union of polytopes, and
the cover families built on top of that decision.

The exact decision works on open regions.  Pieces are closed, so the part of
the target they miss is relatively open: either it is empty or it contains an
open set.  The search therefore keeps every constraint strict, starting from
the interior of the target, and repeatedly carves out a piece that contains
the current max-slack point of the region.  Carving a piece with facets
``f_1..f_m`` yields the children ``f_1 > 0, ..., f_{j-1} > 0, f_j < 0``, which
partition the region outside the piece up to a null set.  A region whose
max-slack point lies in no piece is a counterexample.
"""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import (BudgetExceeded, COutOfRange, DegenerateRegion,
                     EmptyTarget, FacetNotVisible, GridOutOfRange, NotASimplex)
from .exactnum import (Halfspace, as_fraction, dot, linprog, max_slack,
                       simplest_rational, vadd, vscale, vsub)
from .latticepts import SimplicialCone, enumerate_lattice_points
from .polytope import (Polytope, alg_width, contains_point, dilate,
                       edge_directions, facet_layer, from_halfspaces,
                       from_vertices, get_facet, is_simplex, min_edge_length,
                       parallelepiped, pulling_triangulation, translate,
                       visible_facets)

DEFAULT_BUDGET = 200_000


@dataclass
class CoverReport:
    """Outcome of a cover decision.

    ``covered`` is None only in montecarlo mode when no counterexample was
    sampled.
    """

    covered: Optional[bool]
    witness: Optional[tuple] = None
    pieces_used: int = 0
    regions_explored: int = 0
    mode: str = "exact"
    c: Optional[Fraction] = None
    details: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "covered": self.covered,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
            "mode": self.mode,
            "regions_explored": self.regions_explored,
            "pieces_used": self.pieces_used,
            "c": None if self.c is None else str(self.c),
            "notes": list(self.notes),
            "details": [r.to_json() for r in self.details],
        }


# ---------------------------------------------------------------------------
# exact search


def _tighten(cons: dict, h: Halfspace) -> Optional[dict]:
    """Add ``h`` keeping one (tightest) constraint per normal; None if the
    result is trivially empty because of an opposite parallel constraint."""
    opp = cons.get(tuple(-a for a in h.normal))
    if opp is not None:
        # h: n.x >= b, opp: -n.x >= b'  =>  b <= n.x <= -b'
        hi = -opp.offset
        if h.offset > hi or (h.offset == hi and (h.strict or opp.strict)):
            return None
    cur = cons.get(h.normal)
    if cur is not None and (cur.offset > h.offset or (cur.offset == h.offset and (cur.strict or not h.strict))):
        return cons
    new = dict(cons)
    new[h.normal] = h
    return new


def _depth(piece, w) -> Optional[Fraction]:
    """Squared Euclidean depth of w inside a piece, None when w is outside."""
    best = None
    for n, b, nn in piece:
        v = dot(n, w) - b
        if v < 0:
            return None
        q = v * v / nn
        if best is None or q < best:
            best = q
    return best


def _prepare(pieces: Sequence[Polytope]):
    out = []
    for P in pieces:
        out.append(tuple((F.normal, F.offset, dot(F.normal, F.normal)) for F in P.facets))
    return out


def _round_witness(cons: list, equations: list, t: Fraction, d: int) -> tuple:
    """Smallest-denominator point, coordinate by coordinate, inside the
    region shrunk by half the optimal slack."""
    closed = [Halfspace(h.normal, h.offset + (t / 2 if h.strict else 0)) for h in cons]
    closed += equations
    point = []
    for i in range(d):
        e = tuple(int(j == i) for j in range(d))
        lo = linprog(e, closed, d, maximize=False)[0]
        hi = linprog(e, closed, d, maximize=True)[0]
        val = simplest_rational(lo, hi)
        point.append(val)
        closed = closed + [Halfspace(e, val), Halfspace(tuple(-a for a in e), -val)]
    return tuple(point)


class _Search:
    def __init__(self, d, pieces, equations, budget, order="depth"):
        self.d = d
        self.pieces = pieces
        self.equations = list(equations)
        self.budget = budget
        self.order = order
        self.explored = 0
        self.used = set()

    def _pick(self, w) -> Optional[int]:
        best, best_idx = None, None
        indices = range(len(self.pieces))
        if self.order == "reverse":
            indices = reversed(indices)
        for i in indices:
            dep = _depth(self.pieces[i], w)
            if dep is None:
                continue
            if self.order != "depth":
                return i
            if best is None or dep > best:
                best, best_idx = dep, i
        return best_idx

    def solve_node(self, cons: dict):
        """Returns (t, w) for a live region or None."""
        self.explored += 1
        if self.explored > self.budget:
            raise BudgetExceeded(f"explored more than {self.budget} regions")
        res = max_slack(list(cons.values()) + self.equations, self.d)
        if res is None or res[0] <= 0:
            return None
        return res

    def children(self, cons: dict, idx: int) -> list[dict]:
        out = []
        kept = cons
        for n, b, _ in self.pieces[idx]:
            outside = Halfspace(tuple(-a for a in n), -b, True)
            child = _tighten(kept, outside)
            if child is not None:
                out.append(child)
            kept = _tighten(kept, Halfspace(n, b, True))
            if kept is None:
                break
        return out

    def leaf_witness(self, cons: dict, t, w) -> tuple:
        try:
            p = _round_witness(list(cons.values()), self.equations, t, self.d)
        except (TypeError, ValueError):
            return w
        if all(_depth(pc, p) is None for pc in self.pieces) and all(h.contains(p) for h in cons.values()):
            return p
        return w

    def dfs(self, cons: dict) -> Optional[tuple]:
        stack = [cons]
        while stack:
            node = stack.pop()
            res = self.solve_node(node)
            if res is None:
                continue
            t, w = res
            idx = self._pick(w)
            if idx is None:
                return self.leaf_witness(node, t, w)
            self.used.add(idx)
            stack.extend(reversed(self.children(node, idx)))
        return None


def _subtree(args):
    d, pieces, equations, budget, order, cons = args
    s = _Search(d, pieces, equations, budget, order)
    try:
        wit = s.dfs(cons)
    except BudgetExceeded:
        return ("budget", None, s.explored, s.used)
    return ("ok", wit, s.explored, s.used)


def check_cover(target: Polytope, pieces: Sequence[Polytope], mode: str = "exact",
                budget: int = DEFAULT_BUDGET, workers: int = 1, order: str = "depth",
                seed: int = 0) -> CoverReport:
    """Decide ``target ⊆ union(pieces)``.

    ``mode="exact"`` is a decision procedure; ``budget`` caps the number of
    regions explored.  ``mode="montecarlo"`` samples ``budget`` seeded points
    and can only refute.  ``order`` changes which containing piece is carved
    first and never the verdict.
    """
    d = target.ambient_dim
    full = [P for P in pieces if P.dim == d]
    if mode in ("montecarlo", "mc"):
        return _montecarlo(target, full, budget, seed)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if target.dim < d:
        raise EmptyTarget("target has empty interior")
    equations = list(target.halfspaces()[len(target.facets):])
    root = {}
    for F in target.facets:
        root = _tighten(root, Halfspace(F.normal, F.offset, True))
    search = _Search(d, _prepare(full), equations, budget, order)
    try:
        if workers <= 1:
            wit = search.dfs(root)
            explored, used = search.explored, search.used
        else:
            wit, explored, used = _parallel(search, root, workers)
    except BudgetExceeded as exc:
        rep = CoverReport(None, None, len(search.used), search.explored, "exact",
                          notes=["budget exceeded; verdict unknown"])
        raise BudgetExceeded(str(exc), rep) from None
    report = CoverReport(wit is None, wit, len(used), explored, "exact")
    if wit is not None:
        _assert_witness(target, full, wit)
    return report


def _parallel(search: _Search, root: dict, workers: int):
    res = search.solve_node(root)
    if res is None:
        return None, search.explored, set()
    t, w = res
    idx = search._pick(w)
    if idx is None:
        return search.leaf_witness(root, t, w), search.explored, set()
    kids = search.children(root, idx)
    jobs = [(search.d, search.pieces, search.equations, search.budget, search.order, k) for k in kids]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_subtree, jobs))
    explored = search.explored + sum(r[2] for r in results)
    used = {idx}.union(*[r[3] for r in results]) if results else {idx}
    for status, wit, _, _ in results:
        if status == "budget":
            raise BudgetExceeded("a subtree exceeded the region budget")
        if wit is not None:
            return wit, explored, used
    return None, explored, used


def _assert_witness(target: Polytope, pieces: Sequence[Polytope], w: tuple):
    assert contains_point(target, w), "witness outside target"
    for P in pieces:
        assert any(F.value(w) < 0 for F in P.facets), "witness inside a piece"


def _montecarlo(target: Polytope, pieces: Sequence[Polytope], samples: int, seed: int) -> CoverReport:
    rng = np.random.Generator(np.random.PCG64(seed))
    V = target.vertices
    for i in range(samples):
        weights = [int(x) for x in rng.integers(0, 1 << 16, size=len(V))]
        s = sum(weights)
        if s == 0:
            continue
        p = tuple(sum(Fraction(wt, s) * v[j] for wt, v in zip(weights, V)) for j in range(target.ambient_dim))
        if not any(contains_point(P, p) for P in pieces):
            return CoverReport(False, p, len(pieces), i + 1, "montecarlo")
    return CoverReport(None, None, len(pieces), samples, "montecarlo",
                       notes=["no counterexample found"])


# ---------------------------------------------------------------------------
# convex-normal families


@dataclass
class CnFamily:
    c: Fraction
    per_vertex: dict

    def translates(self) -> list[tuple]:
        return sorted({x for xs in self.per_vertex.values() for x in xs})


def cn_family(P: Polytope, c) -> CnFamily:
    """For each vertex v, the points of ``(c-1)P`` congruent to ``(c-1)v``."""
    c = as_fraction(c)
    if c < 1:
        raise ValueError("c must be at least 1")
    zero = tuple(Fraction(0) for _ in range(P.ambient_dim))
    if c == 1:
        return CnFamily(c, {v: [zero] for v in P.vertices})
    Q = dilate(P, c - 1)
    per = {}
    for v in P.vertices:
        shift = tuple(x - (x.numerator // x.denominator) for x in vscale(c - 1, v))
        per[v] = enumerate_lattice_points(Q, shift)
    return CnFamily(c, per)


def _cn_pieces(P: Polytope, c) -> list[Polytope]:
    return [translate(P, x) for x in cn_family(P, c).translates()]


def check_cn_at(P: Polytope, c, mode: str = "exact", **kw) -> CoverReport:
    """Is ``cP`` the union of the convex-normal translates ``x + P``?"""
    c = as_fraction(c)
    rep = check_cover(dilate(P, c), _cn_pieces(P, c), mode=mode, **kw)
    rep.c = c
    return rep


@dataclass
class CnSummary:
    k: Fraction
    grid: list
    reports: list
    notes: list = field(default_factory=lambda: [
        "finite c-grid: verdicts do not certify every rational c in [2, k]"])

    @property
    def holds(self) -> Optional[bool]:
        vals = [r.covered for r in self.reports]
        if any(v is False for v in vals):
            return False
        if any(v is None for v in vals):
            return None
        return True

    def to_json(self) -> dict:
        return {"k": str(self.k), "grid": [str(c) for c in self.grid], "holds": self.holds,
                "reports": [r.to_json() for r in self.reports], "notes": self.notes}


def default_grid(k) -> list:
    k = as_fraction(k)
    return sorted({Fraction(2), (2 + k) / 2, k})


def check_cn(P: Polytope, k, c_grid: Optional[Sequence] = None, mode: str = "exact", **kw) -> CnSummary:
    k = as_fraction(k)
    if k < 2:
        raise GridOutOfRange("k must be at least 2")
    grid = [as_fraction(c) for c in (c_grid if c_grid else default_grid(k))]
    if any(c < 2 or c > k for c in grid):
        raise GridOutOfRange("grid values must lie in [2, k]")
    return CnSummary(k, grid, [check_cn_at(P, c, mode=mode, **kw) for c in grid])


def bcn_epsilon(P: Polytope, F) -> Fraction:
    return alg_width(P, F) / (P.dim + 1)


def check_bcn_at(P: Polytope, c, F, mode: str = "exact", eps_alg=None, **kw) -> CoverReport:
    """Cover of the layer of cP along cF of algebraic thickness width_F(P)/(d+1)."""
    c = as_fraction(c)
    F = get_facet(P, F)
    eps = bcn_epsilon(P, F) if eps_alg is None else as_fraction(eps_alg)
    cF = Halfspace(F.normal, c * F.offset)
    target, _ = facet_layer(dilate(P, c), cF, eps)
    rep = check_cover(target, _cn_pieces(P, c), mode=mode, **kw)
    rep.c = c
    return rep


def check_bcn(P: Polytope, k, c_grid: Optional[Sequence] = None, mode: str = "exact", **kw) -> CnSummary:
    k = as_fraction(k)
    if k < 2:
        raise GridOutOfRange("k must be at least 2")
    grid = [as_fraction(c) for c in (c_grid if c_grid else default_grid(k))]
    if any(c < 2 or c > k for c in grid):
        raise GridOutOfRange("grid values must lie in [2, k]")
    reports = []
    for c in grid:
        for F in P.facets:
            reports.append(check_bcn_at(P, c, F, mode=mode, **kw))
    return CnSummary(k, grid, reports)


def check_vertex_homothety_cover(P: Polytope, c, variant: str = "high_c", **kw) -> CoverReport:
    """The homothety covers that hold for every rational polytope.

    ``high_c``: ``cP = U_v v + (c-1)P`` for c >= d+1.
    ``low_c``: ``cP = U_u u + P`` over vertices u of ``(c-1)P``, 1 <= c <= (d+1)/d.
    A negative verdict would be a counterexample to the known cover result and is flagged.
    """
    c = as_fraction(c)
    d = P.dim
    if variant == "high_c":
        if c < d + 1:
            raise COutOfRange(f"high_c needs c >= {d + 1}")
        Q = dilate(P, c - 1)
        pieces = [translate(Q, v) for v in P.vertices]
    elif variant == "low_c":
        if not (1 <= c <= Fraction(d + 1, d)):
            raise COutOfRange(f"low_c needs 1 <= c <= {Fraction(d + 1, d)}")
        pieces = [translate(P, vscale(c - 1, v)) for v in P.vertices]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    rep = check_cover(dilate(P, c), pieces, **kw)
    rep.c = c
    if rep.covered is False:
        rep.notes.append("COUNTEREXAMPLE: homothety cover failed where it must hold")
        warnings.warn("vertex homothety cover failed; this indicates a bug")
    return rep


# ---------------------------------------------------------------------------
# corner parallelepipeds


@dataclass
class PpdCover:
    boxes: list
    target: Polytope

    def polytopes(self) -> list[Polytope]:
        return [parallelepiped(b, e) for b, e in self.boxes]

    def to_json(self) -> dict:
        return {"boxes": [{"base": [str(x) for x in b], "edges": [list(e) for e in E]}
                          for b, E in self.boxes]}


def triangulate_corner_cone(P: Polytope, v) -> list[SimplicialCone]:
    """Simplicial cones on the edge directions at v that triangulate the
    corner cone (pulling triangulation)."""
    i = P.vertex_index(v)
    v = P.vertices[i]
    nbrs = P.neighbors(i)
    rays = edge_directions(P, v)
    facet_sets = []
    for F in P.facets_through(v):
        facet_sets.append(frozenset(k for k, j in enumerate(nbrs) if F.value(P.vertices[j]) == 0))
    simplices = pulling_triangulation(rays, facet_sets, P.dim, linear=True)
    return [SimplicialCone(tuple(rays[k] for k in s)) for s in simplices]


def corner_ppd_region(P: Polytope, v, C: SimplicialCone) -> PpdCover:
    """Translates ``v + sum a_i x_i + Box(C)`` (a in Z_+^d) contained in P."""
    v = P.vertices[P.vertex_index(v)]
    G = C.generators
    d = len(G)
    tops = []
    for i in range(d):
        m = max(C.coefficients(vsub(p, v))[i] for p in P.vertices)
        tops.append(max(-1, int(m // 1) - 1))
    rows = []
    for F in P.facets:
        s = [dot(F.normal, g) for g in G]
        rows.append((F.value(v), s, sum(min(0, x) for x in s)))
    boxes = []
    for a in itertools.product(*[range(t + 1) for t in tops]):
        if all(base + dot(a, s) + neg >= 0 for base, s, neg in rows):
            b = v
            for ai, g in zip(a, G):
                b = vadd(b, vscale(ai, g))
            boxes.append((b, G))
    for b, E in boxes:
        for bits in itertools.product((0, 1), repeat=d):
            corner = b
            for bit, e in zip(bits, E):
                if bit:
                    corner = vadd(corner, e)
            assert contains_point(P, corner)
    return PpdCover(boxes, P)


def corner_region(P: Polytope, v, l) -> Polytope:
    """P with the layers of thickness width_F(P)/(l(d+1)) along every facet
    visible from v removed (closure of the difference)."""
    l = as_fraction(l)
    if l < 1:
        raise ValueError("l must be at least 1")
    d = P.dim
    hs = list(P.facets)
    for F in visible_facets(P, v):
        hs.append(Halfspace(F.normal, F.offset + alg_width(P, F) / (l * (d + 1))))
    R = from_halfspaces(hs, P.ambient_dim, P.equations)
    if R is None or R.dim < d:
        raise DegenerateRegion("corner region is not full-dimensional")
    return R


def check_corner_cover(P: Polytope, v, l=1, **kw) -> CoverReport:
    """Is the corner region, within each triangulating cone C, covered by
    the corner parallelepipeds of C?"""
    l = as_fraction(l)
    d = P.dim
    v = P.vertices[P.vertex_index(v)]
    E = min_edge_length(P)
    notes = []
    if E < l * d * (d + 1):
        notes.append(f"edge-length hypothesis not met: E(P) = {E} < {l * d * (d + 1)}")
    region = corner_region(P, v, l)
    details = []
    explored = used = 0
    for C in triangulate_corner_cone(P, v):
        T = from_halfspaces(list(region.facets) + C.facet_halfspaces(v), P.ambient_dim)
        if T is None or T.dim < P.ambient_dim:
            continue
        ppd = corner_ppd_region(P, v, C)
        rep = check_cover(T, ppd.polytopes(), **kw)
        rep.notes.append(f"cone {list(map(list, C.generators))}: {len(ppd.boxes)} boxes")
        details.append(rep)
        explored += rep.regions_explored
        used += rep.pieces_used
    bad = next((r for r in details if r.covered is not True), None)
    covered = True if bad is None else bad.covered
    return CoverReport(covered, None if bad is None else bad.witness, used, explored,
                       details[0].mode if details else "exact", details=details, notes=notes)


def simplex_ppd_cover(P: Polytope, **kw) -> tuple[PpdCover, CoverReport]:
    """Cover of a simplex by corner parallelepipeds, with exact verification.

    Checks that the d+1 corner regions (homothetic copies with factor
    d/(d+1)) cover P and that each is covered by its boxes.
    """
    if not is_simplex(P) or P.dim != P.ambient_dim:
        raise NotASimplex("input must be a full-dimensional simplex")
    regions = [corner_region(P, v, 1) for v in P.vertices]
    first = check_cover(P, regions, **kw)
    first.notes.append("corner regions cover the simplex")
    details = [first]
    boxes = []
    for v in P.vertices:
        C = triangulate_corner_cone(P, v)[0]
        boxes.extend(corner_ppd_region(P, v, C).boxes)
        rep = check_corner_cover(P, v, 1, **kw)
        rep.notes.append(f"vertex {[str(x) for x in v]}")
        details.append(rep)
    bad = next((r for r in details if r.covered is not True), None)
    report = CoverReport(True if bad is None else bad.covered, None if bad is None else bad.witness,
                         len(boxes), sum(r.regions_explored for r in details),
                         details[0].mode, details=details)
    return PpdCover(boxes, P), report


def check_pyramid_layer_cover(P: Polytope, w, F, c, **kw) -> CoverReport:
    """Layer of c*conv(w, F) along cF, thickness dist(w, H_F)/(d+1), against the
    convex-normal translates of the whole polytope P."""
    c = as_fraction(c)
    F = get_facet(P, F)
    w = P.vertices[P.vertex_index(w)]
    if F.value(w) <= 0:
        raise FacetNotVisible("facet contains the apex")
    apex_dist = F.value(w)
    D = from_vertices([w] + [P.vertices[i] for i in P.facet_vertices(F)])
    eps = apex_dist / (P.dim + 1)
    target, _ = facet_layer(dilate(D, c), Halfspace(F.normal, c * F.offset), eps)
    rep = check_cover(target, _cn_pieces(P, c), **kw)
    rep.c = c
    return rep
