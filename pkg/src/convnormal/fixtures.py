"""Generators for the standard test polytopes and random instances.

Randomness always comes from ``numpy.random.Generator(PCG64(seed))``.
"""

from __future__ import annotations

import numpy as np

from .errors import BadParams
from .exactnum import as_fraction, det, matmul
from .formats import Fixture
from .latticepts import enumerate_lattice_points
from .polytope import (Polytope, cube, from_vertices, is_simple, is_simplex,
                       is_smooth, is_unimodular_simplex, simplex,
                       unimodular_image)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def reeve(q: int) -> Polytope:
    if q < 1:
        raise BadParams("q must be positive")
    return from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, q)])


def hollow3() -> Polytope:
    return from_vertices([(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)])


def random_unimodular(d: int, rng: np.random.Generator, steps: int = 6) -> list[list[int]]:
    """Product of random elementary matrices and a random signed permutation."""
    U = [[int(i == j) for j in range(d)] for i in range(d)]
    if d == 1:
        return [[int(rng.choice([-1, 1]))]]
    for _ in range(steps):
        i, j = (int(x) for x in rng.choice(d, size=2, replace=False))
        m = int(rng.integers(-2, 3))
        E = [[int(a == b) for b in range(d)] for a in range(d)]
        E[i][j] = m
        U = matmul(E, U)
    perm = [int(x) for x in rng.permutation(d)]
    signs = [int(s) for s in rng.choice([-1, 1], size=d)]
    U = [[signs[i] * U[perm[i]][j] for j in range(d)] for i in range(d)]
    assert abs(det(U)) == 1
    return U


def random_lattice_polytope(d: int, n: int, box: int, rng: np.random.Generator) -> Polytope:
    """Hull of n random points of ``{0..box}^d``, redrawn until full-dimensional."""
    if n < d + 1 or box < 1:
        raise BadParams("need n >= d+1 and box >= 1")
    for _ in range(1000):
        pts = [tuple(int(x) for x in row) for row in rng.integers(0, box + 1, size=(n, d))]
        P = from_vertices(pts)
        if P.dim == d:
            return P
    raise BadParams("could not draw a full-dimensional polytope")


def skew(P: Polytope, rng: np.random.Generator, shift_box: int = 3) -> Polytope:
    """Random unimodular image plus random integral translation."""
    d = P.ambient_dim
    U = random_unimodular(d, rng)
    t = tuple(int(x) for x in rng.integers(-shift_box, shift_box + 1, size=d))
    return unimodular_image(P, U, t)


def is_empty_simplex(P: Polytope) -> bool:
    return is_simplex(P) and len(enumerate_lattice_points(P)) == len(P.vertices)


TAG_PREDICATES = {
    "lattice": lambda P: P.is_lattice,
    "simplex": is_simplex,
    "simple": is_simple,
    "smooth": lambda P: P.is_lattice and is_smooth(P),
    "unimodular": lambda P: P.is_lattice and is_unimodular_simplex(P),
    "empty": is_empty_simplex,
    "full": lambda P: P.dim == P.ambient_dim,
}


def check_tags(F: Fixture) -> list[str]:
    """Declared tags whose predicate fails (unknown tags are ignored)."""
    return [t for t in F.tags if t in TAG_PREDICATES and not TAG_PREDICATES[t](F.polytope)]


def _smooth_tags(P: Polytope) -> list[str]:
    tags = [t for t in ("lattice", "simplex", "simple", "smooth", "unimodular", "full")
            if TAG_PREDICATES[t](P)]
    return tags


def gen_fixture(kind: str, **kw) -> Fixture:
    if kind == "dilated_simplex":
        d, c = int(kw.get("d", 2)), as_fraction(kw.get("c", 1))
        if d < 1 or c <= 0:
            raise BadParams("need d >= 1 and c > 0")
        P = simplex(d, c)
        return Fixture(f"simplex{d}x{c}", P, _smooth_tags(P))
    if kind == "reeve":
        q = int(kw.get("q", 2))
        return Fixture(f"reeve{q}", reeve(q), ["lattice", "simplex", "empty", "reeve", "full"])
    if kind == "hollow3":
        return Fixture("hollow3", hollow3(), ["lattice", "simplex", "empty", "hollow", "full"])
    if kind == "cube":
        d, l = int(kw.get("d", 2)), as_fraction(kw.get("l", 1))
        if d < 1 or l <= 0:
            raise BadParams("need d >= 1 and l > 0")
        P = cube(d, l)
        return Fixture(f"cube{d}x{l}", P, _smooth_tags(P))
    if kind == "random":
        d, n, box, seed = (int(kw.get(k, v)) for k, v in (("d", 2), ("n", 5), ("box", 4), ("seed", 0)))
        P = random_lattice_polytope(d, n, box, rng_for(seed))
        return Fixture(f"random-d{d}-n{n}-b{box}-s{seed}", P, ["lattice", "random", "full"])
    if kind == "skew":
        base = kw["fixture"]
        seed = int(kw.get("seed", 0))
        P = skew(base.polytope, rng_for(seed))
        keep = [t for t in base.tags if t != "random"]
        return Fixture(f"{base.name}-skew{seed}", P, keep + ["skew"])
    raise BadParams(f"unknown fixture kind {kind!r}")
