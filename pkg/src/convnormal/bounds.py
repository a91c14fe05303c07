"""Edge-length bounds for convex normality and integral closedness, and the
exact height gauge of hyperplanes avoiding the interior of the standard
simplex.  Distances are kept squared so everything stays rational."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BadParams
from .exactnum import Halfspace, as_fraction, dot, linprog


def _check(d, k=None):
    if not isinstance(d, int) or d < 1:
        raise BadParams("d must be a positive integer")
    if k is not None:
        k = as_fraction(k)
        if k < 2:
            raise BadParams("k must be at least 2")
    return k


def cn_closed_bound(d: int, k) -> Fraction:
    """Edge length ``d^2 (d+1) k / 2`` that forces k-convex-normality."""
    k = _check(d, k)
    return Fraction(d * d * (d + 1)) * k / 2


def ic_bound(d: int) -> Fraction:
    _check(d)
    return Fraction(2 * d * d * (d + 1))


def simplex_bound(d: int) -> Fraction:
    _check(d)
    return Fraction(d * (d + 1))


def cn_recursive_bound(d: int, k) -> tuple[Fraction, Fraction, list]:
    """Upper bounds for cn(d, k) and bcn(d, k) from the dimension recursion.

    Returns ``(cn, bcn, trace)``; the trace lists every ``(d, k, cn, bcn)``
    evaluated, innermost first.  For d = 1 there is no boundary bound and
    ``bcn`` is reported equal to ``cn``.
    """
    k = _check(d, k)
    trace = []

    def rec(d, k):
        if d == 1:
            trace.append((1, k, Fraction(1), Fraction(1)))
            return Fraction(1), Fraction(1)
        inner, _ = rec(d - 1, k + (k - 1) / d)
        bcn = Fraction(d + 1, d) * inner
        cn = max(k * d * (d + 1), bcn)
        trace.append((d, k, cn, bcn))
        return cn, bcn

    cn, bcn = rec(d, k)
    return cn, bcn, trace


def cn1_lower_bound(k) -> Fraction:
    """Known lower bound ``(k-2)/(2(k-1))`` for cn(1, k)."""
    k = as_fraction(k)
    return (k - 2) / (2 * (k - 1))


@dataclass
class BoundEntry:
    cn_upper: Fraction
    bcn_upper: Fraction
    closed_form: Fraction


@dataclass
class BoundTable:
    entries: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, ds, ks) -> "BoundTable":
        t = cls()
        for d in ds:
            for k in ks:
                cn, bcn, _ = cn_recursive_bound(d, k)
                closed = cn_closed_bound(d, k)
                assert 0 < cn <= closed
                t.entries[(d, as_fraction(k))] = BoundEntry(cn, bcn, closed)
        for k in ks:
            lo = cn1_lower_bound(k)
            assert lo <= 1
            t.metadata[f"cn(1,{as_fraction(k)}) lower"] = lo
        return t

    def rows(self) -> list[dict]:
        out = []
        for (d, k), e in sorted(self.entries.items()):
            out.append({
                "d": d, "k": str(k), "closed_form": str(e.closed_form),
                "recursive_cn": str(e.cn_upper), "recursive_bcn": str(e.bcn_upper),
                "closed_form_approx": f"{float(e.closed_form):.4f}",
                "recursive_cn_approx": f"{float(e.cn_upper):.4f}",
            })
        return out


def height_gauge_exact(d: int) -> tuple[Fraction, tuple]:
    """Squared min-max vertex distance for hyperplanes through 0 avoiding the
    interior of the standard simplex, and the extremal normal.

    After sorting the squared unit-normal coordinates ``a_1 <= ... <= a_d``
    (summing to 1) the largest vertex distance is ``a_d``; minimizing it is a
    small LP.
    """
    _check(d)
    cons = [Halfspace(tuple(int(j == 0) for j in range(d)), 0)]
    for i in range(d - 1):
        cons.append(Halfspace(tuple(1 if j == i + 1 else -1 if j == i else 0 for j in range(d)), 0))
    ones = tuple(1 for _ in range(d))
    cons += [Halfspace(ones, 1), Halfspace(tuple(-1 for _ in range(d)), -1)]
    obj = tuple(int(j == d - 1) for j in range(d))
    value, _ = linprog(obj, cons, d, maximize=False)
    return value, ones


def max_sq_vertex_distance(normal, offset) -> Fraction:
    """Largest squared distance from a vertex of the standard simplex to
    the hyperplane ``normal . x = offset``."""
    nn = dot(normal, normal)
    verts = [tuple(0 for _ in normal)] + [tuple(int(i == j) for j in range(len(normal))) for i in range(len(normal))]
    return max(Fraction((dot(normal, v) - offset) ** 2, nn) for v in verts)


@dataclass
class GaugeReport:
    d: int
    trials: int
    seed: int
    bound: Fraction
    min_observed: Optional[Fraction]
    violations: int

    def to_json(self) -> dict:
        return {"d": self.d, "trials": self.trials, "seed": self.seed, "bound": str(self.bound),
                "min_observed": None if self.min_observed is None else str(self.min_observed),
                "violations": self.violations}


def height_gauge_falsify(d: int, trials: int, seed: int = 0, box: int = 20) -> GaugeReport:
    """Random rational hyperplanes slid until they support the standard
    simplex; each must leave some vertex at squared distance >= 1/d."""
    if trials < 1:
        raise BadParams("trials must be positive")
    bound, _ = height_gauge_exact(d)
    rng = np.random.Generator(np.random.PCG64(seed))
    lowest, bad = None, 0
    samples = rng.integers(-box, box + 1, size=(trials, d))
    for row in samples:
        n = tuple(int(a) for a in row)
        if not any(n):
            n = tuple(1 for _ in range(d))
        # touch the simplex from the side where it lies in n.x >= min
        offset = min([0] + list(n))
        q = max_sq_vertex_distance(n, offset)
        if q < bound:
            bad += 1
        if lowest is None or q < lowest:
            lowest = q
    return GaugeReport(d, trials, seed, bound, lowest, bad)
