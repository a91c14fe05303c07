"""Exact rational and integer linear algebra.

Scalars are :class:`fractions.Fraction`; vectors are tuples of ``int`` or
``Fraction``; matrices are lists of row lists.  Nothing in here touches
floating point.

Hermite normal forms are row-style: ``H = U @ M`` with ``U`` unimodular,
``H`` in row echelon form with positive pivots and the entries above each
pivot reduced into ``[0, pivot)``.  Zero rows of ``H`` sit at the bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ZeroVector

Rational = Fraction


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; pass a string or Fraction")
    return Fraction(x)


def qvec(xs: Iterable) -> tuple:
    return tuple(as_fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vadd(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_vector(v: Sequence) -> tuple:
    return tuple(int(Fraction(x)) for x in v)


def lcm_denominators(v: Iterable) -> int:
    m = 1
    for x in v:
        m = math.lcm(m, Fraction(x).denominator)
    return m


def primitive_part(v: Sequence) -> tuple:
    """Return the primitive integer vector pointing in the direction of ``v``.

    Rational input is first cleared of denominators.
    """
    scale = lcm_denominators(v)
    ints = [int(Fraction(x) * scale) for x in v]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        raise ZeroVector("primitive part of the zero vector is undefined")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# dense rational linear algebra


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of ``{x : rows @ x = 0}`` as primitive integer vectors."""
    R, pivots = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(primitive_part(x))
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[tuple]:
    """Solve the square nonsingular system ``A x = b``; None if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(M[i][n] for i in range(n))


def det(A: Sequence[Sequence]):
    """Exact determinant (Fraction; integral input gives an integral value)."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        result *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return sign * result


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    cols = [solve(A, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    if any(c is None for c in cols):
        raise ZeroDivisionError("singular matrix")
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*A)]


def matvec(A: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(dot(row, x) for row in A)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[dot(r, c) for c in Bt] for r in A]


# ---------------------------------------------------------------------------
# integer normal forms


def hnf(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.  Returns ``(H, U)`` with ``H = U @ M``."""
    H = [[int(x) for x in row] for row in M]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c] != 0:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


def snf(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, each dividing the next."""
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t] != 0:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j] != 0:
                        changed = True
            if changed:
                # move the smallest nonzero entry of row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t] != 0]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j] != 0]
                _, pi, pj = min(cand)
                A[t], A[pi] = A[pi], A[t]
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p != 0), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> list[tuple]:
    """Lattice basis of ``{x in Z^ncols : M x = 0}``."""
    if not M:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    H, U = hnf(transpose(M))
    return [tuple(U[i]) for i in range(len(H)) if not any(H[i])]


# ---------------------------------------------------------------------------
# half-spaces, regions, exact LP


@dataclass(frozen=True)
class Halfspace:
    """``{x : normal . x >= offset}``, or ``>`` when ``strict``."""

    normal: tuple
    offset: Fraction
    strict: bool = False

    @classmethod
    def make(cls, normal: Sequence, offset, strict: bool = False) -> "Halfspace":
        """Scale a rational inequality to a primitive integer normal."""
        normal = qvec(normal)
        offset = as_fraction(offset)
        prim = primitive_part(normal)
        k = next(p / q for p, q in zip(prim, normal) if q != 0)
        return cls(prim, offset * k, strict)

    def value(self, x: Sequence):
        return dot(self.normal, x) - self.offset

    def contains(self, x: Sequence) -> bool:
        v = self.value(x)
        return v > 0 if self.strict else v >= 0

    def complement(self) -> "Halfspace":
        """The other side, strict iff this one is not."""
        return Halfspace(tuple(-a for a in self.normal), -self.offset, not self.strict)

    def shifted(self, t: Sequence) -> "Halfspace":
        """Image under translation by ``t``."""
        return Halfspace(self.normal, self.offset + dot(self.normal, t), self.strict)


@dataclass(frozen=True)
class Region:
    """Conjunction of (possibly strict) half-spaces in ``ambient_dim`` variables."""

    ambient_dim: int
    constraints: tuple = ()
    provenance: tuple = field(default=(), compare=False)

    def contains(self, x: Sequence) -> bool:
        return all(h.contains(x) for h in self.constraints)

    def add(self, h: Halfspace, tag: str = "") -> "Region":
        return Region(self.ambient_dim, self.constraints + (h,), self.provenance + (tag,))


def _simplex_max(c, A, b):
    """Maximize ``c.y`` s.t. ``A y <= b``, ``y >= 0`` with Bland's rule.

    Returns ``("optimal", value, y)``, ``("infeasible", None, None)`` or
    ``("unbounded", None, None)``.
    """
    m, n = len(A), len(c)
    T = [[Fraction(x) for x in row] for row in A]
    rhs = [Fraction(x) for x in b]
    N = list(range(n))
    B = list(range(n, n + m))

    def pivot(r, s, obj, z):
        piv = T[r][s]
        row = [x / piv for x in T[r]]
        row[s] = 1 / piv
        rr = rhs[r] / piv
        T[r] = row
        rhs[r] = rr
        for i in range(len(T)):
            if i == r:
                continue
            f = T[i][s]
            if f == 0:
                continue
            Ti = T[i]
            for j in range(len(Ti)):
                if j != s and row[j] != 0:
                    Ti[j] -= f * row[j]
            Ti[s] = -f * row[s]
            rhs[i] -= f * rr
        f = obj[s]
        if f != 0:
            for j in range(len(obj)):
                if j != s and row[j] != 0:
                    obj[j] -= f * row[j]
            obj[s] = -f * row[s]
            z += f * rr
        B[r], N[s] = N[s], B[r]
        return z

    def run(obj, z):
        while True:
            s = None
            for j in sorted(range(len(N)), key=lambda j: N[j]):
                if obj[j] > 0:
                    s = j
                    break
            if s is None:
                return "optimal", z
            r = None
            best = None
            for i in range(len(T)):
                if T[i][s] > 0:
                    ratio = rhs[i] / T[i][s]
                    if best is None or ratio < best or (ratio == best and B[i] < B[r]):
                        best, r = ratio, i
            if r is None:
                return "unbounded", z
            z = pivot(r, s, obj, z)

    if m and min(rhs) < 0:
        aux = n + m
        for row in T:
            row.append(Fraction(-1))
        N.append(aux)
        obj = [Fraction(0)] * n + [Fraction(-1)]
        r = min(range(m), key=lambda i: rhs[i])
        z = pivot(r, n, obj, Fraction(0))
        status, z = run(obj, z)
        if z < 0:
            return "infeasible", None, None
        if aux in B:
            r = B.index(aux)
            s = next((j for j in range(len(N)) if T[r][j] != 0), None)
            if s is None:
                # redundant row pinned at aux = 0
                del T[r], rhs[r], B[r]
            else:
                pivot(r, s, obj, z)
        s = N.index(aux)
        for row in T:
            del row[s]
        del N[s]
    obj = [Fraction(0)] * n
    z = Fraction(0)
    pos_n = {v: j for j, v in enumerate(N)}
    pos_b = {v: i for i, v in enumerate(B)}
    for k in range(n):
        ck = Fraction(c[k])
        if ck == 0:
            continue
        if k in pos_n:
            obj[pos_n[k]] += ck
        else:
            i = pos_b[k]
            z += ck * rhs[i]
            for j in range(n):
                obj[j] -= ck * T[i][j]
    status, z = run(obj, z)
    if status == "unbounded":
        return "unbounded", None, None
    y = [Fraction(0)] * n
    for i, v in enumerate(B):
        if v < n:
            y[v] = rhs[i]
    return "optimal", z, tuple(y)


def linprog(objective: Sequence, constraints: Sequence[Halfspace], dim: int, maximize: bool = True):
    """Optimize ``objective . x`` over the closure of the constraints, x free.

    Strictness flags are ignored here (closure).  Returns ``(value, x)``;
    ``None`` if infeasible; raises ``ValueError`` if unbounded.
    """
    sgn = 1 if maximize else -1
    c = [sgn * as_fraction(a) for a in objective] + [-sgn * as_fraction(a) for a in objective]
    A, b = [], []
    for h in constraints:
        a = list(h.normal)
        A.append([-x for x in a] + a)
        b.append(-h.offset)
    status, val, y = _simplex_max(c, A, b)
    if status == "infeasible":
        return None
    if status == "unbounded":
        raise ValueError("objective unbounded over the region")
    x = tuple(y[i] - y[dim + i] for i in range(dim))
    return sgn * val, x


def max_slack(constraints: Sequence[Halfspace], dim: int):
    """Maximize a shared slack ``t <= 1`` over the strict constraints.

    Returns ``(t, x)`` where ``x`` satisfies every non-strict constraint and
    every strict one with margin ``t``; ``None`` if even the closure is empty.
    """
    c = [0] * (2 * dim) + [1]
    A, b = [], []
    for h in constraints:
        a = list(h.normal)
        A.append([-x for x in a] + a + [1 if h.strict else 0])
        b.append(-h.offset)
    A.append([0] * (2 * dim) + [1])
    b.append(1)
    status, val, y = _simplex_max(c, A, b)
    if status != "optimal":
        return None
    x = tuple(y[i] - y[dim + i] for i in range(dim))
    return val, x


def lp_feasible(region: Region) -> Optional[tuple]:
    """Exact feasibility of a mixed strict/non-strict system.

    Returns a rational point satisfying every constraint (strict ones
    strictly) or ``None`` when the system has no solution.
    """
    res = max_slack(region.constraints, region.ambient_dim)
    if res is None:
        return None
    t, x = res
    if any(h.strict for h in region.constraints) and t <= 0:
        return None
    return x


def fourier_motzkin_project(region: Region, axis: int) -> Region:
    """Eliminate variable ``axis``; the result lives in one fewer variable."""
    zero, pos, neg = [], [], []
    for h in region.constraints:
        a = h.normal[axis]
        (zero if a == 0 else pos if a > 0 else neg).append(h)

    def drop(v):
        return tuple(v[:axis]) + tuple(v[axis + 1:])

    out = []
    seen = set()

    def emit(normal, offset, strict):
        if not any(normal):
            if (offset < 0) or (offset == 0 and not strict):
                return  # tautology
            h = Halfspace(tuple(0 for _ in normal), Fraction(offset), strict)
        else:
            h = Halfspace.make(normal, offset, strict)
        if h not in seen:
            seen.add(h)
            out.append(h)

    for h in zero:
        emit(drop(h.normal), h.offset, h.strict)
    for p in pos:
        for q in neg:
            ap, aq = Fraction(p.normal[axis]), Fraction(-q.normal[axis])
            normal = tuple(aq * x + ap * y for x, y in zip(p.normal, q.normal))
            emit(drop(normal), aq * p.offset + ap * q.offset, p.strict or q.strict)
    return Region(region.ambient_dim - 1, tuple(out))


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational of least denominator in ``[lo, hi]`` (continued-fraction walk)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if fl == lo or fl + 1 <= hi:
        return Fraction(fl if fl == lo else fl + 1)
    # lo, hi share integer part fl and lo is not an integer
    return fl + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl))
