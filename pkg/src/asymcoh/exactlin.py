"""Exact rational linear algebra and small polyhedral primitives.

Everything here works on :class:`fractions.Fraction` entries held in plain
lists. Matrices are lists of rows. Nothing is ever converted to floating
point, so every answer is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Rational = Fraction


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


class OddDimension(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently carry binary rounding into an
    exact computation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vector(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(x) for x in xs)


def matrix(rows: Iterable[Iterable]) -> list[list[Fraction]]:
    out = [[to_fraction(x) for x in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionMismatch("ragged matrix")
    return out


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"length {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def bilinear(M: Sequence[Sequence[Fraction]], u, v) -> Fraction:
    """Return ``u^T M v``."""
    if len(M) != len(u) or len(M) != len(v):
        raise DimensionMismatch("form and vectors disagree in size")
    return sum((u[i] * dot(M[i], v) for i in range(len(u)) if u[i]), Fraction(0))


def matvec(M: Sequence[Sequence[Fraction]], v) -> tuple[Fraction, ...]:
    return tuple(dot(row, v) for row in M)


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _check_square(M) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("matrix is not square")
    return n


def is_symmetric(M) -> bool:
    n = _check_square(M)
    return all(M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


def is_antisymmetric(M) -> bool:
    n = _check_square(M)
    return all(M[i][j] == -M[j][i] for i in range(n) for j in range(i, n))


@dataclass(frozen=True)
class Signature:
    positives: int
    negatives: int
    zeros: int

    @property
    def dimension(self) -> int:
        return self.positives + self.negatives + self.zeros

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positives, self.negatives, self.zeros)


def signature(M) -> Signature:
    """Inertia of a rational symmetric matrix by symmetric elimination.

    Each step picks a nonzero diagonal pivot and clears its row and column
    by a congruence. When the whole remaining diagonal is zero but some
    off-diagonal entry ``a_ij`` is not, adding row/column ``j`` to row/column
    ``i`` produces the diagonal entry ``2 a_ij`` and elimination continues.
    """
    n = _check_square(M)
    if not is_symmetric(M):
        raise NotSymmetric("signature needs a symmetric matrix")
    A = [[to_fraction(x) for x in row] for row in M]
    active = list(range(n))
    pos = neg = 0
    while active:
        pivot = next((i for i in active if A[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and A[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            pivot = i
        p = A[pivot][pivot]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            f = A[i][pivot] / p
            if f:
                for k in active:
                    A[i][k] -= f * A[pivot][k]
            A[i][pivot] = Fraction(0)
        for k in active:
            A[pivot][k] = Fraction(0)
    return Signature(pos, neg, n - pos - neg)


def is_negative_definite(M) -> bool:
    s = signature(M)
    return s.negatives == s.dimension


def is_positive_definite(M) -> bool:
    s = signature(M)
    return s.positives == s.dimension


def solve(M, rhs) -> tuple[Fraction, ...]:
    """Solve ``M x = rhs`` for square nonsingular ``M`` (Gauss-Jordan)."""
    n = _check_square(M)
    if len(rhs) != n:
        raise DimensionMismatch("right-hand side has the wrong length")
    A = [[to_fraction(x) for x in row] + [to_fraction(b)] for row, b in zip(M, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return tuple(A[r][n] for r in range(n))


def solve_symmetric(M, rhs) -> tuple[Fraction, ...]:
    if not is_symmetric(M):
        raise NotSymmetric("solve_symmetric needs a symmetric matrix")
    return solve(M, rhs)


def det(M) -> Fraction:
    n = _check_square(M)
    A = [[to_fraction(x) for x in row] for row in M]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return d


def rank(rows) -> int:
    A = [[to_fraction(x) for x in row] for row in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, m):
            if A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def nullspace(rows, n: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : row . x = 0 for every row}`` in dimension ``n``."""
    A = [[to_fraction(x) for x in row] for row in rows]
    if any(len(row) != n for row in A):
        raise DimensionMismatch("row length differs from ambient dimension")
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol]
        basis.append(tuple(v))
    return basis


def pfaffian(E) -> Fraction:
    """Pfaffian of a rational antisymmetric matrix.

    Uses congruences that add multiples of one row/column pair to another,
    which leave the Pfaffian unchanged, until the matrix is block diagonal
    with 2x2 blocks. Row/column swaps flip the sign.
    """
    n = _check_square(E)
    if n % 2:
        raise OddDimension(f"Pfaffian of a {n}x{n} matrix")
    if not is_antisymmetric(E):
        raise ValueError("Pfaffian needs an antisymmetric matrix")
    A = [[to_fraction(x) for x in row] for row in E]
    pf = Fraction(1)
    for k in range(0, n, 2):
        p = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k + 1:
            A[k + 1], A[p] = A[p], A[k + 1]
            for row in A:
                row[k + 1], row[p] = row[p], row[k + 1]
            pf = -pf
        a = A[k][k + 1]
        pf *= a
        for j in range(k + 2, n):
            c = -A[k][j] / a
            if c:
                for row in A:
                    row[j] += c * row[k + 1]
                A[j] = [x + c * y for x, y in zip(A[j], A[k + 1])]
        for j in range(k + 2, n):
            c = A[k + 1][j] / a
            if c:
                for row in A:
                    row[j] += c * row[k]
                A[j] = [x + c * y for x, y in zip(A[j], A[k])]
    return pf


# --- exact linear programming ------------------------------------------------


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(T, obj, basis, r, c):
    inv = 1 / T[r][c]
    T[r] = [x * inv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [x - f * y for x, y in zip(T[i], T[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [x - f * y for x, y in zip(obj, T[r])]
    basis[r] = c


def _simplex(T, basis, obj, allowed):
    """Maximize over a tableau whose last column is the RHS.

    ``obj`` holds reduced costs (entering columns have negative entries)
    and is updated in place. Bland's rule: lowest eligible index enters,
    ratio-test ties go to the lowest basic index.
    """
    while True:
        enter = next(
            (j for j in range(len(obj) - 1) if allowed[j] and obj[j] < 0), None
        )
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best is None
                    or ratio < best[0]
                    or (ratio == best[0] and basis[i] < basis[best[1]])
                ):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, obj, basis, best[1], enter)


def linprog(c, A_eq=(), b_eq=(), A_ge=(), b_ge=(), free=None) -> LPResult:
    """Maximize ``c . x`` subject to ``A_eq x = b_eq`` and ``A_ge x >= b_ge``.

    Variables are nonnegative unless listed in ``free``. Two-phase simplex
    over exact rationals with Bland's rule, so it always terminates.
    """
    nv = len(c)
    free = set(free or ())
    if any(len(row) != nv for row in list(A_eq) + list(A_ge)):
        raise DimensionMismatch("constraint rows do not match the variable count")
    # split free variables into positive and negative parts
    cols = []
    for j in range(nv):
        cols.append((j, 1))
        if j in free:
            cols.append((j, -1))
    nx = len(cols)

    def expand(row):
        return [to_fraction(row[j]) * s for j, s in cols]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    n_slack = len(A_ge)
    for row, b in zip(A_eq, b_eq):
        rows.append(expand(row) + [Fraction(0)] * n_slack)
        rhs.append(to_fraction(b))
    for k, (row, b) in enumerate(zip(A_ge, b_ge)):
        slack = [Fraction(0)] * n_slack
        slack[k] = Fraction(-1)
        rows.append(expand(row) + slack)
        rhs.append(to_fraction(b))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    ncore = nx + n_slack
    T = [rows[i] + [Fraction(int(i == k)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [ncore + i for i in range(m)]
    width = ncore + m

    # phase one: minimize the sum of artificials
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(ncore):
            obj[j] -= T[i][j]
        obj[-1] -= T[i][-1]
    _simplex(T, basis, obj, [True] * width)
    if obj[-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= ncore:
            j = next((j for j in range(ncore) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, obj, basis, i, j)

    # phase two
    cexp = expand(c) + [Fraction(0)] * n_slack
    obj = [-x for x in cexp] + [Fraction(0)] * m + [Fraction(0)]
    for i in range(m):
        b = basis[i]
        if b < ncore and cexp[b] != 0:
            f = cexp[b]
            obj = [x + f * y for x, y in zip(obj, T[i])]
    allowed = [True] * ncore + [False] * m
    status = _simplex(T, basis, obj, allowed)
    if status == "unbounded":
        return LPResult("unbounded")
    xs = [Fraction(0)] * ncore
    for i in range(m):
        if basis[i] < ncore:
            xs[basis[i]] = T[i][-1]
    x = [Fraction(0)] * nv
    for k, (j, s) in enumerate(cols):
        x[j] += s * xs[k]
    return LPResult("optimal", tuple(x), obj[-1])


def cone_member(generators, point) -> bool:
    """True iff ``point`` is a nonnegative combination of ``generators``."""
    gens = [vector(g) for g in generators]
    p = vector(point)
    if not gens:
        raise ValueError("need at least one generator")
    if any(len(g) != len(p) for g in gens):
        raise DimensionMismatch("generators and point differ in dimension")
    A = [[g[i] for g in gens] for i in range(len(p))]
    res = linprog([0] * len(gens), A_eq=A, b_eq=p)
    return res.status != "infeasible"


def open_sign_feasible(normals, signs) -> bool:
    """Is there an ``x`` with ``sign(x . v_i) == signs[i]`` strictly for all i?

    Maximizes a shared slack ``t`` (capped at 1) subject to
    ``s_i (x . v_i) >= t``; the open region is nonempty iff ``t > 0``.
    """
    return open_sign_witness(normals, signs) is not None


def open_sign_witness(normals, signs, equalities=()):
    """Like :func:`open_sign_feasible` but returns a witness point or None.

    ``equalities`` are extra normals ``w`` that must satisfy ``x . w = 0``.
    """
    vs = [vector(v) for v in normals]
    if not vs:
        raise ValueError("need at least one normal")
    if len(signs) != len(vs):
        raise DimensionMismatch("one sign per normal")
    d = len(vs[0])
    eqs = [vector(w) for w in equalities]
    if any(len(v) != d for v in vs + eqs):
        raise DimensionMismatch("normals differ in dimension")
    sgn = [_sign_value(s) for s in signs]
    # variables: x_0..x_{d-1} (free), t (free, capped at 1)
    A_ge = [[s * a for a in v] + [Fraction(-1)] for s, v in zip(sgn, vs)]
    b_ge = [Fraction(0)] * len(vs)
    A_ge.append([Fraction(0)] * d + [Fraction(-1)])
    b_ge.append(Fraction(-1))
    A_eq = [list(w) + [Fraction(0)] for w in eqs]
    b_eq = [Fraction(0)] * len(eqs)
    res = linprog(
        [0] * d + [1], A_eq=A_eq, b_eq=b_eq, A_ge=A_ge, b_ge=b_ge, free=range(d + 1)
    )
    if res.status != "optimal" or res.value <= 0:
        return None
    return res.x[:d]


def _sign_value(s) -> int:
    if s in ("+", 1, "pos"):
        return 1
    if s in ("-", -1, "neg"):
        return -1
    raise ValueError(f"bad sign {s!r}")


def relint_point(ineqs, eqs, dim: int):
    """A point in the relative interior of ``{x : g.x >= 0, e.x = 0}``.

    For each inequality, one LP pushes ``g.x`` up to 1 if it can; the sum
    of those solutions is strictly positive on every inequality that is
    not forced to vanish. Returns ``(point, forced)`` where ``forced`` lists
    the indices of inequalities that are zero on the whole cone.
    """
    gs = [vector(g) for g in ineqs]
    es = [vector(e) for e in eqs]
    if any(len(v) != dim for v in gs + es):
        raise DimensionMismatch("constraint of the wrong dimension")
    total = [Fraction(0)] * dim
    forced = []
    for k, g in enumerate(gs):
        res = linprog(g, A_eq=es, b_eq=[0] * len(es), A_ge=gs + [[-a for a in g]],
                      b_ge=[0] * len(gs) + [-1], free=range(dim))
        if res.status == "optimal" and res.value > 0:
            total = [a + b for a, b in zip(total, res.x)]
        else:
            forced.append(k)
    return tuple(total), forced


def facet_normals(generators) -> list[tuple[Fraction, ...]]:
    """Inner facet normals of a full-dimensional cone given by generators.

    Brute force over ``(d-1)``-subsets of generators; meant for the small
    cones of the shipped models.
    """
    gens = [vector(g) for g in generators]
    d = len(gens[0])
    if rank(gens) < d:
        raise ValueError("cone is not full-dimensional")
    out = []
    for sub in combinations(gens, d - 1):
        ns = nullspace(sub, d)
        if len(ns) != 1:
            continue
        f = ns[0]
        vals = [dot(f, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            f = tuple(-a for a in f)
        else:
            continue
        f = _primitive(f)
        if f not in out:
            out.append(f)
    return out


def _primitive(v):
    """Scale a rational vector to coprime integers (sign kept)."""
    import math

    den = math.lcm(*(a.denominator for a in v))
    ints = [int(a * den) for a in v]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(a // g) for a in ints)
