"""Slow, independent reference implementations used only by the tests.

None of these share code paths with the package: they work by brute force
or through sympy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

import sympy


def _q(a):
    return sympy.Rational(a.numerator, a.denominator) if isinstance(a, Fraction) else sympy.Rational(a)


def _frac(a):
    a = sympy.Rational(a)
    return Fraction(int(a.p), int(a.q))


def smatrix(M):
    return sympy.Matrix([[_q(a) for a in row] for row in M])


# --- linear algebra -------------------------------------------------------------


def _sign_changes(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature_descartes(M):
    """Inertia from the characteristic polynomial (all roots are real)."""
    t = sympy.Symbol("t")
    p = sympy.Poly(smatrix(M).charpoly(t).as_expr(), t)
    coeffs = p.all_coeffs()
    zeros = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    pos = _sign_changes(coeffs)
    neg_coeffs = [c * (-1) ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs)]
    neg = _sign_changes(neg_coeffs)
    return pos, neg, zeros


def pfaffian_expansion(A):
    """Pfaffian by expansion along the first row."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for j in range(1, n):
        if A[0][j] == 0:
            continue
        rest = [k for k in range(n) if k not in (0, j)]
        minor = [[A[r][c] for c in rest] for r in rest]
        total += (-1) ** (j + 1) * Fraction(A[0][j]) * pfaffian_expansion(minor)
    return total


def sympy_det(M):
    return _frac(smatrix(M).det())


def cone_member_caratheodory(generators, point):
    """Point lies in the cone iff it is a nonnegative combination of some
    linearly independent subset of the generators."""
    point = [Fraction(a) for a in point]
    if all(a == 0 for a in point):
        return True
    d = len(point)
    gens = [list(map(Fraction, g)) for g in generators]
    for k in range(1, min(d, len(gens)) + 1):
        for idx in combinations(range(len(gens)), k):
            G = sympy.Matrix([[_q(gens[i][r]) for i in idx] for r in range(d)])
            if G.rank() < k:
                continue
            b = sympy.Matrix([_q(a) for a in point])
            try:
                sol, params = G.gauss_jordan_solve(b)
            except ValueError:  # point outside the span
                continue
            if params.shape[0]:
                continue
            lam = [sympy.Rational(v) for v in sol]
            if all(v >= 0 for v in lam) and G * sympy.Matrix(lam) == b:
                return True
    return False


# --- surfaces -------------------------------------------------------------------


def zariski_bruteforce(gram, curves, mori, D):
    """All (support, P, N) satisfying the Zariski conditions, by trying
    every subset of the listed negative curves. Returns a list; a correct
    setup yields exactly one solution for each pseudo-effective D."""
    G = smatrix(gram)
    Dv = sympy.Matrix([_q(a) for a in D])
    names = [n for n, _ in curves]
    vecs = {n: sympy.Matrix([_q(a) for a in c]) for n, c in curves}

    def dot(u, v):
        return (u.T * G * v)[0, 0]

    out = []
    for k in range(len(names) + 1):
        for S in combinations(names, k):
            if S:
                GS = sympy.Matrix([[dot(vecs[a], vecs[b]) for b in S] for a in S])
                if not all((-1) ** i * GS[:i, :i].det() > 0 for i in range(1, k + 1)):
                    continue
                rhs = sympy.Matrix([dot(Dv, vecs[a]) for a in S])
                coeffs = GS.LUsolve(rhs)
                if any(c <= 0 for c in coeffs):
                    continue
                N = sum((coeffs[i] * vecs[a] for i, a in enumerate(S)), sympy.zeros(len(D), 1))
            else:
                coeffs = []
                N = sympy.zeros(len(D), 1)
            P = Dv - N
            if any(dot(P, sympy.Matrix([_q(a) for a in g])) < 0 for g in mori):
                continue
            out.append(
                (
                    tuple(sorted(S)),
                    tuple(_frac(a) for a in P),
                    tuple(_frac(a) for a in N),
                )
            )
    return out


# --- type A representation theory --------------------------------------------


def _epsilon(lam):
    """Weight in fundamental-weight coordinates -> partition-like epsilon vector."""
    r = len(lam)
    return [sum(lam[i:]) for i in range(r)] + [0]


def weyl_dim_type_a(lam):
    """Dimension of the irreducible SL(r+1) representation via hook contents."""
    shape = _epsilon(lam)
    n = len(shape)
    num = Fraction(1)
    for i, row in enumerate(shape):
        for j in range(row):
            content = j - i
            arm = row - j - 1
            leg = sum(1 for k in range(i + 1, n) if shape[k] > j)
            num *= Fraction(n + content, arm + leg + 1)
    return int(num)


def bwb_type_a(lam):
    """(degree, dimension) of the single nonzero cohomology of O(lam) on
    SL(r+1)/B, or None when all cohomology vanishes. The Weyl group acts by
    permutations of epsilon coordinates."""
    r = len(lam)
    n = r + 1
    rho = [n - 1 - i for i in range(n)]
    mu = [a + b for a, b in zip(_epsilon([int(c) for c in lam]), rho)]
    if len(set(mu)) < n:
        return None
    inversions = sum(1 for i in range(n) for j in range(i + 1, n) if mu[i] < mu[j])
    mu_sorted = sorted(mu, reverse=True)
    dom = [a - b for a, b in zip(mu_sorted, rho)]
    fw = [dom[i] - dom[i + 1] for i in range(r)]
    return inversions, weyl_dim_type_a(fw)


def weyl_group_size(kind, r):
    return {
        "A": math.factorial(r + 1),
        "B": 2**r * math.factorial(r),
        "C": 2**r * math.factorial(r),
        "D": 2 ** (r - 1) * math.factorial(r),
        "G": 12,
        "F": 1152,
    }[kind]


def observed_sign_vectors(rs, bound=7):
    """Sign vectors hit by integer weights in a box, off every wall."""
    seen = set()
    for lam in product(range(-bound, bound + 1), repeat=rs.rank):
        ps = rs.pairings(lam)
        if all(p != 0 for p in ps):
            seen.add("".join("+" if p > 0 else "-" for p in ps))
    return seen
