"""Generalized flag varieties G/B.

Weights are written in the fundamental-weight basis, roots in the
simple-root basis. Pairings are always taken against coroots,
``<lam, v^> = 2 (lam, v) / (v, v)``, so every number stays rational
whatever the root lengths are.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import exactlin as el
from .core import WALL, NormedBasis, VarietyModel, Wall, limsup_estimate, scale


class UnsupportedType(ValueError):
    pass


class NotDominant(ValueError):
    pass


class NotIntegral(ValueError):
    pass


def _e(n, *pairs):
    v = [Fraction(0)] * n
    for i, c in pairs:
        v[i] += Fraction(c)
    return v


def _simple_roots(kind: str, r: int) -> list[list[Fraction]]:
    """Euclidean simple roots (Bourbaki conventions) for one simple type."""
    if kind == "A" and r >= 1:
        return [_e(r + 1, (i, 1), (i + 1, -1)) for i in range(r)]
    if kind == "B" and r >= 1:
        return [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)] + [_e(r, (r - 1, 1))]
    if kind == "C" and r >= 1:
        return [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)] + [_e(r, (r - 1, 2))]
    if kind == "D" and r >= 2:
        return [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)] + [_e(r, (r - 2, 1), (r - 1, 1))]
    if kind == "G" and r == 2:
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    if kind == "F" and r == 4:
        h = Fraction(1, 2)
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)),
                _e(4, (0, h), (1, -h), (2, -h), (3, -h))]
    if kind == "E" and r in (6, 7, 8):
        h = Fraction(1, 2)
        e8 = [[h, -h, -h, -h, -h, -h, -h, h], _e(8, (0, 1), (1, 1))]
        e8 += [_e(8, (i, -1), (i + 1, 1)) for i in range(6)]
        return [list(map(Fraction, v)) for v in e8[:r]]
    raise UnsupportedType(f"unsupported root system {kind}{r}")


@dataclass(frozen=True)
class RootSystem:
    label: str
    rank: int
    gram: tuple  # (alpha_i, alpha_j), rational
    positive_roots: tuple  # integer coefficient tuples over the simple roots

    @property
    def n(self) -> int:
        """``|positive roots| = dim G/B``."""
        return len(self.positive_roots)

    @cached_property
    def cartan(self) -> tuple:
        """``cartan[i][j] = <alpha_i, alpha_j^>``."""
        G = self.gram
        return tuple(
            tuple(int(2 * G[i][j] / G[j][j]) for j in range(self.rank)) for i in range(self.rank)
        )

    @cached_property
    def coroots(self) -> tuple:
        """Coefficients of each positive coroot over the simple coroots."""
        out = []
        for v in self.positive_roots:
            vv = el.bilinear(self.gram, v, v)
            out.append(tuple(Fraction(v[i]) * self.gram[i][i] / vv for i in range(self.rank)))
        return tuple(out)

    @property
    def rho(self) -> tuple:
        return tuple(Fraction(1) for _ in range(self.rank))

    @cached_property
    def fundamental_weights(self) -> tuple:
        """Fundamental weights as rational vectors over the simple roots."""
        inv = [el.solve(el.transpose([list(map(Fraction, r)) for r in self.cartan]), col)
               for col in el.identity(self.rank)]
        return tuple(inv)

    def pairings(self, lam) -> tuple:
        """``<lam, v^>`` for every positive root ``v``, in root order."""
        lam = el.vector(lam)
        if len(lam) != self.rank:
            raise el.DimensionMismatch(f"{self.label} weights have {self.rank} coordinates")
        return tuple(el.dot(lam, c) for c in self.coroots)

    def simple_root_weight(self, j: int) -> tuple:
        """``alpha_j`` written in the fundamental-weight basis."""
        return tuple(Fraction(a) for a in self.cartan[j])

    @cached_property
    def rho_pairings(self) -> tuple:
        return self.pairings(self.rho)


def _positive_roots(cartan) -> list[tuple[int, ...]]:
    r = len(cartan)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for j in range(r):
                p = 0
                while True:
                    down = tuple(b - (p + 1) * int(i == j) for i, b in enumerate(beta))
                    if down in roots:
                        p += 1
                    else:
                        break
                pair = sum(beta[i] * cartan[i][j] for i in range(r))
                if p - pair > 0:
                    up = tuple(b + int(i == j) for i, b in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(roots, key=lambda v: (sum(v), tuple(-c for c in v)))


def build_root_system(kind: str, r: int | None = None) -> RootSystem:
    """Root system of a simple type, e.g. ``build_root_system("A", 2)``.

    A single token such as ``"G2"`` is accepted too. Positive roots are
    ordered by height, then lexicographically (``A2``: a1, a2, a1+a2).
    """
    if r is None:
        m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", kind)
        if not m:
            raise UnsupportedType(f"cannot parse root system token {kind!r}")
        kind, r = m.group(1), int(m.group(2))
    kind = kind.upper()
    simple = _simple_roots(kind, r)
    gram = tuple(tuple(el.dot(a, b) for b in simple) for a in simple)
    cartan = [[int(2 * gram[i][j] / gram[j][j]) for j in range(r)] for i in range(r)]
    rs = RootSystem(f"{kind}{r}", r, gram, tuple(_positive_roots(cartan)))
    return rs


def parse_type(token: str) -> RootSystem:
    return build_root_system(token)


# --- Borel-Weil-Bott -----------------------------------------------------------


def _integral(lam) -> tuple:
    lam = el.vector(lam)
    if any(c.denominator != 1 for c in lam):
        raise NotIntegral(f"weight {lam} is not integral")
    return lam


def bwb_index(rs: RootSystem, lam):
    """Number of positive roots pairing negatively with ``lam + rho``, or WALL."""
    lam = _integral(lam)
    mu = tuple(a + 1 for a in lam)
    ps = rs.pairings(mu)
    if any(p == 0 for p in ps):
        return WALL
    return sum(1 for p in ps if p < 0)


def dominant_conjugate(rs: RootSystem, mu) -> tuple[tuple, int]:
    """Move a regular weight into the dominant chamber by simple reflections.

    Returns the dominant conjugate and the number of reflections used (the
    length of the Weyl group element).
    """
    mu = list(el.vector(mu))
    steps = 0
    while True:
        j = next((j for j, c in enumerate(mu) if c < 0), None)
        if j is None:
            return tuple(mu), steps
        c = mu[j]
        alpha = rs.simple_root_weight(j)
        mu = [m - c * a for m, a in zip(mu, alpha)]
        steps += 1


def weyl_dim(rs: RootSystem, lam) -> int:
    lam = _integral(lam)
    if any(p < 0 for p in rs.pairings(lam)):
        raise NotDominant(f"weight {lam} is not dominant")
    mu = tuple(a + 1 for a in lam)
    num = math.prod(rs.pairings(mu))
    den = math.prod(rs.rho_pairings)
    d = num / den
    assert d.denominator == 1, "Weyl product must be an integer"
    return int(d)


def bwb_cohomology(rs: RootSystem, lam) -> list[tuple[int, int]]:
    """Nonzero ``(degree, dimension)`` pairs of ``H^i(G/B, L_lam)``."""
    idx = bwb_index(rs, lam)
    if idx is WALL:
        return []
    mu = tuple(a + 1 for a in el.vector(lam))
    dom, length = dominant_conjugate(rs, mu)
    assert length == idx
    return [(idx, weyl_dim(rs, tuple(a - 1 for a in dom)))]


def bwb_vector(rs: RootSystem, lam) -> tuple[int, ...]:
    out = [0] * (rs.n + 1)
    for deg, d in bwb_cohomology(rs, lam):
        out[deg] = d
    return tuple(out)


# --- asymptotic cohomology -----------------------------------------------------


def asymptotic_index(rs: RootSystem, alpha):
    """Count of positive roots with ``<alpha, v^> < 0``, or WALL.

    Dominant classes get index 0, matching the BWB convention.
    """
    ps = rs.pairings(alpha)
    if any(p == 0 for p in ps):
        return WALL
    return sum(1 for p in ps if p < 0)


def top_self_intersection(rs: RootSystem, alpha) -> Fraction:
    """``(alpha^n) = n! prod <alpha, v^> / <rho, v^>``; signed."""
    ps = rs.pairings(alpha)
    return math.factorial(rs.n) * math.prod(ps, start=Fraction(1)) / math.prod(rs.rho_pairings)


def flag_asym_h(rs: RootSystem, alpha) -> tuple:
    out = [Fraction(0)] * (rs.n + 1)
    idx = asymptotic_index(rs, alpha)
    if idx is WALL:
        return tuple(out)
    out[idx] = abs(top_self_intersection(rs, alpha))
    return tuple(out)


@dataclass(frozen=True)
class ChamberDescriptor:
    signs: str
    index: int
    nonempty: bool
    witness: tuple


def enumerate_chambers(rs: RootSystem) -> list[ChamberDescriptor]:
    """Nonempty open chambers of the arrangement ``{<x, v^> = 0}``.

    Sign vectors are grown one root at a time ('+' before '-') and an
    infeasible prefix is dropped together with all its extensions, which
    gives the same set as testing all ``2^n`` sign vectors.
    """
    normals = rs.coroots
    partial = [""]
    for k in range(1, rs.n + 1):
        grown = []
        for prefix in partial:
            for s in "+-":
                signs = prefix + s
                if el.open_sign_feasible(normals[:k], signs):
                    grown.append(signs)
        partial = grown
    out = []
    for signs in partial:
        w = el.open_sign_witness(normals, signs)
        out.append(ChamberDescriptor(signs, signs.count("-"), True, w))
    return out


def chamber_signs(rs: RootSystem, alpha):
    ps = rs.pairings(alpha)
    if any(p == 0 for p in ps):
        return WALL
    return "".join("+" if p > 0 else "-" for p in ps)


@dataclass
class OracleComparison:
    index: int
    exact: Fraction
    estimate: Fraction
    relative_gap: Fraction
    m_max: int
    scale: int
    sequence_tail: list


def flag_oracle(rs: RootSystem, alpha, m_max: int = 200, tail: int = 1) -> OracleComparison:
    """Compare ``flag_asym_h`` with normalized BWB dimensions of ``m alpha``.

    Denominators of ``alpha`` are cleared first (``d alpha`` integral); the
    sequence runs over ``m d alpha`` for ``m = 1..m_max``.
    """
    alpha = el.vector(alpha)
    idx = asymptotic_index(rs, alpha)
    if idx is WALL:
        raise ValueError("oracle comparison needs a class off every wall")
    d = math.lcm(*(a.denominator for a in alpha))
    base = scale(d, alpha)
    seq = []
    for m in range(1, m_max + 1):
        seq.append((m, bwb_vector(rs, scale(m, base))[idx]))
    est = limsup_estimate(seq, rs.n, tail) / Fraction(d) ** rs.n
    exact = flag_asym_h(rs, alpha)[idx]
    return OracleComparison(idx, exact, est, abs(est - exact) / exact, m_max, d, seq[-3:])


class FlagModel(VarietyModel):
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.name = f"flag {rs.label}"
        self._basis = NormedBasis(tuple(f"w{i + 1}" for i in range(rs.rank)))

    @property
    def dim(self) -> int:
        return self.rs.n

    @property
    def basis(self) -> NormedBasis:
        return self._basis

    def evaluate(self, x):
        return flag_asym_h(self.rs, self.check_rank(x))

    def chamber_id(self, x):
        return chamber_signs(self.rs, self.check_rank(x))

    def chamber_polynomial(self, label, x):
        x = self.check_rank(x)
        idx = label.count("-")
        out = [Fraction(0)] * (self.dim + 1)
        out[idx] = (-1) ** idx * top_self_intersection(self.rs, x)
        return tuple(out)

    def self_intersection(self, x):
        return top_self_intersection(self.rs, self.check_rank(x))

    def walls(self, rng: random.Random, points_per_wall: int) -> list[Wall]:
        out = []
        coroots = self.rs.coroots
        for k, cv in enumerate(coroots):
            plane = el.nullspace([cv], self.rank)
            if not plane:
                out.append(Wall("origin", ((Fraction(0),) * self.rank,), self.rs.rho))
                continue
            pts = []
            tries = 0
            while len(pts) < points_per_wall and tries < 50 * points_per_wall:
                tries += 1
                coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in plane]
                p = tuple(sum((c * b[i] for c, b in zip(coeffs, plane)), Fraction(0))
                          for i in range(self.rank))
                ps = self.rs.pairings(p)
                # probes x +- rho/10 must not reach any other wall
                clear = all(q == 0 or abs(q) > r for q, r in zip(ps, self.rs.rho_pairings))
                if sum(1 for q in ps if q == 0) == 1 and clear and p not in pts:
                    pts.append(p)
            root = "+".join(f"a{i + 1}" if c == 1 else f"{c}a{i + 1}"
                            for i, c in enumerate(self.rs.positive_roots[k]) if c)
            out.append(Wall(f"H[{root}]", tuple(pts), self.rs.rho))
        return out
