"""Divisor classes, the model contract and the property harness.

Every variety model exposes ``evaluate`` (the vector of asymptotic
cohomological functions of a rational class) plus enough chamber data
for the harness to check homogeneity, continuity across walls, the
Lipschitz-type estimate and the telescoping bound.
"""

from __future__ import annotations

import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .exactlin import DimensionMismatch, to_fraction, vector

DivisorClass = tuple  # tuple[Fraction, ...] in the model's basis of N^1
CohomologyVector = tuple  # tuple[Fraction, ...] of length dim + 1


class Sentinel:
    """Named marker compared by identity (``WALL``, ``DEGENERATE``)."""

    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name


WALL = Sentinel("WALL")
DEGENERATE = Sentinel("Degenerate")


class HypothesisNotVerified(AssertionError):
    pass


class EmptySequence(ValueError):
    pass


def as_class(coords) -> DivisorClass:
    return vector(coords)


def scale(m, x: DivisorClass) -> DivisorClass:
    m = to_fraction(m)
    return tuple(m * a for a in x)


def add(x: DivisorClass, y: DivisorClass) -> DivisorClass:
    if len(x) != len(y):
        raise DimensionMismatch("classes of different rank")
    return tuple(a + b for a, b in zip(x, y))


def sub(x: DivisorClass, y: DivisorClass) -> DivisorClass:
    if len(x) != len(y):
        raise DimensionMismatch("classes of different rank")
    return tuple(a - b for a, b in zip(x, y))


@dataclass(frozen=True)
class NormedBasis:
    labels: tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.labels)

    def norm(self, x) -> Fraction:
        return max_norm(self, x)


def max_norm(basis: NormedBasis, x) -> Fraction:
    if len(x) != basis.rank:
        raise DimensionMismatch(f"class of length {len(x)} in a rank {basis.rank} basis")
    return max((abs(to_fraction(a)) for a in x), default=Fraction(0))


@dataclass(frozen=True)
class Wall:
    """Sample points on one wall, plus a direction that crosses it."""

    name: str
    points: tuple[DivisorClass, ...]
    direction: DivisorClass


class VarietyModel(ABC):
    """Contract shared by the flag, surface and abelian models.

    ``chamber_polynomial(label, x)`` evaluates the closed form attached to a
    chamber at an arbitrary class ``x``, inside that chamber or not; wall
    checks compare these continuations on the common boundary.
    """

    name: str = "model"

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @property
    @abstractmethod
    def basis(self) -> NormedBasis: ...

    @property
    def rank(self) -> int:
        return self.basis.rank

    @abstractmethod
    def evaluate(self, x) -> CohomologyVector: ...

    @abstractmethod
    def chamber_id(self, x): ...

    @abstractmethod
    def chamber_polynomial(self, label, x) -> CohomologyVector: ...

    @abstractmethod
    def self_intersection(self, x) -> Fraction: ...

    def walls(self, rng: random.Random, points_per_wall: int) -> list[Wall]:
        return []

    def check_rank(self, x) -> DivisorClass:
        x = as_class(x)
        if len(x) != self.rank:
            raise DimensionMismatch(f"{self.name}: expected {self.rank} coordinates, got {len(x)}")
        return x


class FunctionModel(VarietyModel):
    """Wrap a homogeneous function into the model contract.

    Used to exercise the harness on functions that do not come from a
    variety (``f = 0``, ``f = |x|^n``).
    """

    def __init__(self, f: Callable, rank: int, degree: int, name: str = "function"):
        self._f = f
        self._basis = NormedBasis(tuple(f"e{i + 1}" for i in range(rank)))
        self._dim = degree
        self.name = name

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def basis(self) -> NormedBasis:
        return self._basis

    def evaluate(self, x):
        x = self.check_rank(x)
        return (to_fraction(self._f(x)),)

    def chamber_id(self, x):
        return "all"

    def chamber_polynomial(self, label, x):
        return self.evaluate(x)

    def self_intersection(self, x):
        return self.evaluate(x)[0]


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    witness: dict | None = None


def check_homogeneity(model: VarietyModel, x, m: int) -> CheckResult:
    if m < 1:
        raise ValueError("m must be a positive integer")
    x = model.check_rank(x)
    base = model.evaluate(x)
    scaled = model.evaluate(scale(m, x))
    factor = Fraction(m) ** model.dim
    expected = tuple(factor * v for v in base)
    ok = scaled == expected and all(v >= 0 for v in base) and all(v >= 0 for v in scaled)
    witness = None if ok else {"class": x, "m": m, "h(m x)": scaled, "m^n h(x)": expected}
    return CheckResult("homogeneity", ok, {"m": m}, witness)


def check_wall_continuity(model: VarietyModel, x, directions, denominators) -> CheckResult:
    """Compare the chamber polynomials on both sides of a wall point.

    For every direction ``d`` and denominator ``k`` the labels of
    ``x + d/k`` and ``x - d/k`` are read off, and the closed forms of those
    chambers are evaluated at ``x`` itself; all must equal ``evaluate(x)``.
    The jump ``|h(x +- d/k) - h(x)|`` is recorded per k for the report.
    """
    x = model.check_rank(x)
    at_wall = model.evaluate(x)
    ks = sorted(int(k) for k in denominators)
    mismatches = []
    crossed = False
    max_jump_by_k = {}
    for d in directions:
        d = model.check_rank(d)
        for k in ks:
            step = scale(Fraction(1, k), d)
            sides = (add(x, step), sub(x, step))
            labels = [model.chamber_id(p) for p in sides]
            if labels[0] != labels[1]:
                crossed = True
            for label in labels:
                poly = model.chamber_polynomial(label, x)
                if poly != at_wall:
                    mismatches.append({"direction": d, "k": k, "label": label, "poly": poly})
            jump = max(
                max(abs(a - b) for a, b in zip(model.evaluate(p), at_wall)) for p in sides
            )
            max_jump_by_k[k] = max(jump, max_jump_by_k.get(k, Fraction(0)))
    ok = not mismatches
    details = {"crossed": crossed, "max_jump": max_jump_by_k, "value": at_wall}
    witness = None if ok else {"class": x, "mismatches": mismatches[:3]}
    return CheckResult("walls", ok, details, witness)


def lipschitz_weight(big: Fraction, diff: Fraction, n: int) -> Fraction:
    """``sum_{k=1}^{n} big^(n-k) * diff^k``."""
    return sum((big ** (n - k) * diff**k for k in range(1, n + 1)), Fraction(0))


@dataclass
class LipschitzReport:
    constant: Fraction
    pairs_tested: int
    max_ratio: Fraction
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_lipschitz(model: VarietyModel, pairs, C) -> LipschitzReport:
    C = to_fraction(C)
    n = model.dim
    basis = model.basis
    max_ratio = Fraction(0)
    violations = []
    count = 0
    for x, y in pairs:
        x, y = model.check_rank(x), model.check_rank(y)
        count += 1
        hx, hy = model.evaluate(x), model.evaluate(y)
        gap = max(abs(a - b) for a, b in zip(hx, hy))
        w = lipschitz_weight(max(basis.norm(x), basis.norm(y)), basis.norm(sub(x, y)), n)
        if w == 0:
            if gap != 0:
                violations.append({"pair": (x, y), "gap": gap, "weight": w})
            continue
        ratio = gap / w
        max_ratio = max(max_ratio, ratio)
        if ratio > C:
            violations.append({"pair": (x, y), "gap": gap, "weight": w, "ratio": ratio})
    return LipschitzReport(C, count, max_ratio, violations)


def norm_growth_constant(model: VarietyModel, samples) -> Fraction:
    """Smallest C with ``h^i(x) <= C |x|^n`` over the sample."""
    best = Fraction(0)
    for x in samples:
        x = model.check_rank(x)
        nx = model.basis.norm(x)
        if nx == 0:
            continue
        best = max(best, max(model.evaluate(x)) / nx**model.dim)
    return best


def _component(model: VarietyModel, component):
    if component is None:
        return lambda x: model.evaluate(x)
    return lambda x: (model.evaluate(x)[component],)


def calibrate_direction_constants(model: VarietyModel, samples, component=None) -> list[Fraction]:
    """Per-direction constants from ``(D, b)`` samples.

    For basis vector ``A_i`` the constant is the largest observed ratio
    ``|f(D - b A_i) - f(D)| / sum_k |D|^(n-k) b^k``.
    """
    f = _component(model, component)
    n, r = model.dim, model.rank
    consts = [Fraction(0)] * r
    for D, b in samples:
        D = model.check_rank(D)
        fD = f(D)
        w = lipschitz_weight(model.basis.norm(D), Fraction(b), n)
        for i in range(r):
            shifted = list(D)
            shifted[i] -= b
            gap = max(abs(a - c) for a, c in zip(f(tuple(shifted)), fD))
            consts[i] = max(consts[i], gap / w)
    return consts


def check_telescoping_bound(
    model: VarietyModel,
    basis: NormedBasis,
    per_direction_constants,
    test_pairs,
    hypothesis_samples=(),
    component=None,
) -> CheckResult:
    """Verify the telescoping conclusion with ``C = max(C_i) * r * n * n!``.

    The per-direction hypothesis is first re-checked on
    ``hypothesis_samples``; a violation raises :class:`HypothesisNotVerified`.
    """
    consts = [to_fraction(c) for c in per_direction_constants]
    r, n = basis.rank, model.dim
    if len(consts) != r:
        raise DimensionMismatch("one constant per basis direction")
    f = _component(model, component)
    for D, b in hypothesis_samples:
        D = model.check_rank(D)
        w = lipschitz_weight(basis.norm(D), Fraction(b), n)
        for i in range(r):
            shifted = list(D)
            shifted[i] -= b
            gap = max(abs(a - c) for a, c in zip(f(tuple(shifted)), f(D)))
            if gap > consts[i] * w:
                raise HypothesisNotVerified(
                    f"direction {i}: |f(D - {b} A_{i + 1}) - f(D)| = {gap} exceeds {consts[i] * w} at D = {D}"
                )
    C = max(consts, default=Fraction(0)) * r * n * math.factorial(n)
    violations = []
    max_ratio = Fraction(0)
    for x, y in test_pairs:
        x, y = model.check_rank(x), model.check_rank(y)
        gap = max(abs(a - c) for a, c in zip(f(x), f(y)))
        w = lipschitz_weight(max(basis.norm(x), basis.norm(y)), basis.norm(sub(x, y)), n)
        if gap > C * w:
            violations.append({"pair": (x, y), "gap": gap, "bound": C * w})
        elif w:
            max_ratio = max(max_ratio, gap / w)
    ok = not violations
    details = {"C": C, "max_direction_constant": max(consts, default=Fraction(0)), "max_ratio": max_ratio}
    return CheckResult("telescoping", ok, details, None if ok else {"violations": violations[:3]})


def limsup_estimate(sequence, n: int, tail: int = 1) -> Fraction:
    """Finite-prefix proxy for ``limsup a_m / (m^n / n!)``.

    Returns the largest normalized value among the last ``tail`` entries
    (by default the entry with the largest ``m``). ``tail=len(seq)//2``
    gives the cruder tail-half maximum.
    """
    seq = list(sequence)
    if not seq:
        raise EmptySequence("no terms to estimate from")
    ms = [m for m, _ in seq]
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError("m must be strictly increasing")
    tail = max(1, min(tail, len(seq)))
    nf = math.factorial(n)
    return max(to_fraction(v) * nf / Fraction(m) ** n for m, v in seq[-tail:])


# --- deterministic sampling --------------------------------------------------


def random_rational(rng: random.Random, bound: int = 10, max_den: int = 6) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * q, bound * q), q)


def random_class(rng: random.Random, rank: int, bound: int = 10, max_den: int = 6) -> DivisorClass:
    return tuple(random_rational(rng, bound, max_den) for _ in range(rank))


def grid_classes(rank: int, bound: int = 2, step: Fraction = Fraction(1)) -> list[DivisorClass]:
    """All classes with coordinates in ``{-bound, ..., bound}`` times ``step``."""
    values = [step * k for k in range(-bound, bound + 1)]
    out: list[DivisorClass] = [()]
    for _ in range(rank):
        out = [c + (v,) for c in out for v in values]
    return out


def sample_classes(seed: int, rank: int, count: int, bound: int = 10) -> list[DivisorClass]:
    """Grid points first, then seeded pseudo-random rationals up to ``count``."""
    grid = [c for c in grid_classes(rank, 1) if any(c)]
    rng = random.Random(seed)
    out = grid[:count]
    while len(out) < count:
        out.append(random_class(rng, rank, bound))
    return out


def sample_pairs(seed: int, rank: int, count: int, bound: int = 10) -> list[tuple[DivisorClass, DivisorClass]]:
    """Seeded pairs; half independent, half local perturbations."""
    rng = random.Random(seed)
    pairs = []
    for i in range(count):
        x = random_class(rng, rank, bound)
        if i % 2:
            eps = Fraction(1, rng.randint(2, 50))
            y = tuple(a + eps * random_rational(rng, 1, 4) for a in x)
        else:
            y = random_class(rng, rank, bound)
        pairs.append((x, y))
    return pairs


def format_vector(v: Iterable) -> str:
    return "(" + ", ".join(str(a) for a in v) + ")"
