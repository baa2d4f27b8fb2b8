"""Abelian varieties through Hermitian forms on the universal cover.

A class is a rational combination of basis Hermitian forms ``H_k`` on
``C^g``. Its index is the number of negative eigenvalues of ``H``; the
nonvanishing cohomology has dimension ``|Pf(E)|`` where ``E = Im H`` is
restricted to the lattice.

Realification convention: ``C^g`` is identified with ``R^(2g)`` through
``(re z_1, im z_1, ..., re z_g, im z_g)`` and ``H(z, w) = conj(z)^T H w``.
For ``H = A + iB`` (``A`` symmetric, ``B`` antisymmetric) the real form
``Re H`` has 2x2 blocks ``[[A, -B], [B, A]]`` and ``E = Im H`` has blocks
``[[B, A], [-A, B]]``. With this convention ``H = [2]`` on the standard
lattice gives ``E = [[0, 2], [-2, 0]]``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin as el
from .core import DEGENERATE, NormedBasis, VarietyModel, Wall
from .surface import ModelValidationError, isotropic_cone_walls


@dataclass(frozen=True)
class HermitianForm:
    re: tuple  # g x g symmetric
    im: tuple  # g x g antisymmetric

    @property
    def g(self) -> int:
        return len(self.re)

    @classmethod
    def from_lists(cls, re, im=None):
        re = el.matrix(re)
        im = el.matrix(im) if im is not None else [[Fraction(0)] * len(re) for _ in re]
        return cls(tuple(map(tuple, re)), tuple(map(tuple, im)))

    def is_hermitian(self) -> bool:
        g = self.g
        if len(self.im) != g or any(len(r) != g for r in self.re + self.im):
            return False
        return el.is_symmetric(self.re) and el.is_antisymmetric(self.im)


def realify_real_part(H: HermitianForm):
    g = H.g
    S = [[Fraction(0)] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        for j in range(g):
            a, b = H.re[i][j], H.im[i][j]
            S[2 * i][2 * j] = a
            S[2 * i][2 * j + 1] = -b
            S[2 * i + 1][2 * j] = b
            S[2 * i + 1][2 * j + 1] = a
    return S


def realify_imaginary_part(H: HermitianForm):
    g = H.g
    E = [[Fraction(0)] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        for j in range(g):
            a, b = H.re[i][j], H.im[i][j]
            E[2 * i][2 * j] = b
            E[2 * i][2 * j + 1] = a
            E[2 * i + 1][2 * j] = -a
            E[2 * i + 1][2 * j + 1] = b
    return E


class AbelianModel(VarietyModel):
    """``X = C^g / L`` with ``N^1`` spanned by the given Hermitian forms.

    ``lattice`` holds ``2g`` generators as real vectors in the realified
    coordinates; their imaginary-part pairings must be integers for every
    basis form.
    """

    def __init__(self, g: int, basis_forms, lattice, basis_labels=None, name="abelian"):
        self.g = int(g)
        self.name = name
        self.forms = tuple(f if isinstance(f, HermitianForm) else HermitianForm.from_lists(*f)
                           for f in basis_forms)
        self.lattice = el.matrix(lattice)
        r = len(self.forms)
        labels = tuple(basis_labels) if basis_labels else tuple(f"H{k + 1}" for k in range(r))
        self._basis = NormedBasis(labels)
        self._validate()
        # columns of Lambda are the lattice generators
        Lam = el.transpose(self.lattice)
        self.lattice_det = el.det(Lam)
        self.real_forms = tuple(realify_real_part(f) for f in self.forms)
        self.lattice_forms = tuple(
            el.matmul(el.matmul(self.lattice, realify_imaginary_part(f)), Lam) for f in self.forms
        )
        for k, Ek in enumerate(self.lattice_forms):
            if any(x.denominator != 1 for row in Ek for x in row):
                raise ModelValidationError(f"Im H_{k + 1} is not integral on the lattice")

    def _validate(self):
        g = self.g
        if g < 1:
            raise ModelValidationError("g must be positive")
        if not self.forms:
            raise ModelValidationError("at least one basis form is required")
        for k, f in enumerate(self.forms):
            if f.g != g or not f.is_hermitian():
                raise ModelValidationError(f"basis form {k + 1} is not a {g}x{g} Hermitian matrix")
        if len(self.lattice) != 2 * g or any(len(v) != 2 * g for v in self.lattice):
            raise ModelValidationError(f"lattice needs {2 * g} generators of length {2 * g}")
        if el.det(self.lattice) == 0:
            raise ModelValidationError("lattice generators are linearly dependent")

    @property
    def dim(self) -> int:
        return self.g

    @property
    def basis(self) -> NormedBasis:
        return self._basis

    def _combine(self, mats, x):
        n = len(mats[0])
        out = [[Fraction(0)] * n for _ in range(n)]
        for c, M in zip(x, mats):
            if c:
                for i in range(n):
                    for j in range(n):
                        out[i][j] += c * M[i][j]
        return out

    def real_form(self, x):
        return self._combine(self.real_forms, self.check_rank(x))

    def lattice_form(self, x):
        return self._combine(self.lattice_forms, self.check_rank(x))

    def evaluate(self, x):
        return abelian_asym_h(self, x)

    def chamber_id(self, x):
        return hermitian_index(self, x)

    def chamber_polynomial(self, label, x):
        out = [Fraction(0)] * (self.g + 1)
        out[label] = (-1) ** label * self.self_intersection(x)
        return tuple(out)

    def self_intersection(self, x):
        """``(x^g) = g! * sign(det Lambda) * Pf(E_x on L)``."""
        sign = 1 if self.lattice_det > 0 else -1
        return math.factorial(self.g) * sign * el.pfaffian(self.lattice_form(x))

    def walls(self, rng: random.Random, points_per_wall: int) -> list[Wall]:
        # in rank one the degenerate locus is the origin; higher rank is not enumerated
        if self.rank != 1:
            return []
        return [Wall("origin", ((Fraction(0),),), (Fraction(1),))]


def hermitian_index(model: AbelianModel, x):
    sig = el.signature(model.real_form(x))
    if sig.zeros:
        return DEGENERATE
    assert sig.negatives % 2 == 0
    return sig.negatives // 2


def abelian_asym_h(model: AbelianModel, x) -> tuple:
    out = [Fraction(0)] * (model.g + 1)
    idx = hermitian_index(model, x)
    if idx is DEGENERATE:
        return tuple(out)
    out[idx] = math.factorial(model.g) * abs(el.pfaffian(model.lattice_form(x)))
    return tuple(out)


# --- E x E ----------------------------------------------------------------------

EXE_GRAM = ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def exe_index(x, y, z):
    """0 if ample, 2 if the negative is ample, 1 if ``q < 0``; DEGENERATE if ``q = 0``."""
    x, y, z = el.vector((x, y, z))
    q = x * y + x * z + y * z
    if q == 0:
        return DEGENERATE
    if q < 0:
        return 1
    return 0 if x + y + z > 0 else 2


def exe_asym_h(x, y, z) -> tuple:
    """``E x E`` in the basis ``e1, e2, delta``: ``|(xi^2)| = 2|xy + xz + yz|`` at the index."""
    x, y, z = el.vector((x, y, z))
    out = [Fraction(0)] * 3
    idx = exe_index(x, y, z)
    if idx is DEGENERATE:
        return tuple(out)
    out[idx] = abs(2 * (x * y + x * z + y * z))
    return tuple(out)


class ExEPreset(VarietyModel):
    name = "ExE preset"

    def __init__(self):
        self._basis = NormedBasis(("e1", "e2", "delta"))

    @property
    def dim(self) -> int:
        return 2

    @property
    def basis(self) -> NormedBasis:
        return self._basis

    def evaluate(self, x):
        return exe_asym_h(*self.check_rank(x))

    def chamber_id(self, x):
        return exe_index(*self.check_rank(x))

    def chamber_polynomial(self, label, x):
        out = [Fraction(0)] * 3
        out[label] = (-1) ** label * self.self_intersection(x)
        return tuple(out)

    def self_intersection(self, x):
        return el.bilinear(el.matrix(EXE_GRAM), *(self.check_rank(x),) * 2)

    def walls(self, rng: random.Random, points_per_wall: int) -> list[Wall]:
        return isotropic_cone_walls(el.matrix(EXE_GRAM), el.vector((1, 1, 1)), rng, points_per_wall)


def square_lattice(g: int):
    """``Z[i]^g`` in realified coordinates."""
    return [[int(i == j) for j in range(2 * g)] for i in range(2 * g)]


def exe_product_model() -> AbelianModel:
    """``E x E`` for ``E = C / Z[i]``, restricted to the span of ``e1, e2``."""
    return AbelianModel(
        2,
        [HermitianForm.from_lists([[1, 0], [0, 0]]), HermitianForm.from_lists([[0, 0], [0, 1]])],
        square_lattice(2),
        basis_labels=("e1", "e2"),
        name="ExE (e1, e2)",
    )


def elliptic_curve_model(degree: int = 2) -> AbelianModel:
    """``C / Z[i]`` with basis class of the given degree."""
    return AbelianModel(1, [HermitianForm.from_lists([[degree]])], square_lattice(1),
                        basis_labels=(f"L{degree}",), name="elliptic")
