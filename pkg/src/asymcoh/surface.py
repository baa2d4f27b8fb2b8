"""Smooth projective surfaces described by their Neron-Severi lattice.

A model is only as good as its curve list: in polyhedral mode the Mori
generators must span the whole effective cone and every negative curve
must be listed. The constructor checks internal consistency (Hodge index
signature, positivity of the ample class) but cannot check completeness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import product

from . import exactlin as el
from .core import NormedBasis, VarietyModel, Wall, format_vector, scale


class ModelValidationError(ValueError):
    pass


class NotPseudoEffective(ValueError):
    pass


class IllConditionedModel(ArithmeticError):
    pass


class NotBig(ValueError):
    pass


class UnsupportedConeMode(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    name: str
    coords: tuple


@dataclass(frozen=True)
class ZariskiDecomposition:
    D: tuple
    P: tuple
    N: tuple
    support: tuple  # curve names, in model order
    coefficients: tuple  # matching ``support``, all > 0
    iterations: int = 0

    def as_dict(self) -> dict:
        return {
            "P": self.P,
            "N": self.N,
            "support": list(self.support),
            "coefficients": dict(zip(self.support, self.coefficients)),
        }


@dataclass(frozen=True)
class SurfaceEvaluation:
    case: str  # "pseff", "anti-pseff" or "neither"
    h: tuple
    decomposition: ZariskiDecomposition | None  # of D, or of -D in the anti case


class SurfaceModel(VarietyModel):
    def __init__(self, gram, curves, ample, mori=None, cone_mode="polyhedral",
                 basis_labels=None, name="surface"):
        self.gram = el.matrix(gram)
        r = len(self.gram)
        self.name = name
        self.curves = tuple(Curve(c.name, el.vector(c.coords)) if isinstance(c, Curve)
                            else Curve(str(c[0]), el.vector(c[1])) for c in curves)
        self.ample = el.vector(ample)
        if cone_mode not in ("polyhedral", "quadric"):
            raise ModelValidationError(f"unknown cone mode {cone_mode!r}")
        self.cone_mode = cone_mode
        self.mori = tuple(el.vector(g) for g in (mori or ()))
        labels = tuple(basis_labels) if basis_labels else tuple(f"b{i + 1}" for i in range(r))
        self._basis = NormedBasis(labels)
        self._validate()

    # --- construction checks ---------------------------------------------------

    def _validate(self):
        r = len(self.gram)
        if r == 0 or any(len(row) != r for row in self.gram):
            raise ModelValidationError("Gram matrix must be square and nonempty")
        if not el.is_symmetric(self.gram):
            raise ModelValidationError("Gram matrix is not symmetric")
        sig = el.signature(self.gram)
        if sig.as_tuple() != (1, r - 1, 0):
            raise ModelValidationError(f"Gram signature {sig.as_tuple()} violates the Hodge index theorem")
        if len(self.ample) != r:
            raise ModelValidationError("ample class has the wrong length")
        if self.dot(self.ample, self.ample) <= 0:
            raise ModelValidationError("ample class has nonpositive square")
        names = [c.name for c in self.curves]
        if len(set(names)) != len(names):
            raise ModelValidationError("curve names must be distinct")
        for c in self.curves:
            if len(c.coords) != r:
                raise ModelValidationError(f"curve {c.name} has the wrong length")
            if self.dot(c.coords, c.coords) >= 0:
                raise ModelValidationError(f"curve {c.name} does not have negative self-intersection")
            if self.dot(self.ample, c.coords) <= 0:
                raise ModelValidationError(f"ample class is not positive on {c.name}")
        if self.cone_mode == "polyhedral":
            if not self.mori:
                raise ModelValidationError("polyhedral mode needs Mori cone generators")
            for g in self.mori:
                if len(g) != r:
                    raise ModelValidationError("Mori generator has the wrong length")
                if self.dot(self.ample, g) <= 0:
                    raise ModelValidationError(f"ample class is not positive on generator {g}")
            for c in self.curves:
                if not el.cone_member(self.mori, c.coords):
                    raise ModelValidationError(f"curve {c.name} is outside the declared effective cone")
        elif self.curves:
            raise ModelValidationError("quadric mode carries no negative curves")

    # --- contract ----------------------------------------------------------------

    @property
    def dim(self) -> int:
        return 2

    @property
    def basis(self) -> NormedBasis:
        return self._basis

    def dot(self, a, b) -> Fraction:
        return el.bilinear(self.gram, a, b)

    def evaluate(self, x):
        return surface_asym_h(self, x)

    def self_intersection(self, x):
        x = self.check_rank(x)
        return self.dot(x, x)

    def chamber_id(self, x):
        ev = surface_evaluation(self, x)
        support = ev.decomposition.support if ev.decomposition else ()
        return (ev.case, support)

    def chamber_polynomial(self, label, x):
        x = self.check_rank(x)
        case, support = label
        if case == "neither":
            return (Fraction(0), -self.dot(x, x), Fraction(0))
        y = x if case == "pseff" else scale(-1, x)
        N = _negative_part(self, y, [self.curve(n) for n in support])
        P = tuple(a - b for a, b in zip(y, N))
        pair = (self.dot(P, P), -self.dot(N, N))
        if case == "pseff":
            return (pair[0], pair[1], Fraction(0))
        return (Fraction(0), pair[1], pair[0])

    def curve(self, name: str) -> Curve:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(name)

    def walls(self, rng: random.Random, points_per_wall: int) -> list[Wall]:
        if self.cone_mode == "quadric":
            return _quadric_walls(self, rng, points_per_wall)
        return _polyhedral_walls(self, rng, points_per_wall)

    @property
    def effective_generators(self):
        return list(self.mori) + [c.coords for c in self.curves]

    @cached_property
    def pseff_facets(self):
        """Inner facet normals of the effective cone, or None if it is not full-dimensional."""
        if self.cone_mode != "polyhedral":
            return None
        try:
            return el.facet_normals(self.effective_generators)
        except ValueError:
            return None


def _rand_pos(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 12), rng.randint(1, 5))


# --- nef / pseff ----------------------------------------------------------------


def is_nef(model: SurfaceModel, D) -> bool:
    D = model.check_rank(D)
    if model.cone_mode == "quadric":
        return model.dot(D, D) >= 0 and model.dot(D, model.ample) >= 0
    return all(model.dot(D, g) >= 0 for g in model.mori)


def is_pseff(model: SurfaceModel, D) -> bool:
    D = model.check_rank(D)
    if model.cone_mode == "quadric":
        return model.dot(D, D) >= 0 and model.dot(D, model.ample) >= 0
    if not any(D):
        return True
    if model.pseff_facets is not None:
        return all(el.dot(f, D) >= 0 for f in model.pseff_facets)
    return el.cone_member(model.effective_generators, D)


# --- Zariski decomposition -----------------------------------------------------


def _negative_part(model: SurfaceModel, D, curves) -> tuple:
    """``N = sum a_i C_i`` with ``(D - N).C_i = 0`` for the given curves."""
    r = model.rank
    if not curves:
        return (Fraction(0),) * r
    G = [[model.dot(a.coords, b.coords) for b in curves] for a in curves]
    a = el.solve_symmetric(G, [model.dot(D, c.coords) for c in curves])
    N = [Fraction(0)] * r
    for coef, c in zip(a, curves):
        for i in range(r):
            N[i] += coef * c.coords[i]
    return tuple(N)


def zariski_decompose(model: SurfaceModel, D) -> ZariskiDecomposition:
    """Zariski decomposition ``D = P + N`` of a pseudo-effective class.

    Support-growing iteration: every listed curve that meets the current
    positive part negatively joins the support, and the negative part is
    re-solved from ``(D - N).C = 0`` on the whole support. The result is
    certified (P nef, P.C = 0 on the support, support Gram negative
    definite, coefficients positive) before it is returned.
    """
    D = model.check_rank(D)
    if not is_pseff(model, D):
        raise NotPseudoEffective(f"{format_vector(D)} is not pseudo-effective")
    return _decompose(model, D)


def _decompose(model: SurfaceModel, D) -> ZariskiDecomposition:
    support: list[Curve] = []
    coeffs: tuple = ()
    N = (Fraction(0),) * model.rank
    iterations = 0
    while True:
        P = tuple(a - b for a, b in zip(D, N))
        new = [c for c in model.curves if c not in support and model.dot(P, c.coords) < 0]
        if not new:
            break
        iterations += 1
        support += new
        support.sort(key=model.curves.index)
        G = [[model.dot(a.coords, b.coords) for b in support] for a in support]
        if not el.is_negative_definite(G):
            raise IllConditionedModel(
                f"support {[c.name for c in support]} has a Gram matrix that is not negative definite"
            )
        coeffs = el.solve_symmetric(G, [model.dot(D, c.coords) for c in support])
        N = _negative_part(model, D, support)
    keep = [(c, a) for c, a in zip(support, coeffs) if a != 0]
    dec = ZariskiDecomposition(
        D, P, N, tuple(c.name for c, _ in keep), tuple(a for _, a in keep), iterations
    )
    certify(model, dec)
    return dec


def certify(model: SurfaceModel, dec: ZariskiDecomposition) -> None:
    """Raise :class:`IllConditionedModel` unless ``dec`` is a Zariski decomposition."""
    curves = [model.curve(n) for n in dec.support]
    if any(a <= 0 for a in dec.coefficients):
        raise IllConditionedModel("negative part has a nonpositive coefficient")
    if tuple(p + n for p, n in zip(dec.P, dec.N)) != dec.D:
        raise IllConditionedModel("P + N != D")
    N = [Fraction(0)] * model.rank
    for a, c in zip(dec.coefficients, curves):
        N = [x + a * y for x, y in zip(N, c.coords)]
    if tuple(N) != dec.N:
        raise IllConditionedModel("N does not match its coefficients")
    if any(model.dot(dec.P, c.coords) != 0 for c in curves):
        raise IllConditionedModel("P is not orthogonal to the support of N")
    if curves:
        G = [[model.dot(a.coords, b.coords) for b in curves] for a in curves]
        if not el.is_negative_definite(G):
            raise IllConditionedModel("support Gram matrix is not negative definite")
    if not is_nef(model, dec.P):
        raise IllConditionedModel(
            "positive part is not nef: the curve list misses a negative curve"
        )


# --- asymptotic cohomology -----------------------------------------------------


def surface_evaluation(model: SurfaceModel, D) -> SurfaceEvaluation:
    D = model.check_rank(D)
    if is_pseff(model, D):
        dec = _decompose(model, D)
        h = (model.dot(dec.P, dec.P), -model.dot(dec.N, dec.N), Fraction(0))
        return SurfaceEvaluation("pseff", h, dec)
    minus = scale(-1, D)
    if is_pseff(model, minus):
        dec = _decompose(model, minus)
        h = (Fraction(0), -model.dot(dec.N, dec.N), model.dot(dec.P, dec.P))
        return SurfaceEvaluation("anti-pseff", h, dec)
    return SurfaceEvaluation("neither", (Fraction(0), -model.dot(D, D), Fraction(0)), None)


def surface_asym_h(model: SurfaceModel, D) -> tuple:
    return surface_evaluation(model, D).h


def volume(model: SurfaceModel, D) -> Fraction:
    return surface_asym_h(model, D)[0]


def is_big(model: SurfaceModel, D) -> bool:
    return is_pseff(model, D) and volume(model, D) > 0


def zariski_chamber(model: SurfaceModel, D) -> tuple:
    """Support of the negative part of a big class (sorted curve names)."""
    D = model.check_rank(D)
    if not is_pseff(model, D):
        raise NotBig(f"{format_vector(D)} is not pseudo-effective")
    dec = zariski_decompose(model, D)
    if model.dot(dec.P, dec.P) <= 0:
        raise NotBig(f"{format_vector(D)} has volume 0")
    return tuple(sorted(dec.support))


@dataclass(frozen=True)
class ZariskiChamber:
    support: tuple
    witness: tuple  # a big class whose negative part has exactly this support
    positive_part: tuple


def _face_point(model: SurfaceModel, names):
    """Relative-interior point of the nef face orthogonal to the named curves."""
    ineqs = [el.matvec(model.gram, g) for g in model.effective_generators]
    eqs = [el.matvec(model.gram, model.curve(n).coords) for n in names]
    point, _ = el.relint_point(ineqs, eqs, model.rank)
    return point


def enumerate_zariski_chambers(model: SurfaceModel) -> list[ZariskiChamber]:
    """Every curve subset that occurs as the support of some big class.

    A subset is realizable exactly when the face of the nef cone cut out by
    orthogonality to its curves contains a big class; one relative-interior
    point of that face decides it. Subsets are visited by bitmask, and a
    subset is only tried when each of its one-smaller subsets was realizable.
    """
    if model.cone_mode != "polyhedral":
        raise UnsupportedConeMode("Zariski chambers are only enumerated in polyhedral mode")
    curves = model.curves
    realizable: dict[int, ZariskiChamber] = {}
    for mask in sorted(range(1 << len(curves)), key=lambda m: (bin(m).count("1"), m)):
        members = [c for i, c in enumerate(curves) if mask >> i & 1]
        if any((mask & ~(1 << i)) not in realizable for i in range(len(curves)) if mask >> i & 1):
            continue
        G = [[model.dot(a.coords, b.coords) for b in members] for a in members]
        if members and not el.is_negative_definite(G):
            continue
        P = _face_point(model, [c.name for c in members])
        if model.dot(P, P) <= 0:
            continue
        D = list(P)
        for c in members:
            D = [a + b for a, b in zip(D, c.coords)]
        realizable[mask] = ZariskiChamber(tuple(c.name for c in members), tuple(D), P)
    return [realizable[m] for m in sorted(realizable)]


# --- walls for the continuity suite --------------------------------------------


def _polyhedral_walls(model: SurfaceModel, rng, k) -> list[Wall]:
    walls = []
    chambers = enumerate_zariski_chambers(model)
    by_support = {frozenset(ch.support): ch for ch in chambers}
    ineqs = [el.matvec(model.gram, g) for g in model.effective_generators]
    for ch in chambers:
        for c in model.curves:
            if c.name in ch.support or frozenset(ch.support) | {c.name} not in by_support:
                continue
            names = [d.name for d in model.curves if d.name in ch.support or d is c]
            eqs = [el.matvec(model.gram, model.curve(n).coords) for n in names]
            rays = _face_spanning_points(ineqs, eqs, model.rank)
            pts = []
            for _ in range(k):
                P = [Fraction(0)] * model.rank
                for ray in rays:
                    w = _rand_pos(rng)
                    P = [a + w * b for a, b in zip(P, ray)]
                for n in ch.support:
                    w = _rand_pos(rng)
                    P = [a + w * b for a, b in zip(P, model.curve(n).coords)]
                pts.append(tuple(P))
            label = "{" + ",".join(ch.support) + "}|{" + ",".join(names) + "}"
            walls.append(Wall(f"zariski {label}", tuple(pts), c.coords))
            walls.append(Wall(f"zariski -({label})", tuple(scale(-1, p) for p in pts), c.coords))
    gens = model.effective_generators
    for f in el.facet_normals(gens):
        on = [g for g in gens if el.dot(f, g) == 0]
        inward = next(g for g in gens if el.dot(f, g) > 0)
        pts = []
        for _ in range(k):
            P = [Fraction(0)] * model.rank
            for g in on:
                w = _rand_pos(rng)
                P = [a + w * b for a, b in zip(P, g)]
            pts.append(tuple(P))
        walls.append(Wall(f"pseff boundary {f}", tuple(pts), inward))
        walls.append(Wall(f"anti-pseff boundary {f}", tuple(scale(-1, p) for p in pts), inward))
    return walls


def _face_spanning_points(ineqs, eqs, dim):
    """Points of ``{g.x >= 0, e.x = 0}`` whose positive span is the relative interior."""
    pts = []
    for k, g in enumerate(ineqs):
        res = el.linprog(g, A_eq=eqs, b_eq=[0] * len(eqs), A_ge=list(ineqs) + [[-a for a in g]],
                         b_ge=[0] * len(ineqs) + [-1], free=range(dim))
        if res.status == "optimal" and res.value > 0:
            pts.append(res.x)
    return pts


def _quadric_walls(model: SurfaceModel, rng, k) -> list[Wall]:
    return isotropic_cone_walls(model.gram, model.ample, rng, k)


def isotropic_cone_walls(gram, ample, rng, k) -> list[Wall]:
    """Sample the cone ``x.x = 0`` by secants through one small rational point.

    Returns no walls when no isotropic vector with entries in ``[-3, 3]``
    exists.
    """
    r = len(gram)
    dot = lambda a, b: el.bilinear(gram, a, b)
    base = next(
        (el.vector(v) for v in product(range(-3, 4), repeat=r)
         if any(v) and dot(el.vector(v), el.vector(v)) == 0),
        None,
    )
    if base is None:
        return []
    pts = []
    while len(pts) < k:
        w = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(r))
        qw = dot(w, w)
        if qw == 0:
            continue
        p = tuple(qw * a - 2 * dot(base, w) * b for a, b in zip(base, w))
        if not any(p) or dot(p, ample) == 0:
            continue
        if dot(p, ample) < 0:
            p = scale(-1, p)
        pts.append(p)
    return [
        Wall("isotropic cone (ample side)", tuple(pts), tuple(ample)),
        Wall("isotropic cone (anti-ample side)", tuple(scale(-1, p) for p in pts), tuple(ample)),
    ]


# --- presets --------------------------------------------------------------------


def blowup_p2(points: int) -> SurfaceModel:
    """``P^2`` blown up in one or two points, basis ``H, E1, ...``."""
    if points == 1:
        return SurfaceModel(
            gram=[[1, 0], [0, -1]],
            curves=[("E", (0, 1))],
            mori=[(0, 1), (1, -1)],
            ample=(2, -1),
            basis_labels=("H", "E"),
            name="Bl1P2",
        )
    if points == 2:
        return SurfaceModel(
            gram=[[1, 0, 0], [0, -1, 0], [0, 0, -1]],
            curves=[("E1", (0, 1, 0)), ("E2", (0, 0, 1)), ("L", (1, -1, -1))],
            mori=[(0, 1, 0), (0, 0, 1), (1, -1, -1)],
            ample=(3, -1, -1),
            basis_labels=("H", "E1", "E2"),
            name="Bl2P2",
        )
    raise ValueError("only one or two blown-up points are preset")


def exe_surface() -> SurfaceModel:
    """``E x E`` in the basis ``e1, e2, delta`` (quadric cone mode)."""
    return SurfaceModel(
        gram=[[0, 1, 1], [1, 0, 1], [1, 1, 0]],
        curves=[],
        ample=(1, 1, 1),
        cone_mode="quadric",
        basis_labels=("e1", "e2", "delta"),
        name="ExE",
    )
