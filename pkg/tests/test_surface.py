import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymcoh import exactlin as el
from asymcoh.core import check_wall_continuity
from asymcoh.surface import (
    ModelValidationError,
    NotBig,
    NotPseudoEffective,
    SurfaceModel,
    UnsupportedConeMode,
    blowup_p2,
    enumerate_zariski_chambers,
    exe_surface,
    is_big,
    is_nef,
    is_pseff,
    surface_asym_h,
    surface_evaluation,
    volume,
    zariski_chamber,
    zariski_decompose,
)
from oracles import zariski_bruteforce

BL1, BL2, EXE = blowup_p2(1), blowup_p2(2), exe_surface()


def oracle(model, D):
    return zariski_bruteforce(
        model.gram, [(c.name, c.coords) for c in model.curves], model.mori, D
    )


# --- worked values --------------------------------------------------------------


def test_bl1_pseff_example():
    dec = zariski_decompose(BL1, (3, 1))
    assert dec.P == (3, 0) and dec.N == (0, 1)
    assert dec.support == ("E",)
    assert surface_asym_h(BL1, (3, 1)) == (9, 1, 0)


def test_bl1_neither_example():
    ev = surface_evaluation(BL1, (1, -3))
    assert ev.case == "neither"
    assert ev.h == (0, 8, 0)


def test_bl1_anti_pseff_example():
    ev = surface_evaluation(BL1, (-3, -1))
    assert ev.case == "anti-pseff"
    assert ev.h == (0, 1, 9)


def test_exe_volume():
    assert volume(EXE, (1, 1, 1)) == 6
    assert surface_asym_h(EXE, (1, 1, -1)) == (0, 2, 0)
    assert surface_asym_h(EXE, (-1, -1, -1)) == (0, 0, 6)


def test_bl2_line_in_support():
    # H - E1 - E2 meets L negatively
    dec = zariski_decompose(BL2, (1, -1, -1))
    assert dec.P == (0, 0, 0) and dec.support == ("L",)
    dec = zariski_decompose(BL2, (2, 1, 1))
    assert dec.support == ("E1", "E2")
    assert dec.P == (2, 0, 0)


def test_not_pseudo_effective():
    with pytest.raises(NotPseudoEffective):
        zariski_decompose(BL1, (1, -3))


def test_zariski_chamber_query():
    assert zariski_chamber(BL1, (3, 1)) == ("E",)
    assert zariski_chamber(BL1, (3, -1)) == ()
    with pytest.raises(NotBig):
        zariski_chamber(BL1, (1, -3))
    with pytest.raises(NotBig):
        zariski_chamber(BL1, (1, -1))  # pseff, volume 0


def test_chambers_bl1():
    assert [c.support for c in enumerate_zariski_chambers(BL1)] == [(), ("E",)]


def test_chambers_bl2():
    supports = [c.support for c in enumerate_zariski_chambers(BL2)]
    assert supports == [(), ("E1",), ("E2",), ("E1", "E2"), ("L",)]
    for c in enumerate_zariski_chambers(BL2):
        assert zariski_chamber(BL2, c.witness) == c.support


def test_chambers_match_grid_supports():
    seen = set()
    for D in product(range(-2, 5), range(-4, 4), range(-4, 4)):
        if is_big(BL2, D):
            (sol,) = oracle(BL2, D)
            seen.add(sol[0])
    assert seen == {c.support for c in enumerate_zariski_chambers(BL2)}


def test_chambers_need_polyhedral_mode():
    with pytest.raises(UnsupportedConeMode):
        enumerate_zariski_chambers(EXE)


# --- validation -----------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs,message",
    [
        (dict(gram=[[1, 0], [0, 1]], curves=[], mori=[(1, 0)], ample=(1, 0)), "Hodge"),
        (dict(gram=[[1, 0], [0, -1]], curves=[], mori=[(0, 1), (1, -1)], ample=(0, 1)), "nonpositive"),
        (dict(gram=[[1, 0], [0, -1]], curves=[("H", (1, 0))], mori=[(0, 1), (1, -1)], ample=(2, -1)),
         "negative self"),
        (dict(gram=[[1, 0], [0, -1]], curves=[("C", (1, -2))], mori=[(0, 1), (1, -1)], ample=(3, -1)),
         "outside"),
        (dict(gram=[[1, 0], [0, -1]], curves=[("E", (0, 1))], ample=(2, -1), cone_mode="quadric"),
         "quadric"),
        (dict(gram=[[1, 0], [0, -1]], curves=[], ample=(2, -1), cone_mode="round"), "cone mode"),
    ],
)
def test_validation_errors(kwargs, message):
    with pytest.raises(ModelValidationError, match=message):
        SurfaceModel(**kwargs)


# --- walls ----------------------------------------------------------------------


@pytest.mark.parametrize("model", [BL1, BL2, EXE], ids=lambda m: m.name)
def test_walls_continuous_and_crossed(model):
    walls = model.walls(random.Random(1), model.rank + 1)
    assert walls
    for w in walls:
        assert len(w.points) >= model.rank + 1
        crossed = False
        for p in w.points:
            res = check_wall_continuity(model, p, [w.direction], [10, 100, 1000])
            assert res.passed, res.witness
            crossed |= res.details["crossed"]
        assert crossed, w.name


# --- properties -----------------------------------------------------------------

coord = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@given(st.tuples(coord, coord, coord))
def test_bl2_matches_bruteforce(D):
    if not is_pseff(BL2, D):
        assert oracle(BL2, D) == [] or not any(D)
        return
    dec = zariski_decompose(BL2, D)
    sols = oracle(BL2, D)
    assert len(sols) == 1
    support, P, N = sols[0]
    assert (tuple(sorted(dec.support)), dec.P, dec.N) == (support, P, N)


@given(st.tuples(coord, coord, coord))
def test_euler_identity_bl2(D):
    h = surface_asym_h(BL2, D)
    assert h[0] - h[1] + h[2] == BL2.self_intersection(D)
    assert all(v >= 0 for v in h)


@given(st.tuples(coord, coord, coord))
def test_exe_cases(D):
    ev = surface_evaluation(EXE, D)
    q = EXE.self_intersection(D)
    assert ev.h[0] - ev.h[1] + ev.h[2] == q
    if q < 0:
        assert ev.case == "neither"


@given(st.tuples(coord, coord))
def test_positive_part_is_nef(D):
    if is_pseff(BL1, D):
        dec = zariski_decompose(BL1, D)
        assert is_nef(BL1, dec.P)
        assert all(BL1.dot(dec.P, BL1.curve(n).coords) == 0 for n in dec.support)
        G = [[BL1.dot(BL1.curve(a).coords, BL1.curve(b).coords) for b in dec.support] for a in dec.support]
        assert not G or el.is_negative_definite(G)


def test_scaled_inputs_stay_exact():
    D = (Fraction(7, 3), Fraction(5, 2))
    assert surface_asym_h(BL1, D) == (Fraction(49, 9), Fraction(25, 4), 0)


def test_chambers_without_negative_curves():
    p2 = SurfaceModel(gram=[[1]], curves=[], mori=[(1,)], ample=(1,), name="P2")
    assert [c.support for c in enumerate_zariski_chambers(p2)] == [()]
    assert surface_asym_h(p2, (3,)) == (9, 0, 0)


def test_bl2_negative_definite_subsets():
    names = [c.name for c in BL2.curves]
    definite = []
    for mask in range(1, 8):
        S = [BL2.curve(n).coords for i, n in enumerate(names) if mask >> i & 1]
        if el.is_negative_definite([[BL2.dot(a, b) for b in S] for a in S]):
            definite.append(mask)
    # every definite subset plus the empty one is a chamber
    assert len(definite) + 1 == len(enumerate_zariski_chambers(BL2)) == 5
