"""Exact asymptotic cohomological functions on flag varieties, surfaces and abelian varieties."""

from .core import DEGENERATE, WALL, VarietyModel, limsup_estimate, max_norm
from .flag import FlagModel, build_root_system, enumerate_chambers, flag_asym_h
from .surface import SurfaceModel, surface_asym_h, zariski_decompose
from .abelian import AbelianModel, abelian_asym_h, exe_asym_h

__version__ = "0.1.0"

__all__ = [
    "DEGENERATE",
    "WALL",
    "AbelianModel",
    "FlagModel",
    "SurfaceModel",
    "VarietyModel",
    "abelian_asym_h",
    "build_root_system",
    "enumerate_chambers",
    "exe_asym_h",
    "flag_asym_h",
    "limsup_estimate",
    "max_norm",
    "surface_asym_h",
    "zariski_decompose",
]
