"""Determinants of Frobenius for middle convolution of tame sheaves on A^1."""

from .cyclo import CycloNum
from .errors import MidconvError
from .field import FieldSpec, MulChar, make_field
from .localdata import (ALL_CONVENTIONS, PINNED, Conventions, LocalData, PointOrbit,
                        SheafData, TameBlock, kummer_sheaf)

__version__ = "0.1.0"

__all__ = ["CycloNum", "MidconvError", "FieldSpec", "MulChar", "make_field",
           "Conventions", "PINNED", "ALL_CONVENTIONS", "LocalData", "PointOrbit",
           "SheafData", "TameBlock", "kummer_sheaf", "__version__"]
