"""Exception hierarchy; every error the CLI maps to exit code 3 derives from FlatframeError."""
from __future__ import annotations


class FlatframeError(Exception):
    pass


class UnknownSpace(FlatframeError):
    pass


class UnsupportedParams(FlatframeError):
    pass


class InconsistentCatalog(FlatframeError):
    pass


class OrbitBudgetExceeded(FlatframeError):
    pass


class ZeroVector(FlatframeError, ValueError):
    pass


class NotRankTwo(FlatframeError):
    pass


class NoAdmissibleRay(FlatframeError):
    pass


class NotAFrame(FlatframeError, ValueError):
    pass


class BudgetExceeded(FlatframeError):
    pass


class DimensionMismatch(FlatframeError, ValueError):
    pass


class MalformedMatrix(FlatframeError, ValueError):
    pass


class NotZExpressible(FlatframeError):
    pass


class UnsupportedProfile(FlatframeError):
    pass
