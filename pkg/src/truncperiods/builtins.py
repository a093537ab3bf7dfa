"""Named examples shipped with the CLI.

example-1d     g = x + 1/x, f = 1 - t g
dwork-quartic  g = (1/4)(x + 1/x)(y + 1/y), f = 1 - t g; its q(t) is F(1/2,1/2,1|t^2)
legendre       f = y^2 - x(x-1)(x-z) with parameter z
section6       exponents (0,2),(1,0),(3,0),(2,0),(1,1) of v1 y^2 + v2 x + v3 x^3 + v4 x^2 + v5 xy
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .laurent import LaurentPoly, ring

SECTION6_EXPONENTS = ((0, 2), (1, 0), (3, 0), (2, 0), (1, 1))


def example_1d_g() -> LaurentPoly:
    (x,), _ = ring("x")
    return x + x**-1


def dwork_quartic_g() -> LaurentPoly:
    (x, y), _ = ring("x y")
    return ((x + x**-1) * (y + y**-1)).scale(Fraction(1, 4))


def one_minus_tg(g: LaurentPoly) -> LaurentPoly:
    (t,) = LaurentPoly.variables("t")
    return g.one() - g.scale(t)


def legendre_f() -> LaurentPoly:
    (x, y), (z,) = ring("x y", "z")
    return y**2 - x * (x - 1) * (x - z)


def section6_f() -> LaurentPoly:
    """Generic f = sum v_i x^{a_i} with coefficients v_1..v_5 as parameters."""
    vs = LaurentPoly.variables("v1 v2 v3 v4 v5")
    return LaurentPoly(2, {a: v for a, v in zip(SECTION6_EXPONENTS, vs)}, None, ("x", "y"))


SERIES_BUILTINS = {
    "example-1d": example_1d_g,
    "dwork-quartic": dwork_quartic_g,
}


def builtin_g(name: str) -> LaurentPoly:
    try:
        return SERIES_BUILTINS[name]()
    except KeyError:
        raise InputError(
            f"unknown built-in {name!r} for a constant-term series "
            f"(choose from {sorted(SERIES_BUILTINS)})"
        ) from None


def builtin_f(name: str) -> LaurentPoly:
    """The Laurent polynomial f whose beta/gamma matrices the named example uses."""
    if name in SERIES_BUILTINS:
        return one_minus_tg(SERIES_BUILTINS[name]())
    if name == "legendre":
        return legendre_f()
    if name == "section6":
        return section6_f()
    raise InputError(f"unknown built-in {name!r}")


BUILTIN_NAMES = ("example-1d", "dwork-quartic", "legendre", "section6")
