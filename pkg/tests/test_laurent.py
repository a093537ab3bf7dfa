from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from truncperiods.builtins import legendre_f, section6_f
from truncperiods.errors import InputError
from truncperiods.laurent import (
    LaurentPoly,
    from_json,
    lp_coeff,
    lp_mul,
    lp_newton_polytope,
    lp_pow,
    lp_support,
    pack,
    ring,
    to_json,
    unpack,
)


def test_square_of_x_plus_inverse():
    (x,), _ = ring("x")
    g = x + x**-1
    assert g * g == x**2 + 2 + x**-2
    assert lp_coeff(g * g, (0,)) == 2
    assert lp_coeff(g**3, (0,)) == 0
    assert g * 0 == g.zero()


def test_nested_parameter_square():
    (x,), (t,) = ring("x", "t")
    g = x + x**-1
    f = 1 - t * g
    expected = 1 - 2 * t * g + t**2 * (x**2 + 2 + x**-2)
    assert f**2 == expected


def test_powers_zero_and_one():
    (x, y), _ = ring("x y")
    f = x * y + 3 * y**-1
    assert f**0 == f.one()
    assert f**1 == f


def test_legendre_coefficient():
    f = legendre_f()
    c = lp_coeff(lp_pow(f, 2), (2, 2))
    (z,) = LaurentPoly.variables("z")
    assert c == 2 * (1 + z)


def test_support_and_polytope():
    (x,), _ = ring("x")
    g = x + x**-1
    assert lp_support(g) == {(1,), (-1,)}
    poly = lp_newton_polytope(g)
    assert set(poly.vertices) == {(-1,), (1,)}
    assert lp_newton_polytope(g.one()).vertices == ((0,),)
    assert set(section6_f().newton_polytope().vertices) == {(0, 2), (1, 0), (3, 0)}
    with pytest.raises(InputError, match="empty support"):
        g.zero().newton_polytope()


def test_arity_mismatch():
    (x,), _ = ring("x")
    (u, v), _ = ring("u v")
    with pytest.raises(InputError, match="arity"):
        lp_mul(x, u)


def test_negative_power_of_monomial_only():
    (x,), _ = ring("x")
    assert x**-2 * x**2 == x.one()
    with pytest.raises(InputError):
        (x + 1) ** -1


def test_pack_roundtrip():
    for e in [(0,), (-3, 7), (2**20, -(2**20), 5)]:
        assert unpack(pack(e), len(e)) == e


def test_str_ordering():
    (t,) = LaurentPoly.variables("t")
    assert str(1 + 2 * t**2) == "1 + 2*t^2"


def test_json_roundtrip():
    for f in [legendre_f(), section6_f(), ring("x")[0][0].scale(Fraction(1, 4)) + 1]:
        assert from_json(to_json(f)) == f


def test_residue_reduction():
    (x,), _ = ring("x")
    f = (x + x**-1).scale(Fraction(1, 4))
    r = f.to_residues(5, 2)
    assert r.coeff((1,)) == 19


small = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-3, 3), max_size=4
)


def mk(terms):
    return LaurentPoly(2, terms, None, ("x", "y"))


@given(small, st.integers(0, 4), st.integers(0, 4))
def test_power_law(terms, a, b):
    f = mk(terms)
    assert lp_pow(f, a + b) == lp_mul(lp_pow(f, a), lp_pow(f, b))


def naive_mul(f, g):
    out = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return mk(out)


@given(small, small)
def test_mul_matches_naive(a, b):
    assert mk(a) * mk(b) == naive_mul(mk(a), mk(b))


@given(small, st.integers(0, 10))
def test_residue_power_is_reduction(terms, e):
    f = mk(terms)
    lhs = lp_pow(f.with_modulus(49), e)
    rhs = lp_pow(f, e).with_modulus(49)
    assert lhs == rhs


@given(small.filter(bool), small.filter(bool))
def test_newton_polytope_of_product(a, b):
    f, g = mk(a), mk(b)
    fg = f * g
    if not fg:
        return
    assert fg.newton_polytope().vertices == f.newton_polytope().minkowski_sum(
        g.newton_polytope()).vertices
