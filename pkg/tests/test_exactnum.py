from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from truncperiods.errors import InputError
from truncperiods.exactnum import (
    ResidueInt,
    check_modulus,
    embed_rational,
    hensel_unit_root,
    is_prime,
    padic_ord,
)

ODD_PRIMES = [3, 5, 7, 11, 13]


@pytest.mark.parametrize("n,p,expected", [(12, 2, 2), (7, 7, 1), (50, 5, 2), (-75, 5, 2), (3, 5, 0)])
def test_padic_ord(n, p, expected):
    assert padic_ord(n, p) == expected


def test_padic_ord_of_zero():
    with pytest.raises(InputError, match="infinite valuation"):
        padic_ord(0, 3)


@pytest.mark.parametrize("q,p,s,expected", [
    (Fraction(1, 4), 5, 1, 4),
    (Fraction(1, 4), 5, 2, 19),
    (Fraction(3, 1), 7, 2, 3),
])
def test_embed_rational(q, p, s, expected):
    assert embed_rational(q, p, s).value == expected


def test_embed_rational_rejects_denominator():
    with pytest.raises(InputError, match="not p-integral"):
        embed_rational(Fraction(1, 5), 5, 2)


@pytest.mark.parametrize("a,p,s,expected", [(-2, 5, 1, 3), (-2, 5, 2, 13)])
def test_hensel_examples(a, p, s, expected):
    assert hensel_unit_root(a, p, s).value == expected


def test_hensel_supersingular():
    with pytest.raises(InputError, match="supersingular"):
        hensel_unit_root(5, 5, 1)


def test_hensel_rejects_two():
    with pytest.raises(InputError):
        hensel_unit_root(1, 2, 3)


def brute_unit_roots(a, p, s):
    mod = p**s
    return [x for x in range(mod) if (x * x - a * x + p) % mod == 0 and x % p]


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_hensel_matches_brute_force(p, s):
    bound = int(2 * p**0.5)
    for a in range(-bound, bound + 1):
        if a % p == 0:
            continue
        assert brute_unit_roots(a, p, s) == [hensel_unit_root(a, p, s).value]


@given(st.sampled_from(ODD_PRIMES), st.integers(1, 6), st.integers(-40, 40))
def test_hensel_is_a_root(p, s, a):
    if a % p == 0:
        return
    lam = hensel_unit_root(a, p, s)
    assert (lam * lam - lam * a + p).is_zero()
    assert lam.is_unit()


def test_modulus_limits():
    assert check_modulus(5, 2) == 25
    for bad in [(4, 1), (101, 1), (5, 0), (5, 13)]:
        with pytest.raises(InputError):
            check_modulus(*bad)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


residues = st.builds(lambda a: ResidueInt(5, 3, a), st.integers(-10**6, 10**6))


@given(residues, residues, residues)
def test_ring_axioms(x, y, z):
    assert x + y == y + x and x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == x.zero_like() and x * 1 == x


@given(residues, residues, st.integers(1, 2))
def test_reduction_is_homomorphism(x, y, s):
    assert (x + y).reduce(s) == x.reduce(s) + y.reduce(s)
    assert (x * y).reduce(s) == x.reduce(s) * y.reduce(s)


@given(residues)
def test_inverse(x):
    if x.is_unit():
        assert x * x.inverse() == x.one_like()
    else:
        with pytest.raises(InputError):
            x.inverse()


fracs = st.fractions(max_denominator=50).filter(lambda q: q.denominator % 7)


@given(fracs, fracs)
def test_embed_is_ring_map(a, b):
    assert embed_rational(a + b, 7, 3) == embed_rational(a, 7, 3) + embed_rational(b, 7, 3)
    assert embed_rational(a * b, 7, 3) == embed_rational(a, 7, 3) * embed_rational(b, 7, 3)


def test_residue_normalises_and_prints():
    x = ResidueInt(5, 2, -1)
    assert x.value == 24
    assert str(x) == "24 mod 5^2"
