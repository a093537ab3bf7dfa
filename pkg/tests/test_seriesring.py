import pytest
from hypothesis import given, strategies as st

from truncperiods.ahyp import AConfig
from truncperiods.builtins import SECTION6_EXPONENTS
from truncperiods.errors import InputError, NotAUnitError, SingularMatrixError
from truncperiods.seriesring import (
    ConeSeries,
    PeriodMatrix,
    TruncSeries,
    sr_derive,
    sr_frobenius,
    sr_inverse,
    sr_mat_inverse,
    weight,
)

CFG = AConfig(SECTION6_EXPONENTS)


def key(r, s):
    return (r + 2 * s, s, s, r, -2 * r - 4 * s)


def test_geometric_inverse():
    assert sr_inverse(TruncSeries(5, 2, 4, [1, -1])) == TruncSeries(5, 2, 4, [1, 1, 1, 1])


def test_inverse_mod_nine():
    assert sr_inverse(TruncSeries(3, 2, 3, [1, 3])) == TruncSeries(3, 2, 3, [1, -3])


def test_non_unit():
    with pytest.raises(NotAUnitError, match="not a unit"):
        sr_inverse(TruncSeries(5, 1, 4, [0, 1, 1]))


def test_matrix_inverse_examples():
    one = TruncSeries(5, 2, 4, [1])
    zero = TruncSeries(5, 2, 4, [])
    eye = PeriodMatrix([0, 1], [[one, zero], [zero, one]])
    assert sr_mat_inverse(eye) == eye
    m = PeriodMatrix([0], [[TruncSeries(5, 2, 4, [1, -1])]])
    assert sr_mat_inverse(m)[0, 0] == TruncSeries(5, 2, 4, [1, 1, 1, 1])


def test_singular_matrix_reports_reduction():
    a = TruncSeries(3, 1, 3, [1, 1])
    m = PeriodMatrix([0, 1], [[a, a], [a, a]])
    with pytest.raises(SingularMatrixError) as info:
        sr_mat_inverse(m)
    assert info.value.reduction == [[1, 1], [1, 1]]
    assert info.value.det_mod_p == 0


def test_frobenius_and_derivative_examples():
    assert sr_frobenius(TruncSeries(2, 3, 6, [1, 1, 1])) == TruncSeries(2, 3, 6, [1, 0, 1, 0, 1])
    assert sr_derive(TruncSeries(7, 1, 4, [1, 2, 3])) == TruncSeries(7, 1, 4, [0, 2, 6])
    c = TruncSeries(7, 1, 4, [5])
    assert sr_frobenius(c) == c


def test_cone_series_examples():
    x = ConeSeries(CFG, 6, {key(1, 0): 1}, 3, 2)
    y = sr_frobenius(x)
    assert y.terms == {key(3, 0): 1} and weight(key(3, 0)) == 6
    d = ConeSeries(CFG, 8, {key(0, 1): 5}).derive(0)
    assert d.terms == {key(0, 1): 10}


def test_cone_series_rejects_bad_keys():
    with pytest.raises(InputError):
        ConeSeries(CFG, 6, {(1, 0, 0, 0, 0): 1})
    with pytest.raises(InputError):
        ConeSeries(CFG, 6, {key(-1, 0): 1})


def test_cone_inverse_and_matrix():
    f = ConeSeries(CFG, 8, {key(0, 0): 1, key(1, 0): 2, key(0, 1): 12}, 3, 3)
    assert f * f.inverse() == f.one_like()
    m = PeriodMatrix([1, 2], [[f, f.zero_like() + 3], [f * f, f.one_like()]])
    assert m @ sr_mat_inverse(m) == PeriodMatrix([1, 2], [[f.one_like(), f.zero_like()],
                                                          [f.zero_like(), f.one_like()]])


def test_str_shows_order():
    assert str(TruncSeries(5, 1, 3, [1, 0, 2])) == "1 + 2*t^2 + O(t^3)"


def test_json_roundtrip():
    x = TruncSeries(5, 2, 4, [1, 7, 0, 24])
    assert TruncSeries.from_json(x.to_json()) == x


P, S, T = 5, 2, 8
series = st.lists(st.integers(0, 24), min_size=0, max_size=T).map(
    lambda cs: TruncSeries(P, S, T, cs))
units = series.filter(lambda x: x.is_unit())


@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(units)
def test_inverse_property(u):
    assert u * sr_inverse(u) == u.one_like()


@given(series, series)
def test_leibniz_and_frobenius(a, b):
    assert sr_derive(a * b) == sr_derive(a) * b + a * sr_derive(b)
    assert sr_frobenius(a * b) == sr_frobenius(a) * sr_frobenius(b)
    assert sr_frobenius(a + b) == sr_frobenius(a) + sr_frobenius(b)
    # delta o sigma = p * (sigma o delta)
    assert sr_derive(sr_frobenius(a)) == sr_frobenius(sr_derive(a)) * P


@given(series, series, st.integers(1, T), st.integers(1, S))
def test_truncation_and_reduction_are_homomorphisms(a, b, t, s):
    assert (a * b).truncate(t) == a.truncate(t) * b.truncate(t)
    assert (a * b).reduce(s) == a.reduce(s) * b.reduce(s)
    assert sr_derive(a).truncate(t) == sr_derive(a.truncate(t))


cone = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2)), st.integers(-20, 20),
                       max_size=5).map(
    lambda d: ConeSeries(CFG, 8, {key(r, s): c for (r, s), c in d.items()}, 3, 2))


@given(cone, cone, cone)
def test_cone_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    for i in range(5):
        assert (a * b).derive(i) == a.derive(i) * b + a * b.derive(i)


@given(cone, st.sampled_from([1, 2, 4, 5, 7, 8, 25, 26]))
def test_cone_inverse_any_unit_constant(a, c0):
    zero = key(0, 0)
    u = a + (c0 - a.constant_term())
    assert u.constant_term() % 9 == c0 % 9
    assert u * u.inverse() == u.one_like()
    assert zero in (u * u.inverse()).terms
