"""Acceptance criteria 1-11, each checked exactly with its runtime budget."""

import json
import time
from fractions import Fraction
from math import comb


from truncperiods.ahyp import (
    AConfig,
    _psi_coefficient,
    ah_enumerate_Li,
    ah_gamma_star,
    ah_psi_full,
    ah_psi_tilde,
    ah_psi_tilde_ct_oracle,
    ah_verify_main5,
)
from truncperiods.builtins import SECTION6_EXPONENTS, builtin_f, dwork_quartic_g, example_1d_g
from truncperiods.cli import main
from truncperiods.exactnum import hensel_unit_root
from truncperiods.hwdwork import (
    hw_beta_matrix,
    hw_count_points_legendre,
    hw_gamma_matrix,
    hw_unit_root,
    hw_verify_any_m,
    hw_verify_derivative,
    hw_verify_mev,
)
from truncperiods.polytope import open_subset

SECTION6 = AConfig(SECTION6_EXPONENTS)
ALL = [1, 2, 3, 4, 5]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s > {self.seconds}s"


# 1 ---------------------------------------------------------------------------------------

def test_criterion_01_beta_equals_gamma_mod_p():
    with Budget(10):
        for name in ("example-1d", "legendre", "dwork-quartic", "section6"):
            f = builtin_f(name)
            poly = f.newton_polytope()
            for p in (3, 5, 7):
                fr = f.to_residues(p, 1)
                for spec in ("all", "interior"):
                    mu = open_subset(poly, spec)
                    if not mu.lattice_points:
                        continue
                    assert hw_beta_matrix(fr, mu, p) == hw_gamma_matrix(fr, mu, p), (name, p, spec)


# 2 ---------------------------------------------------------------------------------------

def test_criterion_02_mellit_vlasenko():
    with Budget(60):
        for g in (example_1d_g(), dwork_quartic_g()):
            for p in (3, 5):
                for s in (1, 2, 3):
                    rep = hw_verify_mev(g, p, s, 3 * p**s)
                    assert rep.holds, rep.summary()


# 3 ---------------------------------------------------------------------------------------

def test_criterion_03_any_m_dwork_quartic():
    for m, window in ((10, "mod (5^1, t^60)"), (50, "mod (5^2, t^60)")):
        rep = hw_verify_any_m(dwork_quartic_g(), 5, m, 60)
        assert rep.holds and rep.window == window


# 4 ---------------------------------------------------------------------------------------

def test_criterion_04_derivative_congruence():
    for g in (example_1d_g(), dwork_quartic_g()):
        for p in (3, 5):
            for s in (1, 2, 3):
                rep = hw_verify_derivative(g, p, p**s, 3 * p**s)
                assert rep.holds, rep.summary()


# 5 ---------------------------------------------------------------------------------------

def legendre_F_exact(m, z):
    return sum(Fraction(comb(2 * k, k) ** 2, 16**k) * z**k for k in range(m))


def to_mod(q, mod):
    return q.numerator * pow(q.denominator, -1, mod) % mod


def test_criterion_05_unit_root():
    with Budget(30):
        affine = sum(1 for x in range(5) for y in range(5)
                     if (y * y - x * (x - 1) * (x - 2)) % 5 == 0)
        a5 = 5 + 1 - (affine + 1)
        assert a5 == -2 == hw_count_points_legendre(2, 5)
        roots = [x for x in range(25) if (x * x + 2 * x + 5) % 25 == 0 and x % 5]
        assert roots == [13] and hensel_unit_root(-2, 5, 2).value == 13
        assert hensel_unit_root(-2, 5, 1).value == 3
        q = legendre_F_exact(25, 2) / legendre_F_exact(5, 2)
        assert to_mod(q, 25) == 13
        assert hw_unit_root("legendre", 5, 2, 2).lambda_trunc.value == 13
        for p in (3, 5, 7):
            for z in range(2, p):
                if hw_count_points_legendre(z, p) % p == 0:
                    continue
                res = hw_unit_root("legendre", p, 2, z)
                assert res.agrees, (p, z)


# 6 ---------------------------------------------------------------------------------------

def test_criterion_06_lift_independence():
    for p in (3, 5, 7):
        for z in range(2, p):
            if hw_count_points_legendre(z, p) % p == 0:
                continue
            for s in (1, 2):
                base = hw_unit_root("legendre", p, s, z)
                for lift in (z + p, z + 2 * p, z + 7 * p):
                    assert hw_unit_root("legendre", p, s, lift).lambda_trunc == base.lambda_trunc
    g = example_1d_g()
    for s in (1, 2):
        a = hw_unit_root("ct-series", 5, s, 1, g=g, other_lift=1 + 5 * 3)
        assert a.lift_independent


# 7 ---------------------------------------------------------------------------------------

def test_criterion_07_oracle_equivalence():
    with Budget(60):
        for m in range(1, 8):
            assert ah_psi_tilde_ct_oracle(SECTION6, m) == ah_psi_tilde(SECTION6, ALL, m, m - 1)


# 8 ---------------------------------------------------------------------------------------

def key(r, s):
    return (r + 2 * s, s, s, r, -2 * r - 4 * s)


def test_criterion_08_golden_vectors():
    psi = ah_psi_full(SECTION6, ALL, 8)
    assert psi.entry(4, 4).terms == {key(-2 * s, s): comb(2 * s, s) for s in range(5)}
    assert psi.entry(5, 5).coeff(key(0, 1)) == 12
    assert psi.entry(5, 5).coeff(key(1, 0)) == 2
    for i in (1, 2, 3):
        for j in ALL:
            assert psi.entry(j, i).terms == ({(0,) * 5: 1} if i == j else {})


# 9 ---------------------------------------------------------------------------------------

def test_criterion_09_frobenius_and_derivation_congruences():
    with Budget(300):
        rep = ah_verify_main5(SECTION6, "interior", 3, 2, 18)
        assert rep.holds and "weight <= 6" in rep.window
        rep = ah_verify_main5(SECTION6, "all", 3, 1, 9)
        assert rep.holds and "weight <= 3" in rep.window


# 10 --------------------------------------------------------------------------------------

NEGATIVE = [
    ["verify", "mev", "--builtin", "example-1d", "--p", "3", "--s", "2", "--perturb", "4"],
    ["verify", "any-m", "--builtin", "dwork-quartic", "--p", "5", "--m", "10", "--T", "60",
     "--perturb", "7"],
    ["verify", "deriv", "--builtin", "example-1d", "--p", "3", "--s", "2", "--perturb", "2"],
    ["verify", "limits", "--builtin", "example-1d", "--p", "3", "--smax", "3", "--T", "10",
     "--perturb", "2,0,0,3"],
    ["verify", "main5", "--builtin", "section6", "--p", "3", "--smax", "1", "--M", "9",
     "--perturb", "4,4,0,1,1,-2,0"],
]


def test_criterion_10_negative_controls(capsys):
    for argv in NEGATIVE:
        code = main(argv + ["--format", "json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 1, argv
        failure = report["failure"]
        assert failure and ("index" in failure or "key" in failure), argv


# 11 --------------------------------------------------------------------------------------

def test_criterion_11_gamma_star_and_integrality():
    with Budget(5):
        for n in range(-20, 21):
            if n:
                assert ah_gamma_star(n + 1) == n * ah_gamma_star(n)
                sign = 1 if n > 0 else -1
                assert ah_gamma_star(n) * ah_gamma_star(1 - n) == sign * (-1) ** (n - 1)
        for i in ALL:
            for ell in ah_enumerate_Li(SECTION6, i, 21, 20):
                for j in range(5):
                    c = Fraction(ell[j])
                    for x in ell:
                        c /= ah_gamma_star(x + 1)
                    assert c.denominator == 1 and c == _psi_coefficient(ell, j)
        for m in (4, 7):
            for Mp in range(m):
                assert ah_psi_tilde(SECTION6, ALL, m, Mp) == ah_psi_tilde(SECTION6, ALL, Mp + 1, Mp)
        const = ah_psi_full(SECTION6, ALL, 6, 3, 1).constant_mod_p()
        assert const == [[int(a == b) for b in range(5)] for a in range(5)]
