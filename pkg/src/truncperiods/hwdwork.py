"""Hasse-Witt and truncation matrices, constant-term series and Dwork-type congruences.

Every congruence A/B == C/D is checked division-free as A*D == C*B after
confirming B and D are units, so no precision is lost to inversion.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Mapping

from .errors import HypothesisError, InputError, NotAUnitError, NotPIntegralError, SingularCurveError
from .exactnum import ResidueInt, check_modulus, embed_rational, hensel_unit_root, padic_ord
from .laurent import LaurentPoly, _reduce as _reduce_coeff, mul_packed, pack, unpack
from .polytope import OpenSubset
from .seriesring import PeriodMatrix, TruncSeries, sr_mat_inverse


@dataclass
class CongruenceReport:
    claim: str
    params: dict
    window: str
    holds: bool
    failure: dict | None = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"

    def to_json(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        return _stringify(d)

    def summary(self) -> str:
        line = f"{self.claim} {self.params}: {self.verdict} {self.window}"
        if self.failure:
            line += f"; first failure at {self.failure}"
        return line


@dataclass
class UnitRootResult:
    kind: str
    p: int
    s: int
    point: int
    lambda_trunc: ResidueInt
    lambda_hensel: ResidueInt | None = None
    a_p: int | None = None
    lambda_other_lift: ResidueInt | None = None

    @property
    def agrees(self) -> bool | None:
        if self.lambda_hensel is None:
            return None
        return self.lambda_trunc == self.lambda_hensel

    @property
    def lift_independent(self) -> bool | None:
        if self.lambda_other_lift is None:
            return None
        return self.lambda_trunc == self.lambda_other_lift

    def to_json(self) -> dict:
        return _stringify({
            "kind": self.kind,
            "p": self.p,
            "s": self.s,
            "point": self.point,
            "lambda_trunc": self.lambda_trunc.value,
            "lambda_hensel": None if self.lambda_hensel is None else self.lambda_hensel.value,
            "a_p": self.a_p,
            "lambda_other_lift": None if self.lambda_other_lift is None
            else self.lambda_other_lift.value,
            "agrees": self.agrees,
            "lift_independent": self.lift_independent,
        })


def _stringify(obj):
    """Integers become decimal strings (JSON consumers may truncate to 64 bits)."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


# -- beta and gamma matrices --------------------------------------------------

def _check_mu(f: LaurentPoly, mu: OpenSubset):
    delta = f.newton_polytope()
    if (delta.vertices, delta.facets, delta.equations) != (
        mu.parent.vertices, mu.parent.facets, mu.parent.equations
    ):
        raise InputError("mu is not an open subset of the Newton polytope of f")


def _powers(f: LaurentPoly, top: int) -> list[LaurentPoly]:
    out = [f.one()]
    for _ in range(top):
        out.append(out[-1] * f)
    return out


def _beta_from_power(fk: LaurentPoly, labels, m: int):
    return [[fk.coeff(tuple(m * b - a for a, b in zip(u, v))) for v in labels] for u in labels]


def hw_beta_matrix(f: LaurentPoly, mu: OpenSubset, m: int, labels=None) -> PeriodMatrix:
    """Entry (u, v) is the coefficient of x^(m v - u) in f^(m-1)."""
    if m < 1:
        raise InputError("m must be a positive integer")
    _check_mu(f, mu)
    labels = tuple(labels) if labels is not None else mu.lattice_points
    fk = f ** (m - 1)
    return PeriodMatrix(labels, _beta_from_power(fk, labels, m))


def default_phi(f: LaurentPoly) -> Callable:
    """phi_v = coefficient of f at x^v."""
    return lambda v: f.coeff(v)


def hw_gamma_matrix(f: LaurentPoly, mu: OpenSubset, m: int, phi=None, labels=None) -> PeriodMatrix:
    """gamma_m via sum_k (-1)^(k+1) C(m,k) phi_v^(m-k) beta_k; never divides by f."""
    if m < 1:
        raise InputError("m must be a positive integer")
    _check_mu(f, mu)
    labels = tuple(labels) if labels is not None else mu.lattice_points
    if phi is None:
        phi = default_phi(f)
    elif isinstance(phi, Mapping):
        table = {tuple(k): v for k, v in phi.items()}
        missing = [v for v in labels if v not in table]
        if missing:
            raise InputError(f"phi missing index {missing[0]}")
        phi = table.__getitem__
    pw = _powers(f, m - 1)
    h = len(labels)
    acc = [[0] * h for _ in range(h)]
    for k in range(1, m + 1):
        beta = _beta_from_power(pw[k - 1], labels, k)
        sign = 1 if k % 2 else -1
        for j, v in enumerate(labels):
            scale = sign * comb(m, k) * (phi(v) ** (m - k))
            for i in range(h):
                b = beta[i][j]
                if b != 0:
                    acc[i][j] = acc[i][j] + scale * b
    if f.modulus is not None:
        acc = [[_reduce_coeff(x, f.modulus) for x in row] for row in acc]
    return PeriodMatrix(labels, acc)


# -- constant-term sequences --------------------------------------------------

def hw_ct_sequence(g: LaurentPoly, K: int, modulus: int | None = None) -> list:
    """[b_0, ..., b_K] with b_k the constant term of g^k.

    Terms of g^k that cannot return to the origin within the remaining K - k
    steps are pruned using the facets of the Newton polytope.
    """
    if K < 0:
        raise InputError("K must be nonnegative")
    if not g.terms:
        return [1] + [0] * K
    return list(_ct_cached(g, K, modulus))


@lru_cache(maxsize=32)
def _ct_cached(g: LaurentPoly, K: int, modulus):
    n = g.nvars
    delta = g.newton_polytope()
    step = {pack(e): c for e, c in g.terms.items()}
    cur = {pack((0,) * n): 1}
    zero = pack((0,) * n)
    out = [1]
    for k in range(1, K + 1):
        cur = mul_packed(cur, step, modulus)
        rest = K - k
        cur = {
            key: c for key, c in cur.items()
            if delta.contains_dilate(tuple(-x for x in unpack(key, n)), rest)
        }
        out.append(cur.get(zero, 0))
    return tuple(out)


def _require_origin_interior(g: LaurentPoly):
    delta = g.newton_polytope()
    inner = delta.interior_lattice_points()
    if inner != [(0,) * g.nvars]:
        raise HypothesisError(
            f"0 must be the only interior lattice point of the Newton polytope; found {inner}"
        )


def _residue_poly(g: LaurentPoly, p: int, s: int) -> LaurentPoly:
    for c in g.terms.values():
        if isinstance(c, LaurentPoly):
            raise InputError("g must have constant (non-parameter) coefficients")
        if isinstance(c, Fraction) and c.denominator % p == 0:
            raise NotPIntegralError(f"not p-integral: coefficient {c} at p = {p}")
    return g.to_residues(p, s)


def ct_sequence_mod(g: LaurentPoly, p: int, s: int, K: int) -> list[int]:
    m = check_modulus(p, s)
    return hw_ct_sequence(_residue_poly(g, p, s), K, m)


def hw_q_series(g: LaurentPoly, p: int, s: int, T: int) -> TruncSeries:
    """q(t) = sum_{k<T} b_k t^k mod p^s."""
    _require_origin_interior(g)
    b = ct_sequence_mod(g, p, s, T - 1)
    return TruncSeries(p, s, T, b)


def truncation(b, m: int, p: int, s: int, T: int) -> TruncSeries:
    """gamma_m(t) = sum_{k<m} b_k t^k, as an element of the order-T ring."""
    if m > len(b):
        raise InputError(f"need {m} constant terms, have {len(b)}")
    return TruncSeries(p, s, T, b[:min(m, T)])


def _perturbed(series: TruncSeries, index: int | None) -> TruncSeries:
    if index is None:
        return series
    if not 0 <= index < series.T:
        raise InputError(f"perturbation index {index} outside [0, {series.T})")
    cs = list(series.coeffs)
    cs[index] += 1
    return TruncSeries(series.p, series.s, series.T, cs)


def _cross_check(claim, params, window, lhs: TruncSeries, rhs: TruncSeries, started,
                 details=None, var: str = "t") -> CongruenceReport:
    diff = lhs.first_difference(rhs)
    failure = None
    if diff is not None:
        k, a, b = diff
        failure = {"monomial": f"{var}^{k}", "index": k, "expected": a, "actual": b}
    return CongruenceReport(claim, params, window, diff is None, failure,
                            time.perf_counter() - started, details or {})


def hw_verify_any_m(g: LaurentPoly, p: int, m: int, T: int | None = None,
                    perturb: int | None = None) -> CongruenceReport:
    """q(t)/q(t^p) == gamma_m(t)/gamma_{m/p}(t^p) mod (p^ord_p(m), t^T)."""
    started = time.perf_counter()
    if m % p:
        raise InputError(f"p = {p} must divide m = {m}")
    s = padic_ord(m, p)
    T = 3 * m if T is None else T
    _require_origin_interior(g)
    b = ct_sequence_mod(g, p, s, max(T, m) - 1)
    q = TruncSeries(p, s, T, b)
    num = _perturbed(truncation(b, m, p, s, T), perturb)
    den = truncation(b, m // p, p, s, T)
    for name, x in (("q", q), ("gamma_m/p", den)):
        if not x.is_unit():
            raise NotAUnitError(f"{name} is not a unit (b_0 = {b[0]})")
    lhs = q * den.frobenius()
    rhs = q.frobenius() * num
    return _cross_check("dwork-any-m", {"p": p, "m": m, "T": T}, f"mod ({p}^{s}, t^{T})",
                        lhs, rhs, started)


def hw_verify_mev(g: LaurentPoly, p: int, s: int, T: int | None = None,
                  perturb: int | None = None) -> CongruenceReport:
    """q(t)/q(t^p) == gamma_{p^s}(t)/gamma_{p^(s-1)}(t^p) mod (p^s, t^T)."""
    rep = hw_verify_any_m(g, p, p**s, 3 * p**s if T is None else T, perturb)
    rep.claim = "mellit-vlasenko"
    rep.params = {"p": p, "s": s, "T": rep.params["T"]}
    return rep


def hw_verify_derivative(g: LaurentPoly, p: int, m: int, T: int | None = None,
                         perturb: int | None = None) -> CongruenceReport:
    """q'/q == gamma_m'/gamma_m mod (p^ord_p(m), t^T), cross-multiplied."""
    started = time.perf_counter()
    if m % p:
        raise InputError(f"p = {p} must divide m = {m}")
    s = padic_ord(m, p)
    T = 3 * m if T is None else T
    _require_origin_interior(g)
    b = ct_sequence_mod(g, p, s, max(T + 1, m) - 1)
    q = TruncSeries(p, s, T + 1, b)
    gm = _perturbed(truncation(b, m, p, s, T + 1), perturb)
    if not gm.is_unit():
        raise NotAUnitError("gamma_m is not a unit")
    lhs = (q.ddt() * gm).truncate(T)
    rhs = (gm.ddt() * q).truncate(T)
    return _cross_check("derivative", {"p": p, "m": m, "T": T}, f"mod ({p}^{s}, t^{T})",
                        lhs, rhs, started)


# -- limit formulas ------------------------------------------------------------

def _param_to_series(c, p: int, s: int, T: int) -> TruncSeries:
    if isinstance(c, LaurentPoly):
        if c.nvars != 1:
            raise InputError("limit formulas need exactly one parameter t")
        cs = [0] * T
        m = p**s
        for (k,), v in c.terms.items():
            if k < 0:
                raise InputError("parameter coefficients must be polynomials in t")
            if k < T:
                cs[k] = (cs[k] + _as_residue(v, p, s)) % m
        return TruncSeries(p, s, T, cs)
    return TruncSeries(p, s, T, [_as_residue(c, p, s)])


def _as_residue(c, p, s) -> int:
    if isinstance(c, ResidueInt):
        return c.value
    return embed_rational(c, p, s).value


def _param_at_point(c, t0: ResidueInt) -> ResidueInt:
    p, s = t0.p, t0.s
    if isinstance(c, LaurentPoly):
        acc = ResidueInt(p, s, 0)
        for (k,), v in c.terms.items():
            acc = acc + ResidueInt(p, s, _as_residue(v, p, s)) * (t0**k)
        return acc
    return ResidueInt(p, s, _as_residue(c, p, s))


def _approximant_matrix(f, mu, m, variant, phi):
    if variant == "beta":
        return hw_beta_matrix(f, mu, m)
    if variant == "gamma":
        return hw_gamma_matrix(f, mu, m, phi)
    raise InputError(f"unknown variant {variant!r}")


def hw_lambda_approx(f: LaurentPoly, mu: OpenSubset, p: int, s: int, T: int = 0,
                     point=None, variant: str = "gamma", phi=None) -> PeriodMatrix:
    """s-th approximant A_{p^s} sigma(A_{p^(s-1)})^-1 of the Frobenius matrix, mod p^s.

    Over t-series sigma is t -> t^p; at a point t0 in Z_p it is the identity.
    """
    check_modulus(p, s)
    fr = f.to_residues(p, s)
    top = _approximant_matrix(fr, mu, p**s, variant, phi)
    low = _approximant_matrix(fr, mu, p ** (s - 1), variant, phi)
    if point is None:
        if T < 1:
            raise InputError("series approximants need a truncation order T >= 1")
        A = top.map(lambda c: _param_to_series(c, p, s, T))
        B = low.map(lambda c: _param_to_series(c, p, s, T).frobenius())
    else:
        t0 = point if isinstance(point, ResidueInt) else ResidueInt(p, s, int(point))
        A = top.map(lambda c: _param_at_point(c, t0))
        B = low.map(lambda c: _param_at_point(c, t0))
    return A @ sr_mat_inverse(B)


def hw_ndelta_approx(f: LaurentPoly, mu: OpenSubset, p: int, s: int, T: int,
                     variant: str = "gamma", phi=None) -> PeriodMatrix:
    """delta(A_{p^s}) A_{p^s}^-1 with delta = t d/dt, mod (p^s, t^T)."""
    check_modulus(p, s)
    fr = f.to_residues(p, s)
    top = _approximant_matrix(fr, mu, p**s, variant, phi)
    A = top.map(lambda c: _param_to_series(c, p, s, T))
    return A.map(TruncSeries.derive) @ sr_mat_inverse(A)


def _reduce_matrix(M: PeriodMatrix, s: int) -> PeriodMatrix:
    return M.map(lambda x: x.reduce(s))


def hw_verify_limits(f: LaurentPoly, mu: OpenSubset, p: int, s_max: int, T: int,
                     variant: str = "gamma", which: str = "lambda",
                     perturb: tuple | None = None) -> CongruenceReport:
    """Cauchy property: approximant(s+1) == approximant(s) mod p^s for s < s_max.

    ``perturb`` = (s, i, j, k) bumps coefficient t^k of entry (i, j) of the
    s-th approximant (negative control).
    """
    started = time.perf_counter()
    approx = {}
    for s in range(1, s_max + 1):
        if which == "lambda":
            approx[s] = hw_lambda_approx(f, mu, p, s, T, variant=variant)
        elif which == "ndelta":
            approx[s] = hw_ndelta_approx(f, mu, p, s, T, variant=variant)
        else:
            raise InputError(f"unknown limit {which!r}")
    if perturb is not None:
        ps, i, j, k = perturb
        rows = [list(r) for r in approx[ps].rows]
        rows[i][j] = _perturbed(rows[i][j], k)
        approx[ps] = PeriodMatrix(approx[ps].labels, rows)
    for s in range(1, s_max):
        lo = approx[s]
        hi = _reduce_matrix(approx[s + 1], s)
        diff = lo.first_difference(hi)
        if diff is not None:
            u, v, (k, a, b) = diff
            return CongruenceReport(
                f"{which}-cauchy-{variant}", {"p": p, "s_max": s_max, "T": T},
                f"mod ({p}^{s}, t^{T})", False,
                {"s": s, "entry": [list(u), list(v)], "monomial": f"t^{k}", "index": k,
                 "expected": a, "actual": b},
                time.perf_counter() - started,
            )
    return CongruenceReport(f"{which}-cauchy-{variant}", {"p": p, "s_max": s_max, "T": T},
                            f"mod (p^s, t^{T}) for s < {s_max}", True, None,
                            time.perf_counter() - started,
                            {"approximant": [[str(x) for x in r] for r in approx[s_max].rows]})


# -- Legendre family and unit roots -------------------------------------------

def legendre_coefficients(p: int, s: int, m: int) -> list[int]:
    """C(2k,k)^2 16^-k mod p^s for k < m, i.e. the coefficients of F(1/2,1/2,1|z)."""
    if p == 2:
        raise InputError("hypergeometric coefficients are not 2-integral; p must be odd")
    mod = check_modulus(p, s)
    inv16 = pow(16, -1, mod)
    out = []
    c = 1
    scale = 1
    for k in range(m):
        if k:
            # C(2k,k) = C(2k-2,k-1) * (2k)(2k-1)/k^2, tracked exactly
            c = c * (2 * k) * (2 * k - 1) // (k * k)
            scale = scale * inv16 % mod
        out.append(c * c % mod * scale % mod)
    return out


def hw_legendre_truncation(p: int, s: int, m: int, T: int | None = None) -> TruncSeries:
    """F_m(z) = sum_{k<m} (1/2)_k^2/k!^2 z^k mod p^s, in a ring of order max(m, T)."""
    if m < 1:
        raise InputError("m must be positive")
    T = max(m, T or 0)
    return TruncSeries(p, s, T, legendre_coefficients(p, s, m))


def hw_count_points_legendre(z0: int, p: int) -> int:
    """a_p = p + 1 - #E(F_p) for y^2 = x(x-1)(x-z0)."""
    z0 = int(z0) % p
    if z0 in (0, 1):
        raise SingularCurveError(f"singular curve: z0 = {z0} mod {p}")
    affine = 0
    for x in range(p):
        r = x * (x - 1) * (x - z0) % p
        if r == 0:
            affine += 1
        elif pow(r, (p - 1) // 2, p) == 1:
            affine += 2
    return p + 1 - (affine + 1)


def hw_sign_relation(p: int) -> int:
    """epsilon in {+1, -1} with F_p(z) == epsilon G_p(z) mod p, found by computation."""
    from .builtins import legendre_f

    f = legendre_f()
    delta = f.newton_polytope()
    from .polytope import open_subset

    mu = open_subset(delta, "interior")
    G = hw_beta_matrix(f.to_residues(p, 1), mu, p)[0, 0]
    G = _param_to_series(G, p, 1, p)
    F = hw_legendre_truncation(p, 1, p)
    if F == G:
        return 1
    if F == -G:
        return -1
    raise InputError(f"F_p and G_p are not related by a sign mod {p}")


def verify_dwork_original(p: int, s: int, T: int, perturb: int | None = None) -> CongruenceReport:
    """F(z)/F(z^p) == F_{p^s}(z)/F_{p^(s-1)}(z^p) mod (p^s, z^T)."""
    started = time.perf_counter()
    F = hw_legendre_truncation(p, s, T)
    num = _perturbed(hw_legendre_truncation(p, s, p**s, T).truncate(T)
                     if p**s > T else hw_legendre_truncation(p, s, p**s, T), perturb)
    den = hw_legendre_truncation(p, s, p ** (s - 1), T).truncate(T) \
        if p ** (s - 1) > T else hw_legendre_truncation(p, s, p ** (s - 1), T)
    lhs = F * den.frobenius()
    rhs = F.frobenius() * num
    return _cross_check("dwork-original", {"p": p, "s": s, "T": T}, f"mod ({p}^{s}, z^{T})",
                        lhs, rhs, started, var="z")


def _ratio_at(values, p, s) -> ResidueInt:
    top, bottom = values
    if bottom % p == 0:
        raise NotAUnitError("denominator truncation vanishes mod p")
    return ResidueInt(p, s, top * pow(bottom, -1, p**s))


def _poly_eval(coeffs, x, mod) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def hw_unit_root(kind: str, p: int, s: int, point: int, g: LaurentPoly | None = None,
                 other_lift: int | None = None) -> UnitRootResult:
    """Truncation quotient A_{p^s}(t0) / A_{p^(s-1)}(t0) mod p^s at a fixed lift t0.

    kind "legendre": A = F_m, sign (-1)^((p-1)/2), cross-checked against the
    Hensel-lifted unit root of T^2 - a_p T + p.  kind "ct-series": A = gamma_m
    for the constant-term series of ``g``.
    """
    mod = check_modulus(p, s)
    if p == 2:
        raise InputError("unit roots are only supported for odd p")
    lift2 = point + p if other_lift is None else other_lift
    if kind == "legendre":
        if point % p in (0, 1):
            raise SingularCurveError(f"singular curve: z0 = {point % p} mod {p}")
        coeffs = legendre_coefficients(p, s, p**s)
        if _poly_eval(coeffs[:p], point, p) % p == 0:
            raise InputError(f"non-ordinary point: F_p(z0) == 0 mod {p} (supersingular)")
        sign = (-1) ** ((p - 1) // 2)

        def lam(z):
            return sign * _ratio_at(
                (_poly_eval(coeffs, z, mod), _poly_eval(coeffs[: p ** (s - 1)], z, mod)), p, s)

        a_p = hw_count_points_legendre(point, p)
        return UnitRootResult(kind, p, s, point % mod, lam(point), hensel_unit_root(a_p, p, s),
                              a_p, lam(lift2))
    if kind == "ct-series":
        if g is None:
            raise InputError("ct-series unit root needs a Laurent polynomial g")
        _require_origin_interior(g)
        b = ct_sequence_mod(g, p, s, p**s - 1)
        if _poly_eval(b[:p], point, p) % p == 0:
            raise InputError(f"non-ordinary point: gamma_p(t0) == 0 mod {p}")

        def lam(t):
            return _ratio_at((_poly_eval(b, t, mod), _poly_eval(b[: p ** (s - 1)], t, mod)), p, s)

        return UnitRootResult(kind, p, s, point % mod, lam(point), None, None, lam(lift2))
    raise InputError(f"unknown unit-root kind {kind!r}")
