"""A-hypergeometric period matrices: kernel lattice, Gamma* calculus, L_i(m)
enumeration, the normalized truncations psi~_m built two independent ways, and
the Frobenius/derivation congruences they satisfy.

Column indices i, j follow the 1-based numbering of the monomials v_1..v_N.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .errors import HypothesisError, InputError, UnresolvedWeightError
from .exactnum import check_modulus
from .hwdwork import CongruenceReport
from .laurent import LaurentPoly
from .polytope import LatticePolytope, OpenSubset, nullspace, open_subset, open_subset_from_points
from .seriesring import ConeSeries, PeriodMatrix, sr_mat_inverse, weight


# -- integer linear algebra ------------------------------------------------------

def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Lattice basis of {l in Z^ncols : rows . l = 0} by unimodular column reduction."""
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns of U

    def colop(dst, src, k):
        # column dst -= k * column src, in A and in U
        for r in a:
            r[dst] -= k * r[src]
        for r in u:
            r[dst] -= k * r[src]

    def swap(c1, c2):
        for r in a:
            r[c1], r[c2] = r[c2], r[c1]
        for r in u:
            r[c1], r[c2] = r[c2], r[c1]

    c = 0
    for row in range(len(a)):
        if c >= ncols:
            break
        while True:
            nz = [j for j in range(c, ncols) if a[row][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(a[row][j]))
            if piv != c:
                swap(piv, c)
            done = True
            for j in range(c + 1, ncols):
                if a[row][j]:
                    colop(j, c, a[row][j] // a[row][c])
                    if a[row][j]:
                        done = False
            if done:
                c += 1
                break
    return [tuple(u[r][j] for r in range(ncols)) for j in range(c, ncols)]


def solve_rational(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coordinates c with sum c_k basis_k = v, or None if v is outside the span."""
    k = len(basis)
    n = len(v)
    m = [[Fraction(basis[j][r]) for j in range(k)] + [Fraction(v[r])] for r in range(n)]
    piv_cols = []
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, n) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        piv_cols.append(col)
        row += 1
    if any(m[r][k] != 0 for r in range(row, n)):
        return None
    coords = [Fraction(0)] * k
    for r, col in enumerate(piv_cols):
        coords[col] = m[r][k]
    return coords


def same_lattice(b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]]) -> bool:
    for src, dst in ((b1, b2), (b2, b1)):
        for v in dst:
            c = solve_rational(src, v)
            if c is None or any(x.denominator != 1 for x in c):
                return False
    return True


# -- configuration -----------------------------------------------------------------

@dataclass(frozen=True)
class AConfig:
    """f = sum_i v_i x^{a_i} with the v_i treated as independent variables."""

    exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        exps = tuple(tuple(int(x) for x in a) for a in self.exponents)
        if not exps:
            raise InputError("need at least one exponent vector")
        if len({len(a) for a in exps}) != 1:
            raise InputError("exponent vectors must share one dimension")
        object.__setattr__(self, "exponents", exps)

    @property
    def N(self) -> int:
        return len(self.exponents)

    @property
    def n(self) -> int:
        return len(self.exponents[0])

    @property
    def nvars(self) -> int:
        return self.N

    @cached_property
    def atilde(self) -> tuple[tuple[int, ...], ...]:
        """Rows of the (n+1) x N matrix whose columns are (1, a_r)."""
        rows = [tuple(1 for _ in self.exponents)]
        for c in range(self.n):
            rows.append(tuple(a[c] for a in self.exponents))
        return tuple(rows)

    def column(self, r: int) -> tuple[int, ...]:
        """Column (1, a_r) for 0-based r."""
        return (1,) + self.exponents[r]

    @cached_property
    def kernel_basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(integer_kernel(self.atilde, self.N))

    @cached_property
    def polytope(self) -> LatticePolytope:
        return LatticePolytope.from_points(self.exponents)

    def in_kernel(self, ell: Sequence[int]) -> bool:
        return all(sum(a * x for a, x in zip(row, ell)) == 0 for row in self.atilde)

    def kernel_coords(self, ell: Sequence[int]) -> tuple[int, ...] | None:
        c = solve_rational(self.kernel_basis, ell) if self.kernel_basis else (
            [] if not any(ell) else None)
        if c is None or any(x.denominator != 1 for x in c):
            return None
        return tuple(int(x) for x in c)

    # cone L° = sum_i L_i(R), described by exact inequalities in kernel coordinates
    def _li_rays(self, i: int) -> list[tuple[int, ...]]:
        B = self.kernel_basis
        k = len(B)
        if k == 0:
            return []
        cons = [tuple(B[j][r] for j in range(k)) for r in range(self.N) if r != i]
        rays = set()
        for sub in combinations(cons, k - 1):
            ns = nullspace(list(sub), k) if sub else [
                tuple(int(a == b) for b in range(k)) for a in range(k)]
            if len(ns) != 1:
                continue
            for d in (ns[0], tuple(-x for x in ns[0])):
                if all(sum(a * x for a, x in zip(c, d)) >= 0 for c in cons):
                    rays.add(d)
        return sorted(rays)

    @cached_property
    def cone_rays(self) -> tuple[tuple[int, ...], ...]:
        """Extreme rays of every L_i(R), as kernel coordinates."""
        out = set()
        for i in range(self.N):
            out.update(self._li_rays(i))
        return tuple(sorted(out))

    @cached_property
    def cone_inequalities(self):
        """(equations, facets) of the cone spanned by ``cone_rays`` in kernel coordinates."""
        k = len(self.kernel_basis)
        rays = list(self.cone_rays)
        if not rays:
            eqs = [tuple(int(a == b) for b in range(k)) for a in range(k)]
            return eqs, []
        eqs = nullspace(rays, k)
        d = k - len(eqs)
        facets = set()
        for sub in combinations(rays, d - 1):
            ns = nullspace([list(e) for e in eqs] + list(sub), k)
            if len(ns) != 1:
                continue
            for a in (ns[0], tuple(-x for x in ns[0])):
                if all(sum(x * y for x, y in zip(a, r)) >= 0 for r in rays):
                    facets.add(a)
        if d == 1:
            facets = {r for r in rays}
        return eqs, sorted(facets)

    def in_cone(self, ell: Sequence[int]) -> bool:
        if not self.in_kernel(ell):
            return False
        c = self.kernel_coords(ell)
        if c is None:
            return False
        eqs, facets = self.cone_inequalities
        if any(sum(a * x for a, x in zip(e, c)) != 0 for e in eqs):
            return False
        return all(sum(a * x for a, x in zip(f, c)) >= 0 for f in facets)

    def validate_key(self, ell: Sequence[int]):
        if len(ell) != self.N:
            raise InputError(f"key {tuple(ell)} must have {self.N} entries")
        if not self.in_kernel(ell):
            raise InputError(f"key {tuple(ell)} is not in the kernel of the A-matrix")
        if not self.in_cone(ell):
            raise InputError(f"key {tuple(ell)} lies outside the cone L°")

    def laurent_f(self) -> LaurentPoly:
        vs = LaurentPoly.variables([f"v{i + 1}" for i in range(self.N)])
        names = ("x", "y", "z")[: self.n] if self.n <= 3 else None
        terms: dict = {}
        for a, v in zip(self.exponents, vs):
            terms[a] = terms[a] + v if a in terms else v
        return LaurentPoly(self.n, terms, None, names)

    def to_json(self, mu=None) -> dict:
        d = {"exponents": [list(a) for a in self.exponents]}
        if mu is not None:
            d["mu"] = mu
        return d

    @classmethod
    def from_json(cls, data: Mapping):
        try:
            cfg = cls(tuple(tuple(int(x) for x in a) for a in data["exponents"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed A-configuration JSON: {exc}") from exc
        return cfg, data.get("mu", "all")


def columns_for_mu(config: AConfig, mu_spec="all") -> tuple[list[int], OpenSubset]:
    """1-based columns j with a_j in mu, after checking #{j : a_j in mu} = #mu_Z.

    ``mu_spec`` is "all", "interior", or a list of 1-based column indices.
    """
    poly = config.polytope
    if isinstance(mu_spec, str):
        mu = open_subset(poly, mu_spec)
    else:
        idx = [int(j) for j in mu_spec]
        if any(not 1 <= j <= config.N for j in idx):
            raise InputError(f"column indices must lie in 1..{config.N}")
        mu = open_subset_from_points(poly, [config.exponents[j - 1] for j in idx])
    pts = set(mu.lattice_points)
    cols = [j + 1 for j, a in enumerate(config.exponents) if a in pts]
    inside = [config.exponents[j - 1] for j in cols]
    if len(set(inside)) != len(inside):
        raise HypothesisError("repeated exponent vectors inside mu are not supported")
    if not cols or len(cols) != len(pts):
        raise HypothesisError(
            f"need h >= 1 and #{{j : a_j in mu}} = h; got {len(cols)} columns for h = {len(pts)}"
        )
    return cols, mu


# -- Gamma* ---------------------------------------------------------------------------

def ah_gamma_star(n: int) -> Fraction:
    """(n-1)! for n >= 1 and (-1)^n / |n|! for n <= 0."""
    if n >= 1:
        return Fraction(factorial(n - 1))
    return Fraction((-1) ** (-n), factorial(-n))


def _psi_coefficient(ell: Sequence[int], j: int) -> int:
    """l_j prod_k 1/Gamma*(l_k + 1); 0-based j.  Must be an integer."""
    c = Fraction(ell[j])
    for x in ell:
        c /= ah_gamma_star(x + 1)
    if c.denominator != 1:
        raise InputError(f"non-integer coefficient {c} at key {tuple(ell)}")
    return int(c)


# -- lattice enumeration ----------------------------------------------------------------

@dataclass
class LatticeSolutionSet:
    i: int
    m: int
    M: int
    elements: list[tuple[int, ...]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _nonneg_solutions(cols: Sequence[Sequence[int]], target: Sequence[int], total: int):
    """All nonnegative integer l with sum l_r cols[r] = target and sum l_r = total."""
    k = len(cols)
    dim = len(target)
    out = []

    def rec(r, remaining, left, acc):
        if r == k - 1:
            if all(left * x == y for x, y in zip(cols[r], remaining)):
                out.append(tuple(acc) + (left,))
            return
        for c in range(left, -1, -1):
            rem = [y - c * x for x, y in zip(cols[r], remaining)]
            acc.append(c)
            rec(r + 1, rem, left - c, acc)
            acc.pop()

    if k == 0:
        return [()] if total == 0 and not any(target) else []
    if dim and total < 0:
        return []
    rec(0, list(target), total, [])
    return out


def ah_enumerate_Li(config: AConfig, i: int, m: int, M: int) -> LatticeSolutionSet:
    """Nonzero l in L_i(m) with weight -l_i <= M (1-based i)."""
    if not 1 <= i <= config.N:
        raise InputError(f"pivot index must lie in 1..{config.N}")
    if m < 1 or M < 0:
        raise InputError("need m >= 1 and M >= 0")
    i0 = i - 1
    others = [r for r in range(config.N) if r != i0]
    cols = [config.column(r) for r in others]
    ai = config.column(i0)
    elems = []
    for d in range(1, min(m - 1, M) + 1):
        for sol in _nonneg_solutions(cols, [d * x for x in ai], d):
            ell = [0] * config.N
            for r, c in zip(others, sol):
                ell[r] = c
            ell[i0] = -d
            elems.append(tuple(ell))
    elems.sort(key=lambda e: (weight(e), e))
    return LatticeSolutionSet(i, m, M, elems)


def ah_kernel_lattice(config: AConfig) -> tuple[tuple[int, ...], ...]:
    return config.kernel_basis


# -- psi~ by enumeration -------------------------------------------------------------------

def ah_psi_tilde(config: AConfig, cols: Sequence[int], m: int, M: int, p: int | None = None,
                 s: int | None = None) -> PeriodMatrix:
    """Matrix of (psi~_m)_{ji} = delta_ij + sum_{l in L_i(m)*} l_j prod 1/Gamma*(l_k+1) v^l,
    capped at weight M; exact integers unless (p, s) is given."""
    if p is not None:
        check_modulus(p, s)
    cols = list(cols)
    zero = (0,) * config.N
    columns = {}
    for i in cols:
        sols = ah_enumerate_Li(config, i, m, M)
        columns[i] = sols.elements
    rows = []
    for j in cols:
        row = []
        for i in cols:
            terms = {zero: 1} if i == j else {}
            for ell in columns[i]:
                c = _psi_coefficient(ell, j - 1)
                if c:
                    terms[ell] = terms.get(ell, 0) + c
            row.append(ConeSeries(config, M, terms, p, s, validate=False))
        rows.append(row)
    return PeriodMatrix(cols, rows)


def ah_psi_full(config: AConfig, cols, M: int, p=None, s=None) -> PeriodMatrix:
    """Untruncated Psi~ known through weight M (it equals psi~_{M+1} there)."""
    return ah_psi_tilde(config, cols, M + 1, M, p, s)


# -- psi~ by constant terms (oracle) -----------------------------------------------------

def ah_gamma_ct_oracle(config: AConfig, m: int, cols: Sequence[int] | None = None) -> PeriodMatrix:
    """(gamma_m)_{ji} = CT_x of x^{a_j - a_i} sum_{k=1}^m (-1)^{k+1} C(m,k) v_i^{m-k} (f/x^{a_i})^{k-1},
    entries in Z[v_1..v_N]."""
    if m < 1:
        raise InputError("m must be positive")
    cols = list(range(1, config.N + 1)) if cols is None else list(cols)
    f = config.laurent_f()
    vs = LaurentPoly.variables([f"v{i + 1}" for i in range(config.N)])
    entries = {}
    for i in cols:
        a_i = config.exponents[i - 1]
        h = f.shift(tuple(-x for x in a_i))
        total = f.zero()
        power = f.one()
        for k in range(1, m + 1):
            sign = 1 if k % 2 else -1
            total = total + power.scale(vs[i - 1] ** (m - k) * (sign * comb(m, k)))
            if k < m:
                power = power * h
        for j in cols:
            a_j = config.exponents[j - 1]
            e = tuple(x - y for x, y in zip(a_i, a_j))
            c = total.coeff(e)
            entries[j, i] = c if isinstance(c, LaurentPoly) else vs[0].zero() + c
    return PeriodMatrix(cols, [[entries[j, i] for i in cols] for j in cols])


def ah_psi_tilde_ct_oracle(config: AConfig, m: int, cols: Sequence[int] | None = None,
                           M: int | None = None) -> PeriodMatrix:
    """psi~_m recovered from the oracle as v_j (gamma_m)_{ji} v_i^{-m} (exact integers)."""
    gamma = ah_gamma_ct_oracle(config, m, cols)
    cols = list(gamma.labels)
    M = m - 1 if M is None else M
    rows = []
    for a, j in enumerate(cols):
        row = []
        for b, i in enumerate(cols):
            terms = {}
            for e, c in gamma[a, b].terms.items():
                ell = list(e)
                ell[j - 1] += 1
                ell[i - 1] -= m
                terms[tuple(ell)] = c
            row.append(ConeSeries(config, M, terms, None, None, validate=True))
        rows.append(row)
    return PeriodMatrix(cols, rows)


def cone_to_laurent(series: ConeSeries, N: int) -> LaurentPoly:
    return LaurentPoly(N, dict(series.terms), None, [f"v{i + 1}" for i in range(N)])


# -- period series p_{a_i}(x^u f^{-k}) -------------------------------------------------------

@dataclass
class PeriodSeries:
    """sum_l c_l v^l over {sum_r l_r a~_r = -(k, u), l_r >= 0 (r != i), -l_i - k <= M}.

    ``prefactor`` is -alpha for a representation sum alpha_r a~_r = (k, u); the
    shifted keys l + alpha lie in the kernel and form ``series`` when alpha >= 0.
    """

    u: tuple[int, ...]
    k: int
    i: int
    M: int
    terms: dict
    prefactor: tuple[int, ...] | None
    series: ConeSeries | None

    @property
    def solvable(self) -> bool:
        return bool(self.terms)


def _nonneg_representation(config: AConfig, k: int, u) -> tuple[int, ...] | None:
    sols = _nonneg_solutions([config.column(r) for r in range(config.N)], (k,) + tuple(u), k)
    return min(sols) if sols else None


def ah_period_series(config: AConfig, u: Sequence[int], k: int, i: int, M: int) -> PeriodSeries:
    """Constant term of the expansion of x^u f^{-k} around the monomial a_i (1-based)."""
    if k < 1:
        raise InputError("k must be positive")
    u = tuple(int(x) for x in u)
    if not config.polytope.contains_dilate(u, k):
        raise InputError(f"u = {u} is not in {k} * Delta")
    i0 = i - 1
    others = [r for r in range(config.N) if r != i0]
    cols = [config.column(r) for r in others]
    ai = config.column(i0)
    ku = (k,) + u
    terms = {}
    for d in range(0, M + 1):
        target = [(d + k) * a - b for a, b in zip(ai, ku)]
        for sol in _nonneg_solutions(cols, target, d):
            ell = [0] * config.N
            for r, c in zip(others, sol):
                ell[r] = c
            ell[i0] = -d - k
            multi = factorial(d)
            for c in sol:
                multi //= factorial(c)
            terms[tuple(ell)] = (-1) ** d * comb(k - 1 + d, d) * multi
    alpha = _nonneg_representation(config, k, u)
    series = None
    prefactor = None
    if alpha is not None:
        prefactor = tuple(-a for a in alpha)
        shifted = {tuple(x + a for x, a in zip(ell, alpha)): c for ell, c in terms.items()}
        big = max((weight(e) for e in shifted), default=0)
        series = ConeSeries(config, big, shifted, None, None, validate=True)
    return PeriodSeries(u, k, i, M, terms, prefactor, series)


# -- cone check ----------------------------------------------------------------------------

@dataclass
class ConeCheck:
    pointed: bool
    weight_monotone: bool
    max_weight: int
    generators: dict

    def to_json(self) -> dict:
        return {
            "pointed": self.pointed,
            "weight_monotone": self.weight_monotone,
            "max_weight": self.max_weight,
            "generators": {str(i): [list(e) for e in g] for i, g in self.generators.items()},
        }


def ah_cone_check(config: AConfig, max_weight: int = 6) -> ConeCheck:
    """Exhaustive small-weight check that sum_i l^(i) = 0 with l^(i) in L_i forces all
    l^(i) = 0, plus monotonicity of the weight on sums inside the window."""
    gens = {
        i: ah_enumerate_Li(config, i, max_weight + 1, max_weight).elements
        for i in range(1, config.N + 1)
    }
    zero = (0,) * config.N
    # reachable sums, flagged by whether any nonzero summand was used
    reach = {zero: False}
    for i in range(1, config.N + 1):
        nxt = dict(reach)
        for total, used in reach.items():
            for g in gens[i]:
                key = tuple(a + b for a, b in zip(total, g))
                if sum(abs(x) for x in key) > 4 * config.N * max_weight:
                    continue
                nxt[key] = nxt.get(key, False) or True
        reach = nxt
    pointed = not reach.get(zero, False)
    elems = sorted({e for g in gens.values() for e in g})
    monotone = True
    for a in elems:
        for b in elems:
            c = tuple(x + y for x, y in zip(a, b))
            if weight(c) < max(weight(a), weight(b)):
                monotone = False
    return ConeCheck(pointed, monotone, max_weight, gens)


# -- Frobenius and derivation congruences ---------------------------------------------------

def _frobenius_quotient(top: PeriodMatrix, low: PeriodMatrix, p: int) -> PeriodMatrix:
    return top @ sr_mat_inverse(low.map(lambda x: x.frobenius(p)))


def _delta_quotient(mat: PeriodMatrix, i: int) -> PeriodMatrix:
    return mat.map(lambda x: x.derive(i - 1)) @ sr_mat_inverse(mat)


def _reduce(mat: PeriodMatrix, p: int, s: int) -> PeriodMatrix:
    return mat.map(lambda x: x.reduce(p, s))


def _bump(mat: PeriodMatrix, perturb) -> PeriodMatrix:
    j, i, ell = perturb
    a, b = mat.labels.index(j), mat.labels.index(i)
    rows = [list(r) for r in mat.rows]
    x = rows[a][b]
    terms = dict(x.terms)
    ell = tuple(ell)
    terms[ell] = terms.get(ell, 0) + 1
    rows[a][b] = ConeSeries(x.context, x.M, terms, x.p, x.s, validate=True)
    return PeriodMatrix(mat.labels, rows)


def _located(claim, params, window, started, where, diff, details):
    u, v, (key, a, b) = diff
    failure = {"where": where, "entry": [u, v], "key": list(key), "expected": a, "actual": b}
    return CongruenceReport(claim, params, window, False, failure,
                            time.perf_counter() - started, details)


def ah_verify_main5(config: AConfig, mu_spec, p: int, s_max: int, M: int,
                    perturb: tuple | None = None, deltas: Iterable[int] | None = None
                    ) -> CongruenceReport:
    """Frobenius and derivation congruences for psi~_{p^s}, checked at weight <= M // p.

    For s = 1..s_max: A_s = psi~_{p^s} sigma(psi~_{p^(s-1)})^-1 must agree with
    A_{s+1} and with Psi~ sigma(Psi~)^-1 mod p^s; likewise D_s = delta(psi~_{p^s})
    psi~_{p^s}^-1 against D_{s+1} and delta(Psi~) Psi~^-1.  ``perturb`` =
    (j, i, key) adds 1 to one coefficient of psi~_p (negative control).
    """
    started = time.perf_counter()
    if s_max < 1:
        raise InputError("s_max must be at least 1")
    cols, mu = columns_for_mu(config, mu_spec)
    W = M // p
    if W < 1:
        raise UnresolvedWeightError(f"M = {M} too small: nothing resolved below weight M/p < 1")
    S = s_max + 1
    check_modulus(p, S)
    cone = ah_cone_check(config, min(M, 8))
    if not cone.weight_monotone:
        raise UnresolvedWeightError("weight is not monotone on the cone; truncations unreliable")
    deltas = list(range(1, config.N + 1)) if deltas is None else list(deltas)
    params = {"p": p, "s_max": s_max, "M": M, "mu": mu_spec if isinstance(mu_spec, str)
              else list(mu_spec), "columns": cols}
    window = f"weight <= {W}"
    details = {"report_weight": W, "columns": cols}

    psi = {e: ah_psi_tilde(config, cols, p**e, M, p, S) for e in range(0, S + 1)}
    if perturb is not None:
        psi[1] = _bump(psi[1], perturb)
    Psi = ah_psi_full(config, cols, M, p, S)

    lam_full = _frobenius_quotient(Psi, Psi, p)
    A = {e: _frobenius_quotient(psi[e], psi[e - 1], p) for e in range(1, S + 1)}
    for s in range(1, s_max + 1):
        target = _reduce(A[s], p, s)
        for where, other in ((f"A_{s + 1}", A[s + 1]), ("Psi sigma(Psi)^-1", lam_full)):
            diff = target.first_difference(_reduce(other, p, s), max_weight=W)
            if diff is not None:
                return _located("psi-frobenius", params, f"mod {p}^{s}, {window}", started,
                                f"A_{s} vs {where}", diff, details)

    for i in deltas:
        n_full = _delta_quotient(Psi, i)
        D = {e: _delta_quotient(psi[e], i) for e in range(1, S + 1)}
        for s in range(1, s_max + 1):
            target = _reduce(D[s], p, s)
            for where, other in ((f"D_{s + 1}", D[s + 1]), ("delta(Psi) Psi^-1", n_full)):
                diff = target.first_difference(_reduce(other, p, s), max_weight=W)
                if diff is not None:
                    return _located(f"psi-delta-v{i}", params, f"mod {p}^{s}, {window}",
                                    started, f"D_{s} (delta = v{i} d/dv{i}) vs {where}", diff,
                                    details)

    details["lambda"] = [[str(x.truncate(W)) for x in r] for r in _reduce(lam_full, p, s_max).rows]
    return CongruenceReport("psi-frobenius-and-delta", params,
                            f"mod p^s for s <= {s_max}, {window}", True, None,
                            time.perf_counter() - started, details)


def ah_ndelta_exact(config: AConfig, cols, M: int, i: int) -> PeriodMatrix:
    """delta(Psi~) Psi~^-1 over Z (Psi~ has identity constant term, so no prime is needed)."""
    Psi = ah_psi_full(config, cols, M)
    return _delta_quotient(Psi, i)
