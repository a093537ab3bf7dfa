"""Sparse multivariate Laurent polynomials over a pluggable coefficient ring.

Coefficients may be ``int``, ``Fraction``, ``ResidueInt`` or another
``LaurentPoly`` (the parameter variables t or v_1..v_N live there, so the
constant term in the core variables is a single lookup).  When ``modulus`` is
set, integer and nested coefficients are reduced after every operation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError
from .exactnum import ResidueInt, embed_rational

MAX_ARITY = 6

# exponent vectors are packed into one int for the multiplication kernel;
# components must stay below _HALF in absolute value
_BASE = 1 << 32
_HALF = _BASE >> 1


def pack(e: tuple[int, ...]) -> int:
    k = 0
    for x in reversed(e):
        k = k * _BASE + x
    return k


def unpack(k: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        x = (k + _HALF) % _BASE - _HALF
        out.append(x)
        k = (k - x) // _BASE
    return tuple(out)


def _is_zero(c) -> bool:
    if isinstance(c, LaurentPoly):
        return not c.terms
    return c == 0


def _reduce(c, mod):
    if mod is None:
        return c
    if isinstance(c, int):
        return c % mod
    if isinstance(c, LaurentPoly):
        return c.with_modulus(mod)
    return c


def mul_packed(a: Mapping[int, object], b: Mapping[int, object], mod=None) -> dict:
    """Product of two packed-key term maps; reduces integer coefficients mod ``mod``."""
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    bl = list(b.items())
    if mod is not None and all(type(c) is int for c in b.values()) and all(
        type(c) is int for c in a.values()
    ):
        for ka, ca in a.items():
            for kb, cb in bl:
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return {k: c % mod for k, c in out.items() if c % mod}
    for ka, ca in a.items():
        for kb, cb in bl:
            k = ka + kb
            c = ca * cb
            prev = get(k)
            out[k] = c if prev is None else prev + c
    res = {}
    for k, c in out.items():
        c = _reduce(c, mod)
        if not _is_zero(c):
            res[k] = c
    return res


class LaurentPoly:
    """Finite sum of c_e x^e with e in Z^n.

    >>> x = LaurentPoly.monomial((1,))
    >>> (x + x**-1) ** 2
    LaurentPoly(x^-2 + 2 + x^2)
    """

    __slots__ = ("nvars", "terms", "modulus", "names")

    def __init__(self, nvars: int, terms: Mapping | None = None, modulus: int | None = None,
                 names: Iterable[str] | None = None):
        if not 0 <= nvars <= MAX_ARITY:
            raise InputError(f"arity {nvars} outside [0, {MAX_ARITY}]")
        self.nvars = nvars
        self.modulus = modulus
        self.names = tuple(names) if names is not None else _default_names(nvars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise InputError(f"exponent {e} has arity {len(e)}, expected {nvars}")
            c = _reduce(c, modulus)
            if not _is_zero(c):
                clean[e] = clean[e] + c if e in clean else c
        self.terms = {e: c for e, c in clean.items() if not _is_zero(c)}

    # -- construction -------------------------------------------------------
    @classmethod
    def _raw(cls, nvars, terms, modulus, names):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj.modulus = modulus
        obj.names = names
        return obj

    @classmethod
    def constant(cls, c, nvars: int, modulus=None, names=None) -> LaurentPoly:
        return cls(nvars, {(0,) * nvars: c}, modulus, names)

    @classmethod
    def monomial(cls, e, c=1, modulus=None, names=None) -> LaurentPoly:
        e = tuple(e)
        return cls(len(e), {e: c}, modulus, names)

    @classmethod
    def variables(cls, names: str | Iterable[str], modulus=None) -> tuple[LaurentPoly, ...]:
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        names = tuple(names)
        n = len(names)
        return tuple(
            cls.monomial(tuple(int(j == i) for j in range(n)), 1, modulus, names)
            for i in range(n)
        )

    def scale(self, c) -> LaurentPoly:
        """Multiply every coefficient by the ring element ``c``."""
        return LaurentPoly(self.nvars, {e: c * v for e, v in self.terms.items()}, self.modulus,
                           self.names)

    def _like(self, terms) -> LaurentPoly:
        return LaurentPoly._raw(self.nvars, terms, self.modulus, self.names)

    def zero(self) -> LaurentPoly:
        return self._like({})

    def one(self) -> LaurentPoly:
        return self._like({(0,) * self.nvars: 1})

    # -- inspection ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def coeff(self, e):
        """Coefficient of x^e (ring zero when absent)."""
        e = tuple(e)
        if len(e) != self.nvars:
            raise InputError(f"exponent {e} has arity {len(e)}, expected {self.nvars}")
        return self.terms.get(e, 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def support(self) -> set[tuple[int, ...]]:
        return set(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def newton_polytope(self):
        from .polytope import LatticePolytope

        if not self.terms:
            raise InputError("empty support: the zero polynomial has no Newton polytope")
        return LatticePolytope.from_points(self.terms)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: LaurentPoly):
        if other.nvars != self.nvars:
            raise InputError(f"arity mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            if other.names == self.names:
                return other
            raise InputError(
                f"arity mismatch: variables {self.names} vs {other.names} "
                "(build parameter polynomials with laurent.ring)"
            )
        if isinstance(other, (int, Fraction, ResidueInt, LaurentPoly)):
            return self._like({(0,) * self.nvars: other} if not _is_zero(other) else {})
        return NotImplemented

    def _mod(self, other):
        return self.modulus if self.modulus is not None else getattr(other, "modulus", None)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        self._check(other)
        mod = self._mod(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return LaurentPoly(self.nvars, out, mod, self.names)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()}, self.modulus,
                           self.names)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        self._check(other)
        mod = self._mod(other)
        n = self.nvars
        if n == 0:
            a, b = self.constant_term(), other.constant_term()
            return LaurentPoly(0, {(): a * b}, mod, self.names)
        pa = {pack(e): c for e, c in self.terms.items()}
        pb = {pack(e): c for e, c in other.terms.items()}
        prod = mul_packed(pa, pb, mod)
        return self._like_mod({unpack(k, n): c for k, c in prod.items()}, mod)

    __rmul__ = __mul__

    def _like_mod(self, terms, mod):
        return LaurentPoly._raw(self.nvars, terms, mod, self.names)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if len(self.terms) != 1:
                raise InputError("only monomials have Laurent inverses")
            (k, c), = self.terms.items()
            if c not in (1, -1):
                raise InputError("monomial inverse needs a unit coefficient +-1")
            return self._like({tuple(e * x for x in k): c if e % 2 else 1})
        result = self.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                return False
            return _normal(self) == _normal(other)
        if isinstance(other, (int, Fraction, ResidueInt)):
            return _normal(self) == _normal(self._lift(other))
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(_normal(self).items()))

    # -- transformations ----------------------------------------------------
    def with_modulus(self, mod: int | None) -> LaurentPoly:
        """Same polynomial with coefficients reduced mod ``mod``."""
        return LaurentPoly(self.nvars, self.terms, mod, self.names)

    def to_residues(self, p: int, s: int) -> LaurentPoly:
        """Integer representatives mod p^s of every (p-integral) coefficient."""
        mod = p**s
        out = {}
        for e, c in self.terms.items():
            if isinstance(c, LaurentPoly):
                out[e] = c.to_residues(p, s)
            elif isinstance(c, ResidueInt):
                out[e] = c.value
            else:
                out[e] = embed_rational(c, p, s).value
        return LaurentPoly(self.nvars, out, mod, self.names)

    def map_coeffs(self, fn) -> LaurentPoly:
        return LaurentPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()}, self.modulus,
                           self.names)

    def map_exponents(self, fn) -> LaurentPoly:
        out: dict = {}
        for e, c in self.terms.items():
            k = tuple(fn(e))
            out[k] = out[k] + c if k in out else c
        return LaurentPoly(self.nvars, out, self.modulus, self.names)

    def shift(self, e) -> LaurentPoly:
        """Multiply by the monomial x^e."""
        e = tuple(e)
        return self._like({tuple(a + b for a, b in zip(k, e)): c for k, c in self.terms.items()})

    def frobenius(self, p: int) -> LaurentPoly:
        """Substitute x_i -> x_i^p."""
        return self._like({tuple(p * a for a in k): c for k, c in self.terms.items()})

    def log_derivative(self, i: int) -> LaurentPoly:
        """x_i d/dx_i."""
        return LaurentPoly(self.nvars, {e: e[i] * c for e, c in self.terms.items()},
                           self.modulus, self.names)

    def evaluate(self, point):
        """Substitute values for all variables (negative powers need invertible values)."""
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * (x**k)
            total = total + term
        return total

    def substitute_coeffs(self, point):
        """Evaluate nested (parameter) coefficients at ``point``."""
        out = {}
        for e, c in self.terms.items():
            out[e] = c.evaluate(point) if isinstance(c, LaurentPoly) else c
        return LaurentPoly(self.nvars, out, self.modulus, self.names)

    # -- display ------------------------------------------------------------
    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            parts.append(_format_term(c, e, self.names))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def ring(core: str | Iterable[str], params: str | Iterable[str] = ()):
    """Generators of Z[params][core^{+-1}], parameters embedded as constant coefficients.

    >>> (x,), (t,) = ring("x", "t")
    >>> f = 1 - t * (x + x**-1)
    """
    if isinstance(core, str):
        core = core.replace(",", " ").split()
    if isinstance(params, str):
        params = params.replace(",", " ").split()
    core, params = tuple(core), tuple(params)
    xs = LaurentPoly.variables(core)
    if not params:
        return xs, ()
    ps = LaurentPoly.variables(params)
    zero = (0,) * len(core)
    return xs, tuple(LaurentPoly(len(core), {zero: p}, None, core) for p in ps)


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.nvars != b.nvars or a.names != b.names:
        raise InputError(f"arity mismatch: {a.names} vs {b.names}")
    return a * b


def lp_pow(f: LaurentPoly, e: int) -> LaurentPoly:
    if e < 0:
        raise InputError("exponent must be nonnegative")
    return f**e


def lp_coeff(f: LaurentPoly, e):
    return f.coeff(e)


def lp_support(f: LaurentPoly):
    return f.support()


def lp_newton_polytope(f: LaurentPoly):
    return f.newton_polytope()


def _normal(f: LaurentPoly) -> dict:
    out = {}
    for e, c in f.terms.items():
        if isinstance(c, LaurentPoly):
            c = frozenset(_normal(c).items())
        elif isinstance(c, ResidueInt):
            c = c.value
        out[e] = c
    return out


def _default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def _format_monomial(e, names) -> str:
    bits = []
    for name, k in zip(names, e):
        if k == 1:
            bits.append(name)
        elif k:
            bits.append(f"{name}^{k}")
    return "*".join(bits)


def _format_term(c, e, names) -> str:
    mono = _format_monomial(e, names)
    if isinstance(c, LaurentPoly):
        cs = str(c)
        if len(c.terms) > 1:
            cs = f"({cs})"
    else:
        cs = str(c.value if isinstance(c, ResidueInt) else c)
    if not mono:
        return cs
    if cs == "1":
        return mono
    if cs == "-1":
        return f"-{mono}"
    return f"{cs}*{mono}"


# -- JSON -------------------------------------------------------------------

def _coeff_to_json(c):
    if isinstance(c, LaurentPoly):
        return to_json(c)
    if isinstance(c, ResidueInt):
        return str(c.value)
    return str(c)


def to_json(f: LaurentPoly, param_vars=None) -> dict:
    """Polynomial JSON: core variables at this level, parameters nested in coefficients."""
    inner = next((c for c in f.terms.values() if isinstance(c, LaurentPoly)), None)
    if param_vars is None:
        param_vars = list(inner.names) if inner is not None else []
    return {
        "core_vars": list(f.names) if f.nvars else [],
        "param_vars": list(param_vars) if f.nvars else list(f.names),
        "terms": [
            {"exps": list(e), "coeff": _coeff_to_json(c)} for e, c in sorted(f.terms.items())
        ],
    }


def _coeff_from_json(c, param_vars):
    if isinstance(c, dict):
        return from_json(c)
    if isinstance(c, int):
        return c
    q = Fraction(str(c))
    return q.numerator if q.denominator == 1 else q


def from_json(data: Mapping) -> LaurentPoly:
    try:
        core = list(data.get("core_vars", []))
        params = list(data.get("param_vars", []))
        names = core if core else params
        n = len(names)
        terms = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["exps"])
            c = _coeff_from_json(t["coeff"], params)
            if isinstance(c, LaurentPoly) and c.nvars == 0:
                c = c.constant_term()
            terms[e] = terms[e] + c if e in terms else c
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed polynomial JSON: {exc}") from exc
    return LaurentPoly(n, terms, None, names)
