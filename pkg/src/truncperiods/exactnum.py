"""Integers, residue rings Z/p^s, p-integral rationals and unit roots."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import (
    InfiniteValuationError,
    InputError,
    NotPIntegralError,
    SupersingularError,
)

#: Rationals are plain ``fractions.Fraction`` values (always reduced, den > 0).
PRational = Fraction


@dataclass
class Limits:
    max_prime: int = 97
    max_precision: int = 12


LIMITS = Limits()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def check_modulus(p: int, s: int) -> int:
    """Validate ``(p, s)`` against ``LIMITS`` and return ``p**s``."""
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    if p > LIMITS.max_prime:
        raise InputError(f"p = {p} exceeds configured maximum {LIMITS.max_prime}")
    if s < 1 or s > LIMITS.max_precision:
        raise InputError(f"precision s = {s} outside [1, {LIMITS.max_precision}]")
    return p**s


def padic_ord(n: int, p: int) -> int:
    """Largest e with p^e dividing n."""
    if n == 0:
        raise InfiniteValuationError("infinite valuation: ord_p(0)")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class ResidueInt:
    """An element of Z/p^s, stored as its representative in [0, p^s)."""

    p: int
    s: int
    value: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.s)

    @property
    def modulus(self) -> int:
        return self.p**self.s

    def _coerce(self, other):
        if isinstance(other, ResidueInt):
            if (other.p, other.s) != (self.p, self.s):
                raise InputError(
                    f"mixed residue rings Z/{self.p}^{self.s} and Z/{other.p}^{other.s}"
                )
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return embed_rational(other, self.p, self.s).value
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return ResidueInt(self.p, self.s, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return ResidueInt(self.p, self.s, self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return ResidueInt(self.p, self.s, v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return ResidueInt(self.p, self.s, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return ResidueInt(self.p, self.s, -self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ResidueInt(self.p, self.s, pow(self.value, e, self.modulus))

    def __eq__(self, other):
        if isinstance(other, ResidueInt):
            return (self.p, self.s, self.value) == (other.p, other.s, other.value)
        if isinstance(other, int):
            return (self.value - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.s, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.p}^{self.s}"

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> ResidueInt:
        if not self.is_unit():
            raise InputError(f"{self!r} is not invertible")
        return ResidueInt(self.p, self.s, pow(self.value, -1, self.modulus))

    # ring-element protocol shared with the series types (used by matrix inversion)
    def one_like(self) -> ResidueInt:
        return ResidueInt(self.p, self.s, 1)

    def zero_like(self) -> ResidueInt:
        return ResidueInt(self.p, self.s, 0)

    def is_zero(self) -> bool:
        return self.value == 0

    def constant_mod_p(self) -> int:
        return self.value % self.p

    def first_difference(self, other):
        return None if self == other else (None, self.value, int(other))

    def reduce(self, s: int) -> ResidueInt:
        """Image under Z/p^self.s -> Z/p^s (requires s <= self.s)."""
        if s > self.s:
            raise InputError(f"cannot lift precision {self.s} to {s}")
        return ResidueInt(self.p, s, self.value)


def embed_rational(q, p: int, s: int) -> ResidueInt:
    """Image of the p-integral rational ``q`` in Z/p^s."""
    q = Fraction(q)
    if q.denominator % p == 0:
        raise NotPIntegralError(f"not p-integral: {q} at p = {p}")
    m = p**s
    return ResidueInt(p, s, q.numerator * pow(q.denominator, -1, m))


def hensel_unit_root(a_p: int, p: int, s: int) -> ResidueInt:
    """Unit root of T^2 - a_p T + p in Z/p^s, lifted one digit at a time.

    The root reduces to a_p mod p; the derivative 2T - a_p is then a unit.
    """
    if p == 2:
        raise InputError("hensel_unit_root requires an odd prime")
    if a_p % p == 0:
        raise SupersingularError(f"supersingular: no unit root (p = {p} divides a_p = {a_p})")
    lam = a_p % p
    mod = p
    for _ in range(1, s):
        mod_next = mod * p
        # lam is a root mod `mod`; correct it by a multiple of `mod`
        val = (lam * lam - a_p * lam + p) % mod_next
        deriv = (2 * lam - a_p) % p
        k = (-(val // mod) * pow(deriv, -1, p)) % p
        lam = (lam + k * mod) % mod_next
        mod = mod_next
    return ResidueInt(p, s, lam)
