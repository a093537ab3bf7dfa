"""Truncated power-series rings and exact matrix algebra over them.

``TruncSeries`` lives in (Z/p^s)[t]/(t^T).  ``ConeSeries`` is a series in
v_1..v_N supported on kernel vectors of the A-matrix, truncated at weight
``|l| = sum of positive entries <= M``; its coefficients are reduced mod p^s
or kept as exact integers when ``modulus`` is None.
"""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InputError, NotAUnitError, SingularMatrixError
from .exactnum import ResidueInt, check_modulus


class TruncSeries:
    """Element of (Z/p^s)[[t]] modulo t^T, coefficients stored as ints in [0, p^s)."""

    __slots__ = ("p", "s", "T", "coeffs")

    def __init__(self, p: int, s: int, T: int, coeffs: Iterable = ()):
        if T < 1:
            raise InputError(f"truncation order T = {T} must be positive")
        m = check_modulus(p, s)
        cs = [int(c) % m for c, _ in zip(coeffs, range(T))]
        cs.extend([0] * (T - len(cs)))
        self.p, self.s, self.T = p, s, T
        self.coeffs = tuple(cs)

    @property
    def modulus(self) -> int:
        return self.p**self.s

    @classmethod
    def _raw(cls, p, s, T, coeffs):
        obj = cls.__new__(cls)
        obj.p, obj.s, obj.T, obj.coeffs = p, s, T, tuple(coeffs)
        return obj

    def _like(self, coeffs) -> TruncSeries:
        m = self.modulus
        return TruncSeries._raw(self.p, self.s, self.T, (c % m for c in coeffs))

    def zero_like(self) -> TruncSeries:
        return TruncSeries._raw(self.p, self.s, self.T, (0,) * self.T)

    def one_like(self) -> TruncSeries:
        return TruncSeries._raw(self.p, self.s, self.T, (1,) + (0,) * (self.T - 1))

    def _same(self, other: TruncSeries):
        if (self.p, self.s, self.T) != (other.p, other.s, other.T):
            raise InputError(
                f"incompatible series rings (p,s,T) = {(self.p, self.s, self.T)} "
                f"vs {(other.p, other.s, other.T)}"
            )

    def _lift(self, other):
        if isinstance(other, TruncSeries):
            self._same(other)
            return other
        if isinstance(other, ResidueInt):
            other = other.value
        if isinstance(other, int):
            return TruncSeries._raw(self.p, self.s, self.T,
                                    (other % self.modulus,) + (0,) * (self.T - 1))
        return NotImplemented

    def coeff(self, k: int) -> ResidueInt:
        return ResidueInt(self.p, self.s, self.coeffs[k] if k < self.T else 0)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.T

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._like(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self._like(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._like(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        T, m = self.T, self.modulus
        a = self.coeffs
        b = other.coeffs
        out = [0] * T
        nz = [(i, x) for i, x in enumerate(a) if x]
        for j, y in enumerate(b):
            if not y:
                continue
            lim = T - j
            for i, x in nz:
                if i >= lim:
                    break
                out[i + j] += x * y
        return TruncSeries._raw(self.p, self.s, T, (c % m for c in out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.one_like(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (self.p, self.s, self.T, self.coeffs) == (other.p, other.s, other.T,
                                                               other.coeffs)
        if isinstance(other, int):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.s, self.T, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def constant_mod_p(self) -> int:
        return self.coeffs[0] % self.p

    def is_unit(self) -> bool:
        return self.coeffs[0] % self.p != 0

    def inverse(self) -> TruncSeries:
        """g with f g = 1 mod t^T, by the usual coefficient recursion."""
        if not self.is_unit():
            raise NotAUnitError(f"not a unit: constant term {self.coeffs[0]} is divisible by {self.p}")
        m, T = self.modulus, self.T
        a = self.coeffs
        c0inv = pow(a[0], -1, m)
        g = [0] * T
        g[0] = c0inv
        nz = [(i, x) for i, x in enumerate(a) if x and i]
        for k in range(1, T):
            acc = 0
            for i, x in nz:
                if i > k:
                    break
                acc += x * g[k - i]
            g[k] = (-acc * c0inv) % m
        return TruncSeries._raw(self.p, self.s, T, g)

    def frobenius(self, p: int | None = None) -> TruncSeries:
        """t -> t^p; terms pushed past t^(T-1) are dropped."""
        p = self.p if p is None else p
        out = [0] * self.T
        for k, c in enumerate(self.coeffs):
            if k * p >= self.T:
                break
            out[k * p] = c
        return TruncSeries._raw(self.p, self.s, self.T, out)

    def derive(self) -> TruncSeries:
        """t d/dt."""
        return self._like(k * c for k, c in enumerate(self.coeffs))

    def ddt(self) -> TruncSeries:
        """d/dt; the top coefficient becomes 0 (unknown beyond t^(T-2))."""
        out = [(k + 1) * c for k, c in enumerate(self.coeffs[1:])] + [0]
        return self._like(out)

    def truncate(self, T: int) -> TruncSeries:
        if T > self.T:
            raise InputError(f"cannot extend truncation order {self.T} to {T}")
        return TruncSeries._raw(self.p, self.s, T, self.coeffs[:T])

    def reduce(self, s: int) -> TruncSeries:
        if s > self.s:
            raise InputError(f"cannot lift precision {self.s} to {s}")
        m = self.p**s
        return TruncSeries._raw(self.p, s, self.T, (c % m for c in self.coeffs))

    def evaluate(self, t0) -> ResidueInt:
        """Value of the (polynomial) truncation at t0 in Z/p^s."""
        m = self.modulus
        t0 = t0.value if isinstance(t0, ResidueInt) else int(t0)
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * t0 + c) % m
        return ResidueInt(self.p, self.s, acc)

    def first_difference(self, other: TruncSeries):
        """Index and values of the lowest differing coefficient, or None."""
        self._same(other)
        for k, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return k, a, b
        return None

    def __repr__(self):
        return f"TruncSeries(p={self.p}, s={self.s}, T={self.T}, {self})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append("t" if c == 1 else f"{c}*t")
            else:
                parts.append(f"t^{k}" if c == 1 else f"{c}*t^{k}")
        return (" + ".join(parts) or "0") + f" + O(t^{self.T})"

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "T": self.T, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> TruncSeries:
        try:
            return cls(int(data["p"]), int(data["s"]), int(data["T"]),
                       [int(c) for c in data["coeffs"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed series JSON: {exc}") from exc


def weight(ell: Sequence[int]) -> int:
    """|l| = sum of the positive coordinates."""
    return sum(x for x in ell if x > 0)


class ConeSeries:
    """Series sum b_l v^l over cone lattice vectors l with |l| <= M.

    ``context`` supplies ``nvars`` and ``validate_key(l)``; keys handed to the
    public constructor are validated, results of ring operations are not
    re-checked (the cone is closed under addition).
    """

    __slots__ = ("context", "M", "p", "modulus", "terms")

    def __init__(self, context, M: int, terms: Mapping | None = None, p: int | None = None,
                 s: int | None = None, validate: bool = True):
        self.context = context
        self.M = M
        self.p = p
        self.modulus = p**s if (p is not None and s is not None) else None
        out = {}
        for ell, c in (terms or {}).items():
            ell = tuple(int(x) for x in ell)
            if validate:
                context.validate_key(ell)
            if weight(ell) > M:
                continue
            c = int(c)
            if self.modulus is not None:
                c %= self.modulus
            if c:
                out[ell] = out.get(ell, 0) + c
        self.terms = {k: c for k, c in out.items() if c}

    @property
    def s(self) -> int | None:
        if self.modulus is None:
            return None
        s, m = 0, self.modulus
        while m > 1:
            m //= self.p
            s += 1
        return s

    def _like(self, terms: Mapping, M: int | None = None) -> ConeSeries:
        obj = ConeSeries.__new__(ConeSeries)
        obj.context, obj.M, obj.p, obj.modulus = self.context, self.M if M is None else M, \
            self.p, self.modulus
        mod = self.modulus
        if mod is None:
            obj.terms = {k: c for k, c in terms.items() if c}
        else:
            obj.terms = {k: c % mod for k, c in terms.items() if c % mod}
        if M is not None:
            obj.terms = {k: c for k, c in obj.terms.items() if weight(k) <= M}
        return obj

    def _zero_key(self):
        return (0,) * self.context.nvars

    def zero_like(self) -> ConeSeries:
        return self._like({})

    def one_like(self) -> ConeSeries:
        return self._like({self._zero_key(): 1})

    def _same(self, other: ConeSeries):
        if other.M != self.M or other.modulus != self.modulus:
            raise InputError(
                f"incompatible cone series (M, modulus) = {(self.M, self.modulus)} "
                f"vs {(other.M, other.modulus)}"
            )

    def _lift(self, other):
        if isinstance(other, ConeSeries):
            self._same(other)
            return other
        if isinstance(other, ResidueInt):
            other = other.value
        if isinstance(other, int):
            return self._like({self._zero_key(): other})
        return NotImplemented

    def coeff(self, ell) -> int:
        return self.terms.get(tuple(ell), 0)

    def constant_term(self) -> int:
        return self.terms.get(self._zero_key(), 0)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

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
        M = self.M
        out: dict = {}
        a = [(k, c, weight(k)) for k, c in self.terms.items()]
        b = list(other.terms.items())
        for ka, ca, wa in a:
            for kb, cb in b:
                k = tuple(x + y for x, y in zip(ka, kb))
                if weight(k) <= M:
                    out[k] = out.get(k, 0) + ca * cb
        return self._like(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ConeSeries):
            return (self.M, self.modulus, self.terms) == (other.M, other.modulus, other.terms)
        if isinstance(other, int):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.M, self.modulus, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_mod_p(self) -> int:
        c = self.constant_term()
        return c % self.p if self.p is not None else c

    def is_unit(self) -> bool:
        c = self.constant_term()
        if self.modulus is None:
            return c in (1, -1)
        return c % self.p != 0

    def inverse(self) -> ConeSeries:
        """Fixed-point iteration g <- c0^-1 + h g with f = c0 (1 - h)."""
        if not self.is_unit():
            raise NotAUnitError(f"not a unit: constant term {self.constant_term()}")
        c0 = self.constant_term()
        c0inv = c0 if self.modulus is None else pow(c0, -1, self.modulus)
        h = self._like({k: -c * c0inv for k, c in self.terms.items() if any(k)})
        g = self._like({self._zero_key(): c0inv})
        for _ in range(4 * self.M + 8):
            nxt = h * g + c0inv
            if nxt == g:
                return g
            g = nxt
        raise InputError("series inverse did not stabilise; is the cone pointed?")

    def frobenius(self, p: int | None = None) -> ConeSeries:
        """v_j -> v_j^p; keys whose weight exceeds M are dropped."""
        p = self.p if p is None else p
        out = {}
        for k, c in self.terms.items():
            if p * weight(k) <= self.M:
                out[tuple(p * x for x in k)] = c
        return self._like(out)

    def derive(self, i: int) -> ConeSeries:
        """v_i d/dv_i (0-based index i)."""
        return self._like({k: k[i] * c for k, c in self.terms.items()})

    def truncate(self, M: int) -> ConeSeries:
        if M > self.M:
            raise InputError(f"cannot extend weight bound {self.M} to {M}")
        return self._like(self.terms, M)

    def reduce(self, p: int, s: int) -> ConeSeries:
        if self.p is not None and p != self.p:
            raise InputError("prime mismatch")
        mod = p**s
        if self.modulus is not None and self.modulus % mod:
            raise InputError(f"cannot lift modulus {self.modulus} to {mod}")
        obj = ConeSeries.__new__(ConeSeries)
        obj.context, obj.M, obj.p, obj.modulus = self.context, self.M, p, mod
        obj.terms = {k: c % mod for k, c in self.terms.items() if c % mod}
        return obj

    def first_difference(self, other: ConeSeries, max_weight: int | None = None):
        """Lowest-weight key (ties broken lexicographically) where the two differ."""
        keys = set(self.terms) | set(other.terms)
        if max_weight is not None:
            keys = {k for k in keys if weight(k) <= max_weight}
        mod = self.modulus
        for k in sorted(keys, key=lambda k: (weight(k), k)):
            a, b = self.terms.get(k, 0), other.terms.get(k, 0)
            if (a - b) % mod if mod is not None else a != b:
                return k, a, b
        return None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (weight(kv[0]), kv[0]))

    def __repr__(self):
        return f"ConeSeries(M={self.M}, modulus={self.modulus}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_terms():
            mono = "*".join(
                (f"v{i + 1}" if e == 1 else f"v{i + 1}^{e}") for i, e in enumerate(k) if e
            )
            parts.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "p": self.p,
            "modulus": None if self.modulus is None else str(self.modulus),
            "terms": [{"ell": list(k), "coeff": str(c)} for k, c in self.sorted_terms()],
        }


class PeriodMatrix:
    """Square matrix with labelled rows/columns over any of the rings above."""

    def __init__(self, labels: Sequence, rows: Sequence[Sequence]):
        self.labels = tuple(labels)
        self.rows = tuple(tuple(r) for r in rows)
        h = len(self.labels)
        if len(self.rows) != h or any(len(r) != h for r in self.rows):
            raise InputError("period matrix must be square and match its labels")

    @property
    def size(self) -> int:
        return len(self.labels)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, u, v):
        return self.rows[self.labels.index(u)][self.labels.index(v)]

    def map(self, fn: Callable) -> PeriodMatrix:
        return PeriodMatrix(self.labels, [[fn(x) for x in r] for r in self.rows])

    def __add__(self, other: PeriodMatrix) -> PeriodMatrix:
        return PeriodMatrix(self.labels, [[a + b for a, b in zip(r1, r2)]
                                          for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: PeriodMatrix) -> PeriodMatrix:
        return PeriodMatrix(self.labels, [[a - b for a, b in zip(r1, r2)]
                                          for r1, r2 in zip(self.rows, other.rows)])

    def __matmul__(self, other: PeriodMatrix) -> PeriodMatrix:
        h = self.size
        out = []
        for i in range(h):
            row = []
            for j in range(h):
                acc = self.rows[i][0] * other.rows[0][j]
                for k in range(1, h):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return PeriodMatrix(self.labels, out)

    def __eq__(self, other):
        if not isinstance(other, PeriodMatrix):
            return NotImplemented
        return self.labels == other.labels and self.rows == other.rows

    def permuted(self, order: Sequence[int]) -> PeriodMatrix:
        """Conjugate by the permutation listing old indices in their new order."""
        return PeriodMatrix([self.labels[i] for i in order],
                            [[self.rows[i][j] for j in order] for i in order])

    def constant_mod_p(self) -> list[list[int]]:
        return [[x.constant_mod_p() if hasattr(x, "constant_mod_p") else x for x in r]
                for r in self.rows]

    def det(self):
        """Leibniz expansion; meant for the small (h <= 6) matrices used here."""
        h = self.size
        total = None
        for perm in permutations(range(h)):
            sign = _perm_sign(perm)
            term = self.rows[0][perm[0]]
            for i in range(1, h):
                term = term * self.rows[i][perm[i]]
            if sign < 0:
                term = -term
            total = term if total is None else total + term
        return total

    def inverse(self) -> PeriodMatrix:
        return sr_mat_inverse(self)

    def first_difference(self, other: PeriodMatrix, **kw):
        """(row label, column label, detail) of the first differing entry, or None."""
        for i, (r1, r2) in enumerate(zip(self.rows, other.rows)):
            for j, (a, b) in enumerate(zip(r1, r2)):
                if hasattr(a, "first_difference"):
                    d = a.first_difference(b, **kw)
                    if d is not None:
                        return self.labels[i], self.labels[j], d
                elif a != b:
                    return self.labels[i], self.labels[j], (None, a, b)
        return None

    def __repr__(self):
        return f"PeriodMatrix({list(self.labels)}, {[list(map(str, r)) for r in self.rows]})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cyc = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cyc += 1
        if cyc % 2 == 0:
            sign = -sign
    return sign


def sr_inverse(f):
    return f.inverse()


def sr_frobenius(f, p: int | None = None):
    return f.frobenius(p)


def sr_derive(f, which: int = 0):
    if isinstance(f, TruncSeries):
        return f.derive()
    return f.derive(which)


def sr_mat_inverse(M: PeriodMatrix) -> PeriodMatrix:
    """Gauss-Jordan elimination with unit pivots over a local ring."""
    h = M.size
    if h == 0:
        return M
    sample = M.rows[0][0]
    one, zero = sample.one_like(), sample.zero_like()
    a = [list(r) + [one if i == j else zero for j in range(h)] for i, r in enumerate(M.rows)]
    for c in range(h):
        piv = next((r for r in range(c, h) if a[r][c].is_unit()), None)
        if piv is None:
            red = M.constant_mod_p()
            p = getattr(sample, "p", None)
            raise SingularMatrixError(
                f"constant-term matrix is singular mod {p}: {red}", reduction=red,
                det_mod_p=_det_mod(red, p) if p else None,
            )
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c].inverse()
        a[c] = [x * inv for x in a[c]]
        for r in range(h):
            if r != c and not a[r][c].is_zero():
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return PeriodMatrix(M.labels, [row[h:] for row in a])


def _det_mod(rows, p) -> int:
    m = PeriodMatrix(range(len(rows)), rows)
    return m.det() % p
