"""Exact scalars over the rationals, cyclotomic fields and prime fields.

A cyclotomic field of order ``m`` is modelled as Q[x]/Phi_m(x), so elements
are coordinate vectors of length ``phi(m)`` in the power basis of the class of
``x``.  Prime-field elements are residues stored in a length-one vector.

>>> K = cyclotomic(4)
>>> i = primitive_root(4, K)
>>> i * i == K(-1)
True
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import KirbyLabError


class DescriptorMismatch(KirbyLabError):
    """Operands live in different fields."""


class DivisionByZero(KirbyLabError, ZeroDivisionError):
    """Inverse of zero requested."""


class NoSuchRoot(KirbyLabError):
    """The field has no primitive root of unity of the requested order."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, lowest degree first)


def _poly_divexact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        coef = num[k + len(den) - 1] // den[-1]
        out[k] = coef
        for j, d in enumerate(den):
            num[k + j] -= coef * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def _multiplicative_order(x: int, p: int) -> int:
    k, y = 1, x % p
    while y != 1:
        y = (y * x) % p
        k += 1
    return k


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDescriptor:
    """Identifies a field: ``rationals``, ``cyclotomic`` (order m) or ``prime`` (p)."""

    kind: str
    m: int = 1
    p: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("rationals", "cyclotomic", "prime"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "cyclotomic" and self.m < 1:
            raise ValueError("cyclotomic order must be >= 1")
        if self.kind == "prime" and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    # -- structure ---------------------------------------------------------
    @property
    def degree(self) -> int:
        if self.kind == "cyclotomic":
            return len(cyclotomic_polynomial(self.m)) - 1
        return 1

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    @property
    def modulus(self) -> tuple[int, ...]:
        if self.kind == "cyclotomic":
            return cyclotomic_polynomial(self.m)
        return (0, 1)

    def reduction_table(self) -> list[list[int]]:
        """Row k holds the coordinates of x^k mod Phi_m for 0 <= k <= 2(deg-1)."""
        if "red" not in self._cache:
            c = self.degree
            mod = self.modulus
            rows = []
            cur = [0] * c
            cur[0] = 1
            for _ in range(max(2 * c - 1, 1)):
                rows.append(list(cur))
                # multiply by x and reduce
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [cur[j] - top * mod[j] for j in range(c)]
            self._cache["red"] = rows
        return self._cache["red"]

    def mul_tensor(self) -> np.ndarray:
        """Integer tensor C with (u*v)_k = sum_ij C[i,j,k] u_i v_j in coordinates."""
        if "mt" not in self._cache:
            c = self.degree
            red = self.reduction_table()
            C = np.zeros((c, c, c), dtype=object)
            for i in range(c):
                for j in range(c):
                    for k, v in enumerate(red[i + j]):
                        C[i, j, k] = v
            self._cache["mt"] = C
        return self._cache["mt"]

    # -- element construction ---------------------------------------------
    def __call__(self, value=0) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DescriptorMismatch(f"{value.field} vs {self}")
            return value
        c = self.degree
        if self.kind == "prime":
            if isinstance(value, Fraction):
                v = value.numerator * pow(value.denominator, -1, self.p)
            else:
                v = int(value)
            return FieldElement(self, (v % self.p,))
        coords = [Fraction(0)] * c
        coords[0] = Fraction(value)
        return FieldElement(self, tuple(coords))

    def from_coords(self, coords) -> "FieldElement":
        coords = tuple(coords)
        if len(coords) != self.degree:
            raise ValueError("coordinate length does not match field degree")
        if self.kind == "prime":
            return FieldElement(self, (int(coords[0]) % self.p,))
        return FieldElement(self, tuple(Fraction(x) for x in coords))

    def zero(self) -> "FieldElement":
        return self(0)

    def one(self) -> "FieldElement":
        return self(1)

    def gen(self) -> "FieldElement":
        """Class of x in Q[x]/Phi_m (the defining primitive m-th root)."""
        if self.kind != "cyclotomic":
            raise NoSuchRoot("only cyclotomic fields have a defining generator")
        c = self.degree
        if c == 1:
            return self(-self.modulus[0])
        coords = [Fraction(0)] * c
        coords[1] = Fraction(1)
        return FieldElement(self, tuple(coords))

    # -- serialization ------------------------------------------------------
    def to_json(self):
        if self.kind == "rationals":
            return "Q"
        if self.kind == "cyclotomic":
            return f"cyclotomic:{self.m}"
        return f"prime:{self.p}"

    @staticmethod
    def from_json(text: str) -> "FieldDescriptor":
        text = str(text).strip()
        if text in ("Q", "rationals", "QQ"):
            return rationals()
        kind, _, arg = text.partition(":")
        if kind == "cyclotomic":
            return cyclotomic(int(arg))
        if kind == "prime":
            return prime(int(arg))
        raise ValueError(f"unknown field descriptor {text!r}")

    def parse(self, obj) -> "FieldElement":
        """Decode the JSON scalar encoding (rational strings, or arrays of them)."""
        if isinstance(obj, FieldElement):
            return self(obj)
        if isinstance(obj, (list, tuple)):
            vals = [Fraction(str(v)) for v in obj]
            vals += [Fraction(0)] * (self.degree - len(vals))
            if len(vals) > self.degree:
                # longer power-basis vectors are reduced through the generator
                z = self.gen() if self.kind == "cyclotomic" else None
                acc = self.zero()
                for k, v in enumerate(vals):
                    acc = acc + self(v) * (z ** k)
                return acc
            if self.kind == "prime":
                return self(vals[0])
            return self.from_coords(vals)
        return self(Fraction(str(obj)))

    def __str__(self):
        return self.to_json()


def rationals() -> FieldDescriptor:
    return _RATIONALS


def cyclotomic(m: int) -> FieldDescriptor:
    return _cyclotomic_cached(int(m))


@lru_cache(maxsize=None)
def _cyclotomic_cached(m: int) -> FieldDescriptor:
    return FieldDescriptor("cyclotomic", m=m)


def prime(p: int) -> FieldDescriptor:
    return _prime_cached(int(p))


@lru_cache(maxsize=None)
def _prime_cached(p: int) -> FieldDescriptor:
    return FieldDescriptor("prime", p=p)


_RATIONALS = FieldDescriptor("rationals")


# ---------------------------------------------------------------------------


class FieldElement:
    """Immutable exact scalar.  Arithmetic requires identical descriptors."""

    __slots__ = ("field", "coords", "_h")

    def __init__(self, fld: FieldDescriptor, coords):
        self.field = fld
        self.coords = coords
        self._h = None

    # -- helpers -----------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise DescriptorMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __bool__(self):
        return not self.is_zero()

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.field.kind == "prime":
            return FieldElement(self.field, ((self.coords[0] + o.coords[0]) % self.field.p,))
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        if self.field.kind == "prime":
            return FieldElement(self.field, ((-self.coords[0]) % self.field.p,))
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        fld = self.field
        if fld.kind == "prime":
            return FieldElement(fld, ((self.coords[0] * o.coords[0]) % fld.p,))
        a, b = self.coords, o.coords
        if len(a) == 1:
            return FieldElement(fld, (a[0] * b[0],))
        if not any(b[1:]):
            s = b[0]
            return FieldElement(fld, tuple(x * s for x in a))
        if not any(a[1:]):
            s = a[0]
            return FieldElement(fld, tuple(x * s for x in b))
        c = len(a)
        red = fld.reduction_table()
        out = [Fraction(0)] * c
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, r in enumerate(red[i + j]):
                    if r:
                        out[k] += r * xy
        return FieldElement(fld, tuple(out))

    __rmul__ = __mul__

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self in power-basis coordinates."""
        c = self.field.degree
        red = self.field.reduction_table()
        M = [[Fraction(0)] * c for _ in range(c)]
        for j in range(c):  # image of basis vector x^j
            for i, x in enumerate(self.coords):
                if x:
                    for k, r in enumerate(red[i + j]):
                        if r:
                            M[k][j] += r * x
        return M

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        fld = self.field
        if fld.kind == "prime":
            return FieldElement(fld, (pow(self.coords[0], -1, fld.p),))
        if self.is_rational():
            return fld(1 / self.coords[0])
        M = self.mult_matrix()
        c = len(M)
        aug = [row[:] + [Fraction(1 if r == 0 else 0)] for r, row in enumerate(M)]
        for col in range(c):
            piv = next(r for r in range(col, c) if aug[r][col])
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(c):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return FieldElement(fld, tuple(aug[r][c] for r in range(c)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords == self.field(other).coords
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.field.kind, self.field.m, self.field.p, self.coords))
        return self._h

    # -- conversion --------------------------------------------------------
    def to_json(self):
        if self.field.kind == "cyclotomic" and self.field.degree > 1:
            return [_frac_str(x) for x in self.coords]
        if self.field.kind == "prime":
            return str(self.coords[0])
        return _frac_str(self.coords[0])

    def approx(self) -> complex:
        """Complex approximation under x -> exp(2 pi i/m); display only."""
        if self.field.kind == "prime":
            return complex(self.coords[0])
        z = cmath.exp(2j * cmath.pi / self.field.m) if self.field.kind == "cyclotomic" else 1
        return sum(float(x) * z**k for k, x in enumerate(self.coords))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        if self.field.kind == "prime":
            return f"{self.coords[0]} (mod {self.field.p})"
        if len(self.coords) == 1:
            return _frac_str(self.coords[0])
        terms = []
        for k, x in enumerate(self.coords):
            if not x:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and x == 1:
                terms.append(mono)
            elif mono and x == -1:
                terms.append("-" + mono)
            else:
                terms.append(_frac_str(x) + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def primitive_root(m: int, fld: FieldDescriptor) -> FieldElement:
    """A primitive m-th root of unity in ``fld``.

    Cyclotomic fields return a power of the defining generator (or of its
    negative when the order is odd and m divides twice the order).  Prime
    fields return the smallest residue of multiplicative order exactly m.
    """
    m = int(m)
    if m < 1:
        raise NoSuchRoot("order must be positive")
    if fld.kind == "rationals":
        if m == 1:
            return fld(1)
        if m == 2:
            return fld(-1)
        raise NoSuchRoot(f"Q has no primitive {m}-th root of unity")
    if fld.kind == "prime":
        p = fld.p
        if (p - 1) % m:
            raise NoSuchRoot(f"{m} does not divide {p}-1")
        for x in range(1, p):
            if _multiplicative_order(x, p) == m:
                return fld(x)
        raise NoSuchRoot(f"no element of order {m} mod {p}")  # pragma: no cover
    M = fld.m
    z = fld.gen()
    if M % m == 0:
        return z ** (M // m)
    if M % 2 == 1 and (2 * M) % m == 0:
        return (-z) ** (2 * M // m)
    raise NoSuchRoot(f"Q(zeta_{M}) has no primitive {m}-th root of unity")


def root_order(x: FieldElement, bound: int = 10_000) -> int | None:
    """Multiplicative order of x, or None if it exceeds ``bound``."""
    one = x.field.one()
    y = x
    for k in range(1, bound + 1):
        if y == one:
            return k
        y = y * x
    return None


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
