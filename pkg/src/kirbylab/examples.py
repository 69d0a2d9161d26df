"""Worked ribbon Hopf algebras: the family H_n and cyclic group algebras."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import KirbyLabError
from .exactfield import FieldDescriptor, FieldElement, NoSuchRoot, _is_prime, cyclotomic, primitive_root, prime, rationals
from .farray import FArray, einsum
from .hopfcore import AlgebraElement, HopfPresentation, TensorElement
from .ribboncore import RibbonStructure


class BadCharacteristic(KirbyLabError):
    """The ground field's characteristic divides 2n."""


class NoRoot(KirbyLabError):
    """The ground field has no primitive 2n-th root of unity."""


class InvalidParameters(KirbyLabError):
    """Parameters outside the allowed range (n even, s even, ...)."""


class NotADivisor(KirbyLabError):
    """d does not divide n."""


@dataclass(frozen=True)
class HnSpec:
    n: int
    s: int
    beta: FieldElement
    field: FieldDescriptor
    omega: FieldElement

    @classmethod
    def make(cls, n: int, s: int = 1, beta=1, p: int | None = None) -> "HnSpec":
        if n < 1 or n % 2 == 0:
            raise InvalidParameters(f"n must be an odd positive integer, got {n}")
        if s % 2 == 0 or not 1 <= s < 2 * n:
            raise InvalidParameters(f"s must be odd with 1 <= s < 2n, got {s}")
        if p is None:
            fld = cyclotomic(2 * n)
        else:
            if not _is_prime(p):
                raise BadCharacteristic(f"{p} is not prime")
            if (2 * n) % p == 0:
                raise BadCharacteristic(f"characteristic {p} divides 2n = {2 * n}")
            if (p - 1) % (2 * n):
                raise NoRoot(f"F_{p} has no primitive {2 * n}-th root of unity")
            fld = prime(p)
        try:
            omega = primitive_root(2 * n, fld)
        except NoSuchRoot as exc:
            raise NoRoot(str(exc)) from None
        return cls(n, s, fld(beta), fld, omega)


def _hn_index(n: int, l: int, m: int) -> int:
    return (l % (2 * n)) + 2 * n * m


def _hn_names(n: int):
    names = []
    for m in (0, 1):
        for l in range(2 * n):
            a = "" if l == 0 else ("a" if l == 1 else f"a^{l}")
            if m == 0:
                names.append(a or "1")
            else:
                names.append(a + "x")
    return names


@lru_cache(maxsize=None)
def _hn_algebra(n: int, fld: FieldDescriptor) -> HopfPresentation:
    N = 2 * n
    dim = 2 * N
    idx = lambda l, m: _hn_index(n, l, m)
    M = np.zeros((dim, dim, dim), dtype=object)
    D = np.zeros((dim, dim, dim), dtype=object)
    S = np.zeros((dim, dim), dtype=object)
    eps = np.zeros(dim, dtype=object)
    for arr in (M, D, S, eps):
        arr[...] = 0
    for l in range(N):
        for m in (0, 1):
            for k in range(N):
                for r in (0, 1):
                    if m + r < 2:
                        M[idx(l, m), idx(k, r), idx(l + k, m + r)] = (-1) ** (m * k)
        D[idx(l, 0), idx(l, 0), idx(l, 0)] = 1
        D[idx(l, 1), idx(l, 1), idx(l + n, 0)] = 1
        D[idx(l, 1), idx(l, 0), idx(l, 1)] = 1
        eps[idx(l, 0)] = 1
        S[idx(l, 0), idx(-l, 0)] = 1
        S[idx(l, 1), idx(n - l, 1)] = (-1) ** l
    unit = [0] * dim
    unit[0] = 1
    return HopfPresentation(
        fld, _hn_names(n), FArray.from_ints(fld, M), FArray.from_ints(fld, unit),
        FArray.from_ints(fld, D), FArray.from_ints(fld, eps), FArray.from_ints(fld, S),
    )


def _idempotents(fld, omega, N):
    """E[l, i]: coefficient of a^i in e_l = (1/N) sum_i omega^{-il} a^i."""
    inv = fld(1) / N
    return [[omega ** (-i * l) * inv for i in range(N)] for l in range(N)]


@lru_cache(maxsize=None)
def radford_hn(spec: HnSpec) -> tuple[HopfPresentation, RibbonStructure]:
    """The 4n-dimensional ribbon Hopf algebra H_n with R_{omega,s,beta} and its twist."""
    n, s, fld, omega, beta = spec.n, spec.s, spec.field, spec.omega, spec.beta
    H = _hn_algebra(n, fld)
    N = 2 * n
    E = _idempotents(fld, omega, N)
    R = np.empty((H.dim, H.dim), dtype=object)
    R[...] = fld.zero()
    for l in range(N):
        for i in range(N):
            R[_hn_index(n, i, 0), _hn_index(n, s * l, 0)] += E[l][i]
            R[_hn_index(n, i, 1), _hn_index(n, s * l + n, 1)] += beta * E[l][i]
    # theta = a^n chi(omega^s), chi(alpha) = sum_l alpha^{l^2} e_l
    chi = [fld.zero()] * H.dim
    for l in range(N):
        c = omega ** (s * l * l)
        for i in range(N):
            chi[i] = chi[i] + c * E[l][i]
    an = H.basis_element(n)
    theta = an * H.element(chi)
    return H, RibbonStructure(H, FArray.from_elements(fld, R), theta)


def sweedler(p: int | None = None):
    return radford_hn(HnSpec.make(1, 1, 1, p))


def hn(n: int, s: int = 1, beta=1, p: int | None = None):
    return radford_hn(HnSpec.make(n, s, beta, p))


def hn_element(H: HopfPresentation, n: int, l: int, m: int) -> AlgebraElement:
    return H.basis_element(_hn_index(n, l, m))


def hn_zd(spec: HnSpec, d: int) -> AlgebraElement:
    """z_d = sum_{k=0}^{n/d-1} a^{2dk+n} x."""
    n = spec.n
    if d < 1 or n % d:
        raise NotADivisor(f"{d} does not divide {n}")
    H, _ = radford_hn(spec)
    z = H.zero()
    for k in range(n // d):
        z = z + hn_element(H, n, 2 * d * k + n, 1)
    return z


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def gauss_theta(spec: HnSpec, d: int, sign: int, alpha=1) -> FieldElement:
    """(alpha/2d) sum_{k<2d} (omega^{n/d})^{sign s (n/d) k^2 + n k}."""
    n, s, fld = spec.n, spec.s, spec.field
    if d < 1 or n % d:
        raise NotADivisor(f"{d} does not divide {n}")
    w = spec.omega ** (n // d)
    tot = fld.zero()
    for k in range(2 * d):
        tot = tot + w ** (sign * s * (n // d) * k * k + n * k)
    return tot * fld(alpha) / (2 * d)


def hn_known_data(spec: HnSpec) -> dict:
    """Closed-form structure data of H_n, built directly from the formulas."""
    n = spec.n
    N = 2 * n
    H, _ = radford_hn(spec)
    el = lambda l, m: hn_element(H, n, l, m)
    Lam = H.zero()
    for i in range(N):
        Lam = Lam + el(i, 1)
    lam = [0] * H.dim
    lam[_hn_index(n, n, 1)] = 1
    nu = [(-1) ** l for l in range(N)] + [0] * N
    T = {}
    for k in range(N):
        T[(k, 0)] = el(n - k, 0) * ((-1) ** k)
        T[(k, 1)] = el(-k, 1)
    L_basis = [el(k, 1) for k in range(N)]
    Z_basis = [el(2 * k, 0) for k in range(n)]
    N_basis = [el(2 * k, 1) for k in range(n)]
    V2 = []
    for p in range(n):
        for q in range(n):
            V2.append(_tensor_unit(H, _hn_index(n, 2 * p, 0), _hn_index(n, 2 * q, 0)))
    for k in range(N):
        for l in range(N):
            V2.append(_tensor_unit(H, _hn_index(n, k, 1), _hn_index(n, l, 1)))
    return {
        "Lambda": Lam,
        "lambda": H.form(lam),
        "g": el(n, 0),
        "nu": H.form(nu),
        "G": el(n, 0),
        "h_nu": el(n, 0),
        "T": T,
        "L_basis": L_basis,
        "Z_basis": Z_basis,
        "N_basis": N_basis,
        "V2_basis": V2,
        "V2_dim": n * n + 4 * n * n,
        "unimodular": False,
    }


def _tensor_unit(H, i, j) -> TensorElement:
    a = [[0] * H.dim for _ in range(H.dim)]
    a[i][j] = 1
    return TensorElement(H, FArray.from_ints(H.field, a))


# ---------------------------------------------------------------------------
# cyclic groups


@lru_cache(maxsize=None)
def group_algebra(N: int, fld: FieldDescriptor | None = None) -> HopfPresentation:
    """k[Z/N] on the basis g^0, ..., g^{N-1}."""
    if N < 1:
        raise InvalidParameters("N must be positive")
    fld = fld or rationals()
    M = np.zeros((N, N, N), dtype=object)
    D = np.zeros((N, N, N), dtype=object)
    S = np.zeros((N, N), dtype=object)
    for arr in (M, D, S):
        arr[...] = 0
    for i in range(N):
        for j in range(N):
            M[i, j, (i + j) % N] = 1
        D[i, i, i] = 1
        S[i, (-i) % N] = 1
    names = ["1"] + [("g" if i == 1 else f"g^{i}") for i in range(1, N)]
    unit = [1] + [0] * (N - 1)
    return HopfPresentation(
        fld, names, FArray.from_ints(fld, M), FArray.from_ints(fld, unit),
        FArray.from_ints(fld, D), FArray.from_ints(fld, [1] * N), FArray.from_ints(fld, S),
    )


def cyclic_field(N: int) -> FieldDescriptor:
    return rationals() if N <= 2 else cyclotomic(N)


@lru_cache(maxsize=None)
def cyclic_ribbon(N: int, k: int = 1) -> tuple[HopfPresentation, RibbonStructure]:
    """k[Z/N] with R = sum q^{ij} e_i (x) e_j and theta = sum q^{j^2} e_j, q = zeta_N^k."""
    if N < 1 or N % 2 == 0:
        raise InvalidParameters(f"N must be odd and positive, got {N}")
    fld = cyclic_field(N)
    H = group_algebra(N, fld)
    zeta = primitive_root(N, fld)
    q = zeta ** k
    E = _idempotents(fld, zeta, N)  # E[l][i]: coefficient of g^i in e_l
    Earr = FArray.from_elements(fld, np.array(E, dtype=object))
    Q = FArray.from_elements(fld, np.array([[q ** (i * j) for j in range(N)] for i in range(N)], dtype=object))
    R = einsum("ij,ia,jb->ab", Q, Earr, Earr)
    th = FArray.from_elements(fld, np.array([q ** (j * j) for j in range(N)], dtype=object))
    theta = einsum("j,ja->a", th, Earr)
    return H, RibbonStructure(H, R, theta)


def cyclic_characters(N: int, k: int = 1) -> list[FArray]:
    """One-dimensional modules chi_j(g) = zeta^j, as (N, 1, 1) arrays."""
    fld = cyclic_field(N)
    zeta = primitive_root(N, fld)
    out = []
    for j in range(N):
        vals = [zeta ** (i * j) for i in range(N)]
        out.append(FArray.from_elements(fld, np.array(vals, dtype=object)).reshape(N, 1, 1))
    return out


# ---------------------------------------------------------------------------


def parse_algebra_uri(uri: str) -> tuple[HopfPresentation, RibbonStructure]:
    """Resolve "hn:<n>[:s=..][:beta=..][:p=..]", "cyclic:<N>[:q=k]" or "sweedler"."""
    parts = uri.strip().split(":")
    head = parts[0].lower()
    opts = {}
    for p in parts[2:] if head != "sweedler" else parts[1:]:
        if "=" not in p:
            raise InvalidParameters(f"malformed option '{p}' in {uri}")
        key, val = p.split("=", 1)
        opts[key] = val
    if head == "sweedler":
        p = int(opts.pop("p")) if "p" in opts else None
        if opts:
            raise InvalidParameters(f"unknown options {sorted(opts)}")
        return sweedler(p)
    if len(parts) < 2:
        raise InvalidParameters(f"missing size in {uri}")
    size = int(parts[1])
    if head == "hn":
        s = int(opts.pop("s", 1))
        beta = opts.pop("beta", "1")
        p = int(opts.pop("p")) if "p" in opts else None
        if opts:
            raise InvalidParameters(f"unknown options {sorted(opts)}")
        spec = HnSpec.make(size, s, 1, p)
        spec = HnSpec.make(size, s, spec.field.parse(beta), p)
        return radford_hn(spec)
    if head == "cyclic":
        q = int(opts.pop("q", 1))
        if opts:
            raise InvalidParameters(f"unknown options {sorted(opts)}")
        return cyclic_ribbon(size, q)
    raise InvalidParameters(f"unknown algebra '{uri}'")


def spec_from_uri(uri: str) -> HnSpec | None:
    parts = uri.strip().split(":")
    head = parts[0].lower()
    if head == "sweedler":
        opts = dict(p.split("=", 1) for p in parts[1:])
        return HnSpec.make(1, 1, 1, int(opts["p"]) if "p" in opts else None)
    if head != "hn":
        return None
    opts = dict(p.split("=", 1) for p in parts[2:])
    p = int(opts["p"]) if "p" in opts else None
    spec = HnSpec.make(int(parts[1]), int(opts.get("s", 1)), 1, p)
    return HnSpec.make(spec.n, spec.s, spec.field.parse(opts.get("beta", "1")), p)
