"""Dense exact arrays over a :class:`FieldDescriptor`.

An ``FArray`` stores integer numerators in a numpy object array whose last
axis holds field coordinates, plus one positive common denominator (always 1
for prime fields, where numerators are kept reduced).  Products go through the
field's coordinate multiplication tensor, so every operation stays exact.
Contractions drop to int64 whenever an a-priori bound shows no overflow can
occur.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, prod

import numpy as np

from .exactfield import DescriptorMismatch, FieldDescriptor, FieldElement

_INT64_SAFE = 2**62


def _maxabs(x: np.ndarray) -> int:
    if x.size == 0:
        return 0
    return int(np.max(np.abs(x)))


def _einsum_int(spec: str, a: np.ndarray, b: np.ndarray, inner: int) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if _maxabs(a) * _maxabs(b) * max(inner, 1) < _INT64_SAFE:
        out = np.einsum(spec, a.astype(np.int64), b.astype(np.int64), optimize=True)
        return np.asarray(out).astype(object)
    return np.asarray(np.einsum(spec, a, b, optimize=True), dtype=object)


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class FArray:
    __slots__ = ("field", "num", "den")

    def __init__(self, fld: FieldDescriptor, num: np.ndarray, den: int = 1, normalize: bool = True):
        self.field = fld
        self.num = num
        self.den = int(den)
        if normalize:
            self._normalize()

    # -- construction -------------------------------------------------------
    @classmethod
    def zeros(cls, fld: FieldDescriptor, shape) -> "FArray":
        shape = tuple(shape)
        num = np.zeros(shape + (fld.degree,), dtype=object)
        num[...] = 0
        return cls(fld, num, 1, normalize=False)

    @classmethod
    def from_ints(cls, fld: FieldDescriptor, ints, den: int = 1) -> "FArray":
        """Rational-valued array from integer numerators (shape without coord axis)."""
        arr = np.asarray(ints, dtype=object)
        num = np.zeros(arr.shape + (fld.degree,), dtype=object)
        num[...] = 0
        num[..., 0] = arr
        return cls(fld, num, den)

    @classmethod
    def identity(cls, fld: FieldDescriptor, n: int) -> "FArray":
        return cls.from_ints(fld, np.eye(n, dtype=np.int64).astype(object))

    @classmethod
    def from_elements(cls, fld: FieldDescriptor, elems) -> "FArray":
        arr = np.empty(np.shape(elems) if not isinstance(elems, np.ndarray) else elems.shape, dtype=object)
        src = np.asarray(elems, dtype=object) if not isinstance(elems, np.ndarray) else elems
        arr[...] = src
        c = fld.degree
        if fld.kind == "prime":
            num = np.zeros(arr.shape + (1,), dtype=object)
            for idx in np.ndindex(arr.shape):
                num[idx + (0,)] = fld(arr[idx]).coords[0]
            return cls(fld, num, 1)
        coords = np.empty(arr.shape + (c,), dtype=object)
        dens = []
        for idx in np.ndindex(arr.shape):
            e = fld(arr[idx]) if not isinstance(arr[idx], FieldElement) else arr[idx]
            if e.field != fld:
                raise DescriptorMismatch(f"{e.field} vs {fld}")
            for k, x in enumerate(e.coords):
                coords[idx + (k,)] = x
                dens.append(x.denominator)
        D = reduce(lambda u, v: u * v // gcd(u, v), dens, 1)
        num = np.zeros(coords.shape, dtype=object)
        for idx in np.ndindex(coords.shape):
            x = coords[idx]
            num[idx] = x.numerator * (D // x.denominator)
        return cls(fld, num, D)

    @classmethod
    def scalar(cls, x: FieldElement) -> "FArray":
        return cls.from_elements(x.field, np.array(x, dtype=object).reshape(()))

    # -- basic properties ---------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.num.shape[:-1]

    @property
    def ndim(self) -> int:
        return self.num.ndim - 1

    def _normalize(self):
        fld = self.field
        if fld.kind == "prime":
            self.num = np.mod(self.num, fld.p)
            if self.den != 1:
                inv = pow(self.den, -1, fld.p)
                self.num = np.mod(self.num * inv, fld.p)
                self.den = 1
            return
        if self.den < 0:
            self.num = -self.num
            self.den = -self.den
        if self.num.size == 0:
            self.den = 1
            return
        g = int(np.gcd.reduce(self.num.ravel())) if self.num.size else 0
        g = gcd(g, self.den)
        if g == 0:
            self.den = 1
        elif g > 1:
            self.num = self.num // g
            self.den //= g

    def copy(self) -> "FArray":
        return FArray(self.field, self.num.copy(), self.den, normalize=False)

    # -- element access -----------------------------------------------------
    def element(self, idx) -> FieldElement:
        if not isinstance(idx, tuple):
            idx = (idx,)
        coords = self.num[idx]
        if self.field.kind == "prime":
            return FieldElement(self.field, (int(coords[0]) % self.field.p,))
        return FieldElement(self.field, tuple(Fraction(int(v), self.den) for v in coords))

    def to_elements(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(self.shape):
            out[idx] = self.element(idx)
        return out

    def tolist(self):
        return self.to_elements().tolist()

    def __getitem__(self, key) -> "FArray":
        if not isinstance(key, tuple):
            key = (key,)
        sub = self.num[key + (Ellipsis,)] if Ellipsis not in key else self.num[key]
        if not isinstance(sub, np.ndarray) or sub.ndim == 0:
            raise IndexError("index must keep the coordinate axis")
        return FArray(self.field, np.array(sub, dtype=object), self.den)

    def nonzero_indices(self):
        mask = np.any(self.num != 0, axis=-1)
        return [tuple(int(i) for i in ix) for ix in zip(*np.nonzero(mask))]

    # -- shape manipulation -------------------------------------------------
    def transpose(self, *perm) -> "FArray":
        if len(perm) == 1 and isinstance(perm[0], (tuple, list)):
            perm = tuple(perm[0])
        return FArray(self.field, self.num.transpose(tuple(perm) + (self.ndim,)), self.den, normalize=False)

    def reshape(self, *shape) -> "FArray":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return FArray(self.field, self.num.reshape(tuple(shape) + (self.field.degree,)), self.den, normalize=False)

    # -- linear structure ---------------------------------------------------
    def _check(self, other: "FArray"):
        if other.field != self.field:
            raise DescriptorMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "FArray") -> "FArray":
        self._check(other)
        if self.field.kind == "prime":
            return FArray(self.field, self.num + other.num, 1)
        d = self.den * other.den // gcd(self.den, other.den)
        return FArray(self.field, self.num * (d // self.den) + other.num * (d // other.den), d)

    def __neg__(self) -> "FArray":
        return FArray(self.field, -self.num, self.den, normalize=self.field.kind == "prime")

    def __sub__(self, other: "FArray") -> "FArray":
        return self + (-other)

    def scale(self, x) -> "FArray":
        """Multiply every entry by the scalar x."""
        x = self.field(x) if not isinstance(x, FieldElement) else x
        s = FArray.scalar(x)
        return einsum("...,->...", self, s)

    def is_zero(self) -> bool:
        return not np.any(self.num != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FArray):
            return NotImplemented
        if other.field != self.field or other.shape != self.shape:
            return False
        if self.field.kind == "prime":
            return bool(np.all(np.mod(self.num - other.num, self.field.p) == 0))
        return bool(np.all(self.num * other.den == other.num * self.den))

    __hash__ = None

    def sum(self, axis) -> "FArray":
        if axis < 0:
            axis += self.ndim
        return FArray(self.field, self.num.sum(axis=axis), self.den)


def stack(arrays, axis: int = 0) -> FArray:
    arrays = list(arrays)
    fld = arrays[0].field
    if fld.kind == "prime":
        return FArray(fld, np.stack([a.num for a in arrays], axis=axis), 1)
    d = reduce(lambda u, v: u * v // gcd(u, v), [a.den for a in arrays], 1)
    return FArray(fld, np.stack([a.num * (d // a.den) for a in arrays], axis=axis), d)


def _parse(spec: str):
    lhs, _, out = spec.partition("->")
    ins = lhs.split(",")
    return ins, out


def _expand_ellipsis(ins, out, ndims):
    """Replace '...' by explicit letters so coordinate axes can be appended."""
    used = set("".join(ins) + out) - {"."}
    spare = [ch for ch in _LETTERS if ch not in used]
    ell_len = 0
    for s, nd in zip(ins, ndims):
        if "..." in s:
            ell_len = max(ell_len, nd - (len(s) - 3))
    ell = "".join(spare[:ell_len])
    spare = spare[ell_len:]
    new_ins = []
    for s, nd in zip(ins, ndims):
        if "..." in s:
            k = nd - (len(s) - 3)
            new_ins.append(s.replace("...", ell[ell_len - k:] if k else ""))
        else:
            new_ins.append(s)
    out = out.replace("...", ell)
    return new_ins, out, spare


def einsum(spec: str, *ops: FArray) -> FArray:
    """Exact einsum with field multiplication; supports explicit '->' output."""
    if len(ops) == 1:
        ins, out = _parse(spec)
        a = ops[0]
        (sa,), out, spare = _expand_ellipsis(ins, out, [a.ndim])
        k = spare[0]
        num = np.asarray(np.einsum(f"{sa}{k}->{out}{k}", a.num), dtype=object)
        return FArray(a.field, num, a.den)
    if len(ops) > 2:
        # fold left, keeping every letter still needed later
        ins, out = _parse(spec)
        acc = ops[0]
        acc_s = ins[0]
        if any("..." in s for s in ins):
            ins, out, _ = _expand_ellipsis(ins, out, [o.ndim for o in ops])
            acc_s = ins[0]
        for i in range(1, len(ops)):
            later = set(out) | set("".join(ins[i + 1:]))
            keep = "".join(dict.fromkeys(ch for ch in acc_s + ins[i] if ch in later))
            acc = einsum(f"{acc_s},{ins[i]}->{keep}", acc, ops[i])
            acc_s = keep
        return einsum(f"{acc_s}->{out}", acc)
    a, b = ops
    if a.field != b.field:
        raise DescriptorMismatch(f"{a.field} vs {b.field}")
    fld = a.field
    ins, out = _parse(spec)
    (sa, sb), out, spare = _expand_ellipsis(ins, out, [a.ndim, b.ndim])
    dims = {}
    for s, arr in ((sa, a), (sb, b)):
        for ch, n in zip(s, arr.shape):
            dims[ch] = n
    inner = prod(dims[ch] for ch in set(sa) | set(sb) if ch not in out)
    c = fld.degree
    a_rat = c == 1 or not np.any(a.num[..., 1:] != 0)
    b_rat = c == 1 or not np.any(b.num[..., 1:] != 0)
    k = spare[0]
    if c == 1:
        num = _einsum_int(f"{sa}{k},{sb}{k}->{out}{k}", a.num, b.num, inner)
    elif a_rat and b_rat:
        z = _einsum_int(f"{sa},{sb}->{out}", a.num[..., 0], b.num[..., 0], inner)
        num = np.zeros(np.shape(z) + (c,), dtype=object)
        num[...] = 0
        num[..., 0] = z
    elif a_rat:
        num = _einsum_int(f"{sa},{sb}{k}->{out}{k}", a.num[..., 0], b.num, inner)
    elif b_rat:
        num = _einsum_int(f"{sa}{k},{sb}->{out}{k}", a.num, b.num[..., 0], inner)
    else:
        i, j, k = spare[0], spare[1], spare[2]
        Z = _einsum_int(f"{sa}{i},{sb}{j}->{out}{i}{j}", a.num, b.num, inner)
        C = fld.mul_tensor()
        num = _einsum_int(f"{out}{i}{j},{i}{j}{k}->{out}{k}", Z, C, c * c)
    num = np.asarray(num, dtype=object)
    return FArray(fld, num, a.den * b.den)


def matvec(M: FArray, v: FArray) -> FArray:
    return einsum("ij,j->i", M, v)


def matmul(A: FArray, B: FArray) -> FArray:
    return einsum("ij,jk->ik", A, B)
