"""Finite-dimensional Hopf algebras given by structure constants.

Conventions used throughout the package:

* ``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i e_j``.
* ``comult[i, j, k]`` is the coefficient of ``e_j (x) e_k`` in ``Delta(e_i)``.
* linear maps are stored as *row* matrices: ``A[i, j]`` is the coefficient of
  ``e_j`` in ``f(e_i)``, so composition "f then g" is ``A_f @ A_g``.
* a linear form is the vector of its values on the basis.
"""

from __future__ import annotations

import json
from functools import cached_property

import numpy as np

from . import linalg
from .errors import KirbyLabError
from .exactfield import FieldDescriptor, FieldElement
from .farray import FArray, einsum, stack
from .report import Report


class DimensionMismatch(KirbyLabError):
    """Structure tensors or elements have inconsistent shapes."""


class KernelNotOneDimensional(KirbyLabError):
    """An integral space did not come out one-dimensional."""


class NormalizationFailure(KirbyLabError):
    """The integrals cannot be jointly normalized by scaling the form."""


class NotGrouplike(KirbyLabError):
    """A distinguished element failed the grouplike test."""


class IdentityViolated(KirbyLabError):
    """An identity that holds in every finite-dimensional Hopf algebra failed."""


# ---------------------------------------------------------------------------
# element wrappers


class AlgebraElement:
    """An element of H as a coefficient vector over the fixed basis."""

    __slots__ = ("algebra", "vec")

    def __init__(self, algebra: "HopfPresentation", vec: FArray):
        if vec.shape != (algebra.dim,):
            raise DimensionMismatch(f"element of shape {vec.shape} in algebra of dim {algebra.dim}")
        self.algebra = algebra
        self.vec = vec

    @property
    def coords(self) -> list[FieldElement]:
        return [self.vec.element(i) for i in range(self.algebra.dim)]

    def __getitem__(self, i) -> FieldElement:
        return self.vec.element(i)

    def _wrap(self, v):
        return AlgebraElement(self.algebra, v)

    def _same(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            if isinstance(other, AlgebraElement) and other.algebra.dim == self.algebra.dim:
                return
            raise DimensionMismatch("elements of different algebras")

    def __add__(self, other):
        self._same(other)
        return self._wrap(self.vec + other.vec)

    def __sub__(self, other):
        self._same(other)
        return self._wrap(self.vec - other.vec)

    def __neg__(self):
        return self._wrap(-self.vec)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return self._wrap(self.algebra.mul_vec(self.vec, other.vec))
        return self._wrap(self.vec.scale(other))

    def __rmul__(self, other):
        return self._wrap(self.vec.scale(other))

    def __pow__(self, k: int):
        H = self.algebra
        if k < 0:
            return H.inverse(self) ** (-k)
        out = H.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.vec == other.vec
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return self.vec.is_zero()

    def S(self) -> "AlgebraElement":
        return self.algebra.antipode(self)

    def to_json(self):
        return [c.to_json() for c in self.coords]

    def __str__(self):
        names = self.algebra.basis_names
        parts = []
        for i in self.vec.nonzero_indices():
            c = self.vec.element(i)
            cs = str(c)
            if cs == "1":
                parts.append(names[i[0]])
            elif cs == "-1":
                parts.append("-" + names[i[0]])
            else:
                parts.append(f"({cs})*{names[i[0]]}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class TensorElement:
    """An element of H^{(x)n}; stored densely, exposed through its nonzero terms."""

    __slots__ = ("algebra", "arr")

    def __init__(self, algebra: "HopfPresentation", arr: FArray):
        if any(d != algebra.dim for d in arr.shape):
            raise DimensionMismatch(f"tensor of shape {arr.shape} in algebra of dim {algebra.dim}")
        self.algebra = algebra
        self.arr = arr

    @property
    def arity(self) -> int:
        return self.arr.ndim

    @property
    def terms(self) -> dict:
        return {ix: self.arr.element(ix) for ix in self.arr.nonzero_indices()}

    def __eq__(self, other):
        if isinstance(other, TensorElement):
            return self.arr == other.arr
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        return TensorElement(self.algebra, self.arr + other.arr)

    def __sub__(self, other):
        return TensorElement(self.algebra, self.arr - other.arr)

    def __str__(self):
        names = self.algebra.basis_names
        parts = []
        for ix, c in self.terms.items():
            word = "(x)".join(names[i] for i in ix)
            cs = str(c)
            parts.append(word if cs == "1" else f"({cs})*{word}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class LinearForm:
    """A linear form on H, stored as its values on the basis."""

    __slots__ = ("algebra", "vec")

    def __init__(self, algebra: "HopfPresentation", vec: FArray):
        if vec.shape != (algebra.dim,):
            raise DimensionMismatch(f"form of shape {vec.shape} on algebra of dim {algebra.dim}")
        self.algebra = algebra
        self.vec = vec

    def __call__(self, x) -> FieldElement:
        v = x.vec if isinstance(x, AlgebraElement) else x
        return einsum("i,i->", self.vec, v).element(())

    def __getitem__(self, i) -> FieldElement:
        return self.vec.element(i)

    @property
    def values(self) -> list[FieldElement]:
        return [self.vec.element(i) for i in range(self.algebra.dim)]

    def __eq__(self, other):
        if isinstance(other, LinearForm):
            return self.vec == other.vec
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        return LinearForm(self.algebra, self.vec + other.vec)

    def __sub__(self, other):
        return LinearForm(self.algebra, self.vec - other.vec)

    def scale(self, c) -> "LinearForm":
        return LinearForm(self.algebra, self.vec.scale(c))

    def is_zero(self) -> bool:
        return self.vec.is_zero()

    def to_json(self):
        return [c.to_json() for c in self.values]

    def __str__(self):
        names = self.algebra.basis_names
        parts = [f"{self.vec.element(i)}*{names[i[0]]}^" for i in self.vec.nonzero_indices()]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


# ---------------------------------------------------------------------------


class HopfPresentation:
    """A Hopf algebra given by its structure tensors over an ordered basis.

    Derived data (integrals, grouplikes, inverse antipode, generators) is
    computed on first access and cached; the presentation itself never
    changes after construction.
    """

    def __init__(
        self,
        field: FieldDescriptor,
        basis_names,
        mult: FArray,
        unit: FArray,
        comult: FArray,
        counit: FArray,
        antipode: FArray,
    ):
        n = len(basis_names)
        if n < 1:
            raise DimensionMismatch("empty basis")
        expect = {"mult": (mult, (n, n, n)), "unit": (unit, (n,)), "comult": (comult, (n, n, n)),
                  "counit": (counit, (n,)), "antipode": (antipode, (n, n))}
        for name, (arr, shape) in expect.items():
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            if arr.field != field:
                raise DimensionMismatch(f"{name} lives over {arr.field}, not {field}")
        self.field = field
        self.dim = n
        self.basis_names = tuple(basis_names)
        self.M = mult
        self.u = unit
        self.D = comult
        self.eps = counit
        self.Smat = antipode

    # -- elements -----------------------------------------------------------
    def element(self, coords) -> AlgebraElement:
        if isinstance(coords, FArray):
            return AlgebraElement(self, coords)
        return AlgebraElement(self, FArray.from_elements(self.field, np.array([self.field(c) for c in coords], dtype=object)))

    def basis_element(self, i: int) -> AlgebraElement:
        v = [0] * self.dim
        v[i] = 1
        return AlgebraElement(self, FArray.from_ints(self.field, v))

    def basis_index(self, name: str) -> int:
        return self.basis_names.index(name)

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.u)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, FArray.zeros(self.field, (self.dim,)))

    def form(self, values) -> LinearForm:
        if isinstance(values, FArray):
            return LinearForm(self, values)
        return LinearForm(self, FArray.from_elements(self.field, np.array([self.field(c) for c in values], dtype=object)))

    def tensor(self, arr: FArray) -> TensorElement:
        return TensorElement(self, arr)

    # -- raw structure maps on FArrays ---------------------------------------
    def mul_vec(self, x: FArray, y: FArray) -> FArray:
        return einsum("j,jk->k", y, einsum("i,ijk->jk", x, self.M))

    def lmul_map(self, x: FArray) -> FArray:
        """Row matrix of y -> x y."""
        return einsum("i,ijk->jk", x, self.M)

    def rmul_map(self, y: FArray) -> FArray:
        """Row matrix of x -> x y."""
        return einsum("j,ijk->ik", y, self.M)

    def S_vec(self, x: FArray) -> FArray:
        return einsum("i,ij->j", x, self.Smat)

    @cached_property
    def Sinv(self) -> FArray:
        return linalg.inverse(self.Smat.transpose(1, 0)).transpose(1, 0)

    @cached_property
    def S2(self) -> FArray:
        return einsum("ij,jk->ik", self.Smat, self.Smat)

    def harpoon_map(self, f: FArray) -> FArray:
        """Row matrix of x -> x <- f = f(x_(1)) x_(2)."""
        return einsum("ijk,j->ik", self.D, f)

    def tensor_mul2(self, X: FArray, Y: FArray) -> FArray:
        """Product in H (x) H; Y may carry one leading batch axis."""
        P = einsum("ab,acp->bcp", X, self.M)
        if Y.ndim == 2:
            Q = einsum("bcp,cd->bpd", P, Y)
            return einsum("bpd,bdq->pq", Q, self.M)
        Q = einsum("bcp,xcd->xbpd", P, Y)
        return einsum("xbpd,bdq->xpq", Q, self.M)

    # -- element-level operations -------------------------------------------
    def antipode(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self, self.S_vec(x.vec))

    def antipode_inv(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self, einsum("i,ij->j", x.vec, self.Sinv))

    def counit(self, x: AlgebraElement) -> FieldElement:
        return einsum("i,i->", self.eps, x.vec).element(())

    def comultiply(self, x: AlgebraElement) -> TensorElement:
        return TensorElement(self, einsum("i,ijk->jk", x.vec, self.D))

    def harpoon(self, x: AlgebraElement, f) -> AlgebraElement:
        """x <- f = f(x_(1)) x_(2)."""
        fv = f.vec if isinstance(f, LinearForm) else f
        return AlgebraElement(self, einsum("i,ik->k", x.vec, self.harpoon_map(fv)))

    def inverse(self, x: AlgebraElement) -> AlgebraElement:
        """Two-sided inverse via an exact solve of x y = 1."""
        A = self.lmul_map(x.vec).transpose(1, 0)
        try:
            y = linalg.solve(A, self.u)
        except linalg.SingularSystem:
            raise IdentityViolated(f"element {x} is not invertible") from None
        y = AlgebraElement(self, y)
        if not (y * x == self.one() and x * y == self.one()):
            raise IdentityViolated(f"element {x} is not invertible")
        return y

    def sweedler_power(self, x: AlgebraElement, n: int) -> TensorElement:
        """Iterated coproduct Delta^(n)(x) in H^{(x)n}."""
        if n < 1:
            raise ValueError("arity must be positive")
        arr = x.vec
        for _ in range(n - 1):
            arr = einsum("...i,ijk->...jk", arr, self.D)
        return TensorElement(self, arr)

    # -- axioms -------------------------------------------------------------
    def verify_hopf(self) -> Report:
        rep = Report("Hopf algebra axioms")
        M, D, u, eps, S, n = self.M, self.D, self.u, self.eps, self.Smat, self.dim
        I = FArray.identity(self.field, n)
        rep.add("associativity", einsum("ijp,pkq->ijkq", M, M) == einsum("jkp,ipq->ijkq", M, M))
        rep.add("unit", einsum("i,ijk->jk", u, M) == I and einsum("j,ijk->ik", u, M) == I)
        rep.add("coassociativity", einsum("ijk,jab->iabk", D, D) == einsum("ijk,kab->ijab", D, D))
        rep.add("counit", einsum("ijk,j->ik", D, eps) == I and einsum("ijk,k->ij", D, eps) == I)
        ok = True
        for i in range(n):
            lhs = einsum("jk,kab->jab", M[i], D)
            rhs = einsum("ab,ace,bdf,jcd->jef", D[i], M, M, D)
            if not lhs == rhs:
                ok = False
                break
        rep.add("bialgebra: Delta(xy) = Delta(x) Delta(y)", ok)
        one = FArray.from_ints(self.field, [[1]])
        rep.add("bialgebra: Delta(1) = 1 (x) 1", einsum("i,ijk->jk", u, D) == einsum("j,k->jk", u, u))
        rep.add("bialgebra: eps(xy) = eps(x) eps(y)", einsum("ijk,k->ij", M, eps) == einsum("i,j->ij", eps, eps))
        rep.add("bialgebra: eps(1) = 1", einsum("i,i->", u, eps).reshape(1, 1) == one)
        target = einsum("i,b->ib", eps, u)
        rep.add("antipode: S(x_(1)) x_(2) = eps(x) 1", einsum("ijk,ja,akb->ib", D, S, M) == target)
        rep.add("antipode: x_(1) S(x_(2)) = eps(x) 1", einsum("ijk,ka,jab->ib", D, S, M) == target)
        return rep

    # -- integrals ----------------------------------------------------------
    @cached_property
    def left_integral(self) -> AlgebraElement:
        """Lambda with x Lambda = eps(x) Lambda, as the canonical kernel vector."""
        n = self.dim
        I = FArray.identity(self.field, n)
        # E[i, k, j] = M[i, j, k] - eps_i delta_jk
        E = einsum("ijk->ikj", self.M) - einsum("i,kj->ikj", self.eps, I)
        ker = linalg.nullspace(E.reshape(n * n, n))
        if ker.shape[0] != 1:
            raise KernelNotOneDimensional(f"left integrals span a {ker.shape[0]}-dimensional space")
        return AlgebraElement(self, ker[0])

    @cached_property
    def right_integral_dual(self) -> LinearForm:
        """lambda with lambda(x_(1)) x_(2) = lambda(x) 1, scaled so lambda(Lambda) = 1."""
        n = self.dim
        I = FArray.identity(self.field, n)
        E = einsum("ijk->ikj", self.D) - einsum("ij,k->ikj", I, self.u)
        ker = linalg.nullspace(E.reshape(n * n, n))
        if ker.shape[0] != 1:
            raise KernelNotOneDimensional(f"right integrals of the dual span a {ker.shape[0]}-dimensional space")
        lam = LinearForm(self, ker[0])
        Lam = self.left_integral
        c = lam(Lam)
        if c.is_zero():
            raise NormalizationFailure("lambda(Lambda) = 0")
        lam = lam.scale(c.inverse())
        if lam(self.antipode(Lam)) != self.field.one():
            raise NormalizationFailure(f"lambda(S(Lambda)) = {lam(self.antipode(Lam))} after scaling")
        return lam

    @cached_property
    def distinguished_grouplikes(self) -> tuple[AlgebraElement, LinearForm]:
        lam = self.right_integral_dual.vec
        Lam = self.left_integral.vec
        # g from x_(1) lambda(x_(2)) = lambda(x) g
        A = einsum("ijk,k->ij", self.D, lam)
        i0 = next(i for i in range(self.dim) if not lam.element(i).is_zero())
        g = A[i0].scale(lam.element(i0).inverse())
        if not A == einsum("i,j->ij", lam, g):
            raise NotGrouplike("x_(1) lambda(x_(2)) is not proportional to lambda(x)")
        # nu from Lambda x = nu(x) Lambda
        B = einsum("i,ijk->jk", Lam, self.M)
        p = next(i for i in range(self.dim) if not Lam.element(i).is_zero())
        nu = B.transpose(1, 0)[p].scale(Lam.element(p).inverse())
        if not B == einsum("j,k->jk", nu, Lam):
            raise NotGrouplike("Lambda x is not proportional to Lambda")
        if not (einsum("i,ijk->jk", g, self.D) == einsum("j,k->jk", g, g) and einsum("i,i->", g, self.eps).element(()) == 1):
            raise NotGrouplike("g")
        if not (einsum("ijk,k->ij", self.M, nu) == einsum("i,j->ij", nu, nu) and einsum("i,i->", nu, self.u).element(()) == 1):
            raise NotGrouplike("nu")
        return AlgebraElement(self, g), LinearForm(self, nu)

    @property
    def g(self) -> AlgebraElement:
        return self.distinguished_grouplikes[0]

    @property
    def nu(self) -> LinearForm:
        return self.distinguished_grouplikes[1]

    def is_unimodular(self) -> bool:
        return self.nu.vec == self.eps

    @cached_property
    def nu_harpoon(self) -> FArray:
        """Row matrix of x -> x <- nu."""
        return self.harpoon_map(self.nu.vec)

    @cached_property
    def _delta_lambda(self) -> FArray:
        return einsum("i,ijk->jk", self.left_integral.vec, self.D)

    def form_to_element(self, f) -> AlgebraElement:
        """(f (x) S) Delta(Lambda): the element a with f = lambda . a."""
        fv = f.vec if isinstance(f, LinearForm) else f
        return AlgebraElement(self, einsum("jk,j,kl->l", self._delta_lambda, fv, self.Smat))

    def element_to_form(self, a: AlgebraElement) -> LinearForm:
        """lambda . a : x -> lambda(a x)."""
        return LinearForm(self, einsum("i,ijk,k->j", a.vec, self.M, self.right_integral_dual.vec))

    def radford_expand(self, a: AlgebraElement) -> AlgebraElement:
        """Rebuild a as lambda(a Lambda_(1)) S(Lambda_(2)); raises if that fails."""
        out = self.form_to_element(self.element_to_form(a))
        if not out == a:
            raise IdentityViolated(f"lambda(a Lambda_(1)) S(Lambda_(2)) = {out} for a = {a}")
        return out

    def check_integral_identities(self) -> Report:
        rep = Report("integral identities")
        lam = self.right_integral_dual.vec
        # lambda(xy) = lambda(S^2(y <- nu) x)
        lhs = einsum("ijk,k->ij", self.M, lam)
        T = einsum("ab,bc->ac", self.nu_harpoon, self.S2)  # y -> S^2(y <- nu)
        rhs = einsum("jc,cik,k->ij", T, self.M, lam)
        rep.add("lambda(xy) = lambda(S^2(y<-nu) x)", lhs == rhs)
        rep.add("lambda(S(x)) = lambda(g x)",
                einsum("ij,j->i", self.Smat, lam) == einsum("a,aik,k->i", self.g.vec, self.M, lam))
        ok = True
        for i in range(self.dim):
            e = self.basis_element(i)
            if not self.form_to_element(self.element_to_form(e)) == e:
                ok = False
        rep.add("form_to_element o element_to_form = id", ok)
        return rep

    # -- generators ---------------------------------------------------------
    def _subalgebra(self, gens) -> linalg.RREF:
        ech = linalg.RREF(self.field, self.dim)
        ech.add(_row(self.u))
        queue = [self.u]
        maps = [self.rmul_map(self.basis_element(i).vec) for i in gens]
        while queue:
            v = queue.pop()
            for L in maps:
                w = einsum("j,jk->k", v, L)
                if ech.add(_row(w)):
                    queue.append(w)
        return ech

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices that generate H as an algebra, chosen greedily."""
        gens: list[int] = []
        ech = self._subalgebra(gens)
        for i in range(self.dim):
            if ech.rank == self.dim:
                break
            if not ech.reduce({i: self.field.one()}):
                continue
            gens.append(i)
            ech = self._subalgebra(gens)
        return tuple(gens)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        n = self.dim
        comult = {}
        for i in range(n):
            comult[str(i)] = [[j, k, self.D.element((i, j, k)).to_json()] for (j, k) in self.D[i].nonzero_indices()]
        return {
            "dim": n,
            "basis": list(self.basis_names),
            "field": self.field.to_json(),
            "mult": [[[self.M.element((i, j, k)).to_json() for k in range(n)] for j in range(n)] for i in range(n)],
            "unit": [self.u.element(i).to_json() for i in range(n)],
            "comult": comult,
            "counit": [self.eps.element(i).to_json() for i in range(n)],
            "antipode": [[self.Smat.element((i, j)).to_json() for j in range(n)] for i in range(n)],
        }

    @classmethod
    def from_json(cls, obj) -> "HopfPresentation":
        if isinstance(obj, str):
            obj = json.loads(obj)
        fld = FieldDescriptor.from_json(obj["field"])
        n = int(obj["dim"])
        basis = obj.get("basis") or [f"e{i}" for i in range(n)]
        if len(basis) != n:
            raise DimensionMismatch("basis length differs from dim")
        P = fld.parse

        def arr(data, shape):
            a = np.empty(shape, dtype=object)
            try:
                for idx in np.ndindex(shape):
                    x = data
                    for k in idx:
                        x = x[k]
                    a[idx] = P(x)
            except (IndexError, TypeError) as exc:
                raise DimensionMismatch(f"malformed structure tensor: {exc}") from None
            return FArray.from_elements(fld, a)

        mult = arr(obj["mult"], (n, n, n))
        unit = arr(obj["unit"], (n,)) if "unit" in obj else FArray.from_ints(fld, [1] + [0] * (n - 1))
        D = np.empty((n, n, n), dtype=object)
        D[...] = fld.zero()
        for key, terms in obj["comult"].items():
            i = int(key)
            for j, k, c in terms:
                D[i, int(j), int(k)] = P(c)
        comult = FArray.from_elements(fld, D)
        counit = arr(obj["counit"], (n,))
        antipode = arr(obj["antipode"], (n, n))
        return cls(fld, basis, mult, unit, comult, counit, antipode)


def _row(v: FArray) -> dict:
    return {i[0]: v.element(i) for i in v.nonzero_indices()}


def stack_elements(elems) -> FArray:
    return stack([e.vec for e in elems], axis=0)
