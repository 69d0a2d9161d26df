"""Kirby elements of a ribbon Hopf algebra.

Membership of z in the Kirby set is decided through three conditions:
z lies in L(H) = {z : (x <- nu) z = z x}, lambda(T(z) a) = lambda(z a) for
central a, and a quadratic condition tested on a basis of the
<-invariants V_2(H) in H (x) H.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import AxiomFailed, KirbyLabError
from .exactfield import FieldElement
from .farray import FArray, einsum, stack
from .hopfcore import AlgebraElement, HopfPresentation, LinearForm, TensorElement
from .report import Report
from .ribboncore import RibbonStructure, act, check_representation, quantum_dim


class NotInL(KirbyLabError):
    """An element required to lie in L(H) does not."""


@dataclass
class KirbySubspaces:
    L_basis: list[AlgebraElement]
    Z_basis: list[AlgebraElement]
    N_basis: list[AlgebraElement]
    V2_basis: list[TensorElement]

    def dims(self) -> dict:
        return {"L": len(self.L_basis), "Z": len(self.Z_basis), "N": len(self.N_basis), "V2": len(self.V2_basis)}


def _kernel_elements(H: HopfPresentation, blocks) -> list[FArray]:
    """Kernel of the stacked row matrices: vectors v with v @ A = 0 for every A."""
    rows = []
    for A in blocks:
        rows.extend(linalg.farray_rows(A.transpose(1, 0)))
    ncols = blocks[0].shape[0]
    basis = linalg.nullspace_rows(H.field, rows, ncols)
    if not basis:
        return []
    K = FArray.from_elements(H.field, np.array(basis, dtype=object))
    return [K[i] for i in range(K.shape[0])]


def l_space(H: HopfPresentation) -> list[AlgebraElement]:
    blocks = []
    for i in H.generators:
        e = H.basis_element(i).vec
        y = einsum("i,ik->k", e, H.nu_harpoon)
        blocks.append(H.lmul_map(y) - H.rmul_map(e))
    return [AlgebraElement(H, v) for v in _kernel_elements(H, blocks)] if blocks else [H.basis_element(i) for i in range(H.dim)]


def center(H: HopfPresentation) -> list[AlgebraElement]:
    blocks = [H.lmul_map(H.basis_element(i).vec) - H.rmul_map(H.basis_element(i).vec) for i in H.generators]
    return [AlgebraElement(H, v) for v in _kernel_elements(H, blocks)] if blocks else [H.one()]


def _lam_pairing(H: HopfPresentation, xs, ys) -> FArray:
    """P[s, t] = lambda(x_s y_t)."""
    X = stack([x.vec for x in xs], 0)
    Y = stack([y.vec for y in ys], 0)
    return einsum("si,tj,ijk,k->st", X, Y, H.M, H.right_integral_dual.vec)


def negligible(H: HopfPresentation, L, Z) -> list[AlgebraElement]:
    if not L:
        return []
    if not Z:
        return list(L)
    P = _lam_pairing(H, L, Z)  # rows: L index, cols: Z index
    ker = _kernel_elements(H, [P])
    Lst = stack([x.vec for x in L], 0)
    return [AlgebraElement(H, einsum("t,ti->i", c, Lst)) for c in ker]


def adjoint2_map(H: HopfPresentation, h: int) -> FArray:
    """Row matrix on H (x) H of X -> X <| e_h = S(h1) x h2 (x) S(h3) y h4, minus eps(h) id."""
    n = H.dim
    c4 = H.sweedler_power(H.basis_element(h), 4).arr
    # A[p, q, x, x'] : coefficient of e_x' in S(e_p) e_x e_q
    SL = einsum("pa,axb->pxb", H.Smat, H.M)
    A = einsum("pxb,bqy->pqxy", SL, H.M)
    B = einsum("pqrs,pqab->rsab", c4, A)
    op = einsum("rsab,rscd->acbd", B, A).reshape(n * n, n * n)
    return op - FArray.identity(H.field, n * n).scale(H.eps.element(h))


def v2_space(H: HopfPresentation) -> list[TensorElement]:
    n = H.dim
    blocks = [adjoint2_map(H, i) for i in H.generators]
    if not blocks:
        return [TensorElement(H, einsum("a,b->ab", H.u, H.u))]
    return [TensorElement(H, v.reshape(n, n)) for v in _kernel_elements(H, blocks)]


def compute_subspaces(rib) -> KirbySubspaces:
    H = rib.algebra if isinstance(rib, RibbonStructure) else rib
    cached = H.__dict__.get("_kirby_subspaces")
    if cached is not None:
        return cached
    L = l_space(H)
    Z = center(H)
    N = negligible(H, L, Z)
    V2 = v2_space(H)
    sub = KirbySubspaces(L, Z, N, V2)
    H.__dict__["_kirby_subspaces"] = sub
    return sub


# ---------------------------------------------------------------------------


def in_L(H: HopfPresentation, z: AlgebraElement) -> bool:
    for i in range(H.dim):
        e = H.basis_element(i)
        if not (AlgebraElement(H, einsum("i,ik->k", e.vec, H.nu_harpoon)) * z == z * e):
            return False
    return True


def T_map(rib: RibbonStructure, z: AlgebraElement) -> AlgebraElement:
    """T(z) = (S(z) <- nu) h_nu."""
    H = rib.algebra
    return AlgebraElement(H, einsum("i,ik->k", H.S_vec(z.vec), H.nu_harpoon)) * rib.h_nu


def _star_forms(H: HopfPresentation, x: AlgebraElement, z: AlgebraElement):
    lam = H.right_integral_dual.vec
    Dz = H.comultiply(z).arr
    Dx = H.comultiply(x).arr
    Sinv = H.Sinv
    # 1: lambda(x S(z_(2))) z_(1)
    f1 = einsum("i,bc,ick,k->b", x.vec, H.Smat, H.M, lam)  # f1[b] = lambda(x S(e_b))
    p1 = einsum("ab,b->a", Dz, f1)
    # 2: lambda(z S(x_(2))) x_(1)
    f2 = einsum("i,bc,ick,k->b", z.vec, H.Smat, H.M, lam)
    p2 = einsum("ab,b->a", Dx, f2)
    # 3: lambda(z_(1) S^-1(x)) z_(2)
    sx = einsum("i,ij->j", x.vec, Sinv)
    f3 = einsum("j,ajk,k->a", sx, H.M, lam)
    p3 = einsum("ab,a->b", Dz, f3)
    # 4: lambda(x_(1) S^-1(z)) x_(2)
    sz = einsum("i,ij->j", z.vec, Sinv)
    f4 = einsum("j,ajk,k->a", sz, H.M, lam)
    p4 = einsum("ab,a->b", Dx, f4)
    return [AlgebraElement(H, p) for p in (p1, p2, p3, p4)]


def star_product(rib, x: AlgebraElement, z: AlgebraElement) -> AlgebraElement:
    """x * z = lambda(x S(z_(2))) z_(1) on L(H); the three other expressions are asserted equal."""
    H = rib.algebra if isinstance(rib, RibbonStructure) else rib
    for name, e in (("x", x), ("z", z)):
        if not in_L(H, e):
            raise NotInL(f"{name} = {e} is not in L(H)")
    forms = _star_forms(H, x, z)
    for k, p in enumerate(forms[1:], start=2):
        if not p == forms[0]:
            raise AxiomFailed("star product expressions agree", f"expression {k} gives {p}, expression 1 gives {forms[0]}")
    return forms[0]


# ---------------------------------------------------------------------------


@dataclass
class KirbyCandidate:
    z: AlgebraElement
    in_L: bool
    condition_a: bool
    condition_b: bool
    theta_values: tuple[FieldElement, FieldElement]
    failures: list[str] = field(default_factory=list)

    @property
    def theta_plus_nonzero(self) -> bool:
        return not self.theta_values[0].is_zero()

    @property
    def theta_minus_nonzero(self) -> bool:
        return not self.theta_values[1].is_zero()

    @property
    def in_I(self) -> bool:
        return self.in_L and self.condition_a and self.condition_b

    @property
    def normalized(self) -> bool:
        return self.in_I and self.theta_plus_nonzero and self.theta_minus_nonzero

    def to_json(self) -> dict:
        return {
            "z": self.z.to_json(),
            "in_L": self.in_L,
            "cond_a": self.condition_a,
            "cond_b": self.condition_b,
            "in_I": self.in_I,
            "theta_plus": self.theta_values[0].to_json(),
            "theta_minus": self.theta_values[1].to_json(),
            "normalized": self.normalized,
        }


def theta_pm(rib: RibbonStructure, z: AlgebraElement) -> tuple[FieldElement, FieldElement]:
    H = rib.algebra
    lam = H.right_integral_dual
    return lam(z * rib.theta), lam(z * rib.theta_inv)


def _phi(H: HopfPresentation, z: AlgebraElement) -> FArray:
    """phi[a] = lambda(z e_a)."""
    return H.element_to_form(z).vec


def condition_b_matrix(H: HopfPresentation, z: AlgebraElement, mirrored: bool = False) -> FArray:
    """Q with sum X[p,q] Q[p,q] = LHS - RHS of the quadratic condition on X."""
    phi = _phi(H, z)
    psi = einsum("bqk,k->bq", H.M, phi)  # psi[b, q] = lambda(z e_b e_q)
    if not mirrored:
        # sum lambda(z x_(1)) lambda(z x_(2) y)
        lhs = einsum("pab,a,bq->pq", H.D, phi, psi)
    else:
        # sum lambda(z x y_(1)) lambda(z y_(2))
        lhs = einsum("qab,pa,b->pq", H.D, psi, phi)
    return lhs - einsum("p,q->pq", phi, phi)


def is_kirby(rib: RibbonStructure, z: AlgebraElement, subspaces: KirbySubspaces | None = None) -> KirbyCandidate:
    H = rib.algebra
    sub = subspaces or compute_subspaces(rib)
    failures = []
    inl = in_L(H, z)
    if not inl:
        failures.append("z not in L(H)")
    lam = H.right_integral_dual
    Tz = T_map(rib, z)
    cond_a = all(lam(Tz * a) == lam(z * a) for a in sub.Z_basis)
    if not cond_a:
        failures.append("lambda(T(z) a) != lambda(z a) for some central a")
    if sub.V2_basis:
        Q = condition_b_matrix(H, z)
        V = stack([X.arr for X in sub.V2_basis], 0)
        cond_b = einsum("xpq,pq->x", V, Q).is_zero()
    else:
        cond_b = True
    if not cond_b:
        failures.append("quadratic condition fails on V_2(H)")
    return KirbyCandidate(z, inl, cond_a, cond_b, theta_pm(rib, z), failures)


def condition_b_mirrored(rib: RibbonStructure, z: AlgebraElement) -> bool:
    H = rib.algebra
    sub = compute_subspaces(rib)
    if not sub.V2_basis:
        return True
    V = stack([X.arr for X in sub.V2_basis], 0)
    return einsum("xpq,pq->x", V, condition_b_matrix(H, z, mirrored=True)).is_zero()


def sufficient_check(rib: RibbonStructure, z: AlgebraElement) -> bool:
    """T(z) = z and lambda(z x_(1)) z x_(2) = lambda(z x) z for all basis x."""
    H = rib.algebra
    if not T_map(rib, z) == z:
        return False
    phi = _phi(H, z)
    zx = einsum("i,ijk->jk", z.vec, H.M)  # row b: z e_b
    lhs = einsum("xab,a,bk->xk", H.D, phi, zx)
    return lhs == einsum("x,k->xk", phi, z.vec)


# ---------------------------------------------------------------------------


def z_module(rib: RibbonStructure, rho: FArray) -> AlgebraElement:
    """z_V with lambda(z_V x) = Tr(rho(G^-1 x))."""
    H = rib.algebra
    check_representation(H, rho)
    f = einsum("ab,iba->i", act(rho, rib.G_inv), rho)
    z = H.form_to_element(f)
    if not H.element_to_form(z).vec == f:
        raise AxiomFailed("lambda(z_V x) = Tr(G^-1 x)")
    return z


def z_premodular(rib: RibbonStructure, modules) -> AlgebraElement:
    H = rib.algebra
    z = H.zero()
    for rho in modules:
        z = z + z_module(rib, rho) * quantum_dim(rib, rho)
    return z


def t_fixed_space(rib: RibbonStructure) -> list[AlgebraElement]:
    H = rib.algebra
    L = compute_subspaces(rib).L_basis
    if not L:
        return []
    cols = stack([(T_map(rib, x) - x).vec for x in L], 0)  # row t: image of L_t
    ker = _kernel_elements(H, [cols])
    Lst = stack([x.vec for x in L], 0)
    return [AlgebraElement(H, einsum("t,ti->i", c, Lst)) for c in ker]


def is_trace(H: HopfPresentation, t: LinearForm) -> bool:
    T = einsum("ijk,k->ij", H.M, t.vec)
    return T == T.transpose(1, 0) and einsum("ij,j->i", H.Smat, t.vec) == t.vec


def traces_basis(rib: RibbonStructure) -> list[LinearForm]:
    """Images of the T-fixed part of L(H) under z -> lambda . (z G), each checked to be a trace."""
    H = rib.algebra
    out = []
    for z in t_fixed_space(rib):
        t = H.element_to_form(z * rib.G)
        if not is_trace(H, t):
            raise AxiomFailed("t(xy) = t(yx) and t(S(x)) = t(x)", f"for z = {z}")
        out.append(t)
    return out


def traces_report(rib: RibbonStructure) -> Report:
    H = rib.algebra
    rep = Report("trace forms")
    fixed = t_fixed_space(rib)
    forms = [H.element_to_form(z * rib.G) for z in fixed]
    for k, t in enumerate(forms):
        rep.add(f"form {k} is a symmetric S-invariant trace", is_trace(H, t))
    r = linalg.rank(stack([t.vec for t in forms], 0)) if forms else 0
    rep.add("z -> lambda.(zG) injective on the T-fixed space", r == len(fixed))
    return rep


# ---------------------------------------------------------------------------
# families up to z ~ k z + n


def _span_rank(H: HopfPresentation, elems) -> int:
    if not elems:
        return 0
    return linalg.rank(stack([e.vec for e in elems], 0))


def same_family(rib: RibbonStructure, z1: AlgebraElement, z2: AlgebraElement) -> bool:
    """True when z2 = k z1 + n for some k != 0 and n in N(H)."""
    H = rib.algebra
    N = compute_subspaces(rib).N_basis
    r = _span_rank(H, N)
    if _span_rank(H, N + [z1]) == r or _span_rank(H, N + [z2]) == r:
        return False
    return _span_rank(H, N + [z1, z2]) == r + 1


def kirby_families(rib: RibbonStructure, candidates) -> list[int]:
    """Group normalized Kirby elements into families; returns a family index per candidate."""
    reps: list[AlgebraElement] = []
    out = []
    for z in candidates:
        for k, w in enumerate(reps):
            if same_family(rib, w, z):
                out.append(k)
                break
        else:
            reps.append(z)
            out.append(len(reps) - 1)
    return out
