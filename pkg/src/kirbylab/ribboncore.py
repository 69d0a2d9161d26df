"""Quasitriangular and ribbon structure on a HopfPresentation.

R is a dim x dim array with R = sum R[i, j] e_i (x) e_j.  Writing it as
sum_i e_i (x) b_i with b_i = R[i, :] gives a decomposition with dim terms,
which is what every contraction below uses.

Representations are arrays ``rho`` of shape (dim, d, d) where ``rho[i]`` is
the matrix of e_i acting on column vectors.
"""

from __future__ import annotations

from functools import cached_property

from . import linalg
from .errors import AxiomFailed, KirbyLabError
from .exactfield import FieldElement
from .farray import FArray, einsum
from .hopfcore import AlgebraElement, HopfPresentation, IdentityViolated, TensorElement
from .report import Report


class NotInvertible(KirbyLabError):
    """The R-matrix has no inverse in H (x) H."""


class ConsistencyFailure(KirbyLabError):
    """A derived identity of the ribbon structure fails."""


class NotARepresentation(KirbyLabError):
    """Matrices supplied as a module do not define an H-action."""


def _one2(H: HopfPresentation) -> FArray:
    return einsum("a,b->ab", H.u, H.u)


def _ybe_sides(H: HopfPresentation, R: FArray):
    M = H.M
    # R12 R13 R23 = sum_{s,t,u} e_s e_t (x) b_s e_u (x) b_t b_u
    Y2 = einsum("sp,pul->sul", R, M)
    Z3 = einsum("tq,ur,qrm->tum", R, R, M)
    lhs = einsum("stk,sul,tum->klm", M, Y2, Z3)
    # R23 R13 R12 = sum_{s,t,u} e_t e_u (x) e_s b_u (x) b_s b_t
    Y2b = einsum("up,spl->usl", R, M)
    rhs = einsum("tuk,usl,stm->klm", M, Y2b, Z3)
    return lhs, rhs


def _invertible(H: HopfPresentation, R: FArray) -> bool:
    n = H.dim
    LR = einsum("ab,ace,bdf->cdef", R, H.M, H.M).reshape(n * n, n * n)
    try:
        linalg.solve(LR.transpose(1, 0), _one2(H).reshape(n * n))
    except linalg.SingularSystem:
        return False
    return True


def verify_quasitriangular(H: HopfPresentation, R) -> Report:
    R = R.arr if isinstance(R, TensorElement) else R
    rep = Report("quasitriangular axioms")
    M, D, S = H.M, H.D, H.Smat
    one2 = _one2(H)
    Rs = einsum("ab,ac->cb", R, S)
    inv_ok = H.tensor_mul2(R, Rs) == one2 and H.tensor_mul2(Rs, R) == one2
    if not inv_ok and not _invertible(H, R):
        raise NotInvertible("R has no inverse in H (x) H")
    ok = True
    for x in range(H.dim):
        if not H.tensor_mul2(R, D[x]) == H.tensor_mul2(D[x].transpose(1, 0), R):
            ok = False
            break
    rep.add("R Delta(x) = sigma Delta(x) R", ok)
    rep.add("(Delta (x) id)(R) = R13 R23", einsum("ab,aij->ijb", R, D) == einsum("sp,tq,pqk->stk", R, R, M))
    rep.add("(id (x) Delta)(R) = R13 R12", einsum("ab,bij->aij", R, D) == einsum("stk,tq,sp->kqp", M, R, R))
    rep.add("(eps (x) id)(R) = 1", einsum("ab,a->b", R, H.eps) == H.u)
    rep.add("(id (x) eps)(R) = 1", einsum("ab,b->a", R, H.eps) == H.u)
    rep.add("(S (x) id)(R) = R^-1", inv_ok)
    rep.add("(S (x) S)(R) = R", einsum("ab,ac,bd->cd", R, S, S) == R)
    lhs, rhs = _ybe_sides(H, R)
    rep.add("R12 R13 R23 = R23 R13 R12", lhs == rhs)
    return rep


def drinfeld_u(H: HopfPresentation, R) -> tuple[AlgebraElement, AlgebraElement]:
    """(u, u^-1) with u = m(S (x) id)(R21) and u^-1 = m(id (x) S^2)(R21)."""
    R = R.arr if isinstance(R, TensorElement) else R
    u = AlgebraElement(H, einsum("ip,pq,qik->k", R, H.Smat, H.M))
    uinv = AlgebraElement(H, einsum("ip,ij,pjk->k", R, H.S2, H.M))
    one = H.one()
    if not (u * uinv == one and uinv * u == one):
        raise AxiomFailed("u u^-1 = 1")
    conj = einsum("ab,bc->ac", H.lmul_map(u.vec), H.rmul_map(uinv.vec))
    if not conj == H.S2:
        raise AxiomFailed("S^2(x) = u x u^-1")
    return u, uinv


def verify_ribbon(H: HopfPresentation, R, theta) -> Report:
    R = R.arr if isinstance(R, TensorElement) else R
    th = theta.vec if isinstance(theta, AlgebraElement) else theta
    theta = AlgebraElement(H, th)
    rep = Report("ribbon axioms")
    rep.add("theta central", H.lmul_map(th) == H.rmul_map(th))
    rep.add("S(theta) = theta", H.S_vec(th) == th)
    rep.add("eps(theta) = 1", H.counit(theta) == 1)
    R21R = H.tensor_mul2(R.transpose(1, 0), R)
    rep.add("Delta(theta) = (theta (x) theta) R21 R",
            einsum("i,ijk->jk", th, H.D) == H.tensor_mul2(einsum("a,b->ab", th, th), R21R))
    try:
        H.inverse(theta)
        rep.add("theta invertible", True)
    except IdentityViolated:
        rep.add("theta invertible", False)
    u = AlgebraElement(H, einsum("ip,pq,qik->k", R, H.Smat, H.M))
    rep.add("theta^-2 = u S(u)", theta * theta * u * u.S() == H.one())
    return rep


class RibbonStructure:
    """A ribbon Hopf algebra (H, R, theta) together with its derived elements."""

    def __init__(self, algebra: HopfPresentation, R, theta):
        self.algebra = algebra
        self.Rarr = R.arr if isinstance(R, TensorElement) else R
        th = theta.vec if isinstance(theta, AlgebraElement) else theta
        self.theta = AlgebraElement(algebra, th)
        if self.Rarr.shape != (algebra.dim, algebra.dim):
            raise ValueError("R has the wrong shape")

    @property
    def R(self) -> TensorElement:
        return TensorElement(self.algebra, self.Rarr)

    def verify(self) -> Report:
        q = verify_quasitriangular(self.algebra, self.Rarr)
        r = verify_ribbon(self.algebra, self.Rarr, self.theta)
        rep = Report("ribbon Hopf algebra", q.checks + r.checks)
        return rep

    @cached_property
    def _u(self):
        return drinfeld_u(self.algebra, self.Rarr)

    @property
    def u(self) -> AlgebraElement:
        return self._u[0]

    @property
    def u_inv(self) -> AlgebraElement:
        return self._u[1]

    @cached_property
    def theta_inv(self) -> AlgebraElement:
        return self.algebra.inverse(self.theta)

    @cached_property
    def G(self) -> AlgebraElement:
        return self.theta * self.u

    @cached_property
    def G_inv(self) -> AlgebraElement:
        return self.u_inv * self.theta_inv

    @cached_property
    def h_nu(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, einsum("ab,b->a", self.Rarr, self.algebra.nu.vec))

    def G_power(self, k: int) -> AlgebraElement:
        return self.G ** k if k >= 0 else self.G_inv ** (-k)

    def special_grouplike(self) -> AlgebraElement:
        return special_grouplike(self)


def special_grouplike(rib: RibbonStructure) -> AlgebraElement:
    """G = theta u, after checking the identities it has to satisfy."""
    H = rib.algebra
    G, Gi, u = rib.G, rib.G_inv, rib.u
    if not (G * Gi == H.one()):
        raise ConsistencyFailure("G G^-1 = 1")
    if not (H.comultiply(G).arr == einsum("a,b->ab", G.vec, G.vec) and H.counit(G) == 1):
        raise ConsistencyFailure("G grouplike")
    if not (u.S() == Gi * u * Gi):
        raise ConsistencyFailure("S(u) = G^-1 u G^-1")
    if not einsum("ab,bc->ac", H.lmul_map(G.vec), H.rmul_map(Gi.vec)) == H.S2:
        raise ConsistencyFailure("S^2(x) = G x G^-1")
    if not (H.g == G * G * rib.h_nu):
        raise ConsistencyFailure("g = G^2 h_nu")
    return G


def check_ribbon_identities(rib: RibbonStructure) -> Report:
    H = rib.algebra
    rep = Report("ribbon identities")
    lam = H.right_integral_dual.vec
    G2h = rib.G * rib.G * rib.h_nu
    rep.add("lambda(S(x)) = lambda(G^2 h_nu x)",
            einsum("ij,j->i", H.Smat, lam) == einsum("a,aik,k->i", G2h.vec, H.M, lam))
    rep.add("S^2(u) = u", H.S_vec(H.S_vec(rib.u.vec)) == rib.u.vec)
    rep.add("(S (x) S)(R) = R", einsum("ab,ac,bd->cd", rib.Rarr, H.Smat, H.Smat) == rib.Rarr)
    return rep


# ---------------------------------------------------------------------------
# modules


def check_representation(H: HopfPresentation, rho: FArray) -> None:
    if rho.ndim != 3 or rho.shape[0] != H.dim or rho.shape[1] != rho.shape[2]:
        raise NotARepresentation(f"expected shape (dim, d, d), got {rho.shape}")
    d = rho.shape[1]
    if not einsum("iab,jbc->ijac", rho, rho) == einsum("ijk,kac->ijac", H.M, rho):
        raise NotARepresentation("rho(x) rho(y) != rho(xy)")
    if not einsum("i,iab->ab", H.u, rho) == FArray.identity(H.field, d):
        raise NotARepresentation("rho(1) != id")


def act(rho: FArray, x) -> FArray:
    v = x.vec if isinstance(x, AlgebraElement) else x
    return einsum("i,iab->ab", v, rho)


def regular_rep(H: HopfPresentation) -> FArray:
    return einsum("ijk->ikj", H.M)


def trivial_rep(H: HopfPresentation) -> FArray:
    return H.eps.reshape(H.dim, 1, 1)


def dual_rep(H: HopfPresentation, rho: FArray) -> FArray:
    """rho*(h) = rho(S(h))^T."""
    return einsum("ij,jab->iba", H.Smat, rho)


def tensor_rep(H: HopfPresentation, r1: FArray, r2: FArray) -> FArray:
    d1, d2 = r1.shape[1], r2.shape[1]
    return einsum("ijk,jab,kcd->iacbd", H.D, r1, r2).reshape(H.dim, d1 * d2, d1 * d2)


def _trace(A: FArray) -> FieldElement:
    return einsum("aa->", A).element(())


def quantum_trace(rib: RibbonStructure, rho: FArray, f: FArray) -> FieldElement:
    check_representation(rib.algebra, rho)
    return _trace(einsum("ab,bc->ac", act(rho, rib.G), f))


def quantum_dim(rib: RibbonStructure, rho: FArray) -> FieldElement:
    check_representation(rib.algebra, rho)
    return _trace(act(rho, rib.G))


def quantum_dim_report(rib: RibbonStructure, rho: FArray) -> dict:
    check_representation(rib.algebra, rho)
    a = _trace(act(rho, rib.G))
    b = _trace(act(rho, rib.G_inv))
    return {"dim_q": a, "dim_q_inverse_side": b, "agree": a == b}
