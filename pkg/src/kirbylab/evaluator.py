"""Surgery invariants from link diagrams.

Two independent evaluations are provided.  ``bead_tensor``/``tau_link`` slide
the R-matrix decorations of the crossings along each component to a single
concentration point and pair the result with lambda(z G^(d+1) .), where d is
the Whitney degree.  ``oracle_eval`` instead evaluates the diagram as a
composite of module maps with every component coloured by the regular
representation.
"""

from __future__ import annotations

import os
import string
from dataclasses import dataclass

from .errors import KirbyLabError
from .exactfield import FieldElement
from .farray import FArray, einsum, matmul
from .hopfcore import AlgebraElement, HopfPresentation
from .kirby import NotInL, in_L, is_kirby
from .kirby import theta_pm as _theta_pm
from .links import CAP, CUP, OVER_R, LinkDiagram, linking_data
from .ribboncore import RibbonStructure, act, check_representation, dual_rep, quantum_dim, regular_rep


class NotNormalizedKirby(KirbyLabError):
    """z is not a normalized Kirby element."""


class WidthCapExceeded(KirbyLabError):
    """The dense oracle would need too many simultaneous strands."""


class DeltaVanishes(KirbyLabError):
    """A Gauss sum Delta_+ or Delta_- is zero."""


_LETTERS = string.ascii_letters


def _S_power(H: HopfPresentation, k: int) -> FArray:
    cache = H.__dict__.setdefault("_S_powers", {})
    if k not in cache:
        if k == 0:
            cache[k] = FArray.identity(H.field, H.dim)
        elif k > 0:
            cache[k] = matmul(_S_power(H, k - 1), H.Smat)
        else:
            cache[k] = matmul(_S_power(H, k + 1), H.Sinv)
    return cache[k]


# ---------------------------------------------------------------------------
# traversal bookkeeping


def whitney_degrees(L: LinkDiagram) -> list[int]:
    """Rotation number of each component, in full turns."""
    return [sum(s.exponent for s in sites) for sites in L.traversals]


def _bead_plan(L: LinkDiagram, concentration=None):
    """Per crossing event and diagonal: (component, up, S-exponent).

    concentration[c] = r places component c's concentration point on the
    segment leaving site r of its traversal (default: the first cup).
    """
    plan = {}
    cps = []
    for c, sites in enumerate(L.traversals):
        m = len(sites)
        r = (m - 1) if concentration is None else concentration[c] % m
        order = [(r + 1 + t) % m for t in range(m)]  # sites after the point, in order
        F = 0
        for idx in reversed(order):
            s = sites[idx]
            if s.kind == "x":
                plan[(s.event, s.diag)] = (c, s.up, (1 if s.up else 0) - 2 * F)
            else:
                F += s.exponent
        cps.append(r)
    return plan, cps


def _cp_segments(L: LinkDiagram, cps):
    """Map (event, top port) -> (component, travel up?) for the concentration segments."""
    out = {}
    for c, r in enumerate(cps):
        site = L.traversals[c][r]
        k = site.event
        kind = L.events[k][0]
        if kind == CUP:
            port = "TL" if site.sense == "cw" else "TR"
            out[(k, port)] = (c, True)
        elif kind == CAP:
            # the segment after a cap leads down from it; its top end is the cap's lower port,
            # which we locate at the moment the cap is processed (handled as 'below')
            out[(k, "B" + ("R" if site.sense == "cw" else "L"))] = (c, False)
        else:
            if site.up:
                port = "TR" if site.diag == "BLTR" else "TL"
                out[(k, port)] = (c, True)
            else:
                port = "BL" if site.diag == "BLTR" else "BR"
                out[(k, port)] = (c, False)
    return out


# ---------------------------------------------------------------------------
# bead sweep


class _Sweep:
    """Dense tensor over the open arcs of the partially swept diagram."""

    def __init__(self, H: HopfPresentation):
        self.H = H
        self.state = FArray.scalar(H.field.one())
        self.arcs: list[int] = []  # arc ids, one per state axis
        self.next_id = 0
        self.one = H.u

    def _letters(self):
        return _LETTERS[: len(self.arcs)]

    def new_arc(self) -> int:
        aid = self.next_id
        self.next_id += 1
        s = self._letters()
        self.state = einsum(f"{s},Z->{s}Z", self.state, self.one)
        self.arcs.append(aid)
        return aid

    def apply(self, ops):
        """ops: list of (arc id, op[s, in, out]) sharing the summation index s."""
        s = self._letters()
        out = list(s)
        specs = [s]
        arrays = [self.state]
        free = iter(ch for ch in _LETTERS if ch not in s and ch not in "Z")
        for aid, op in ops:
            ax = self.arcs.index(aid)
            new = next(free)
            specs.append("Z" + out[ax] + new)
            arrays.append(op)
            out[ax] = new
        self.state = einsum(",".join(specs) + "->" + "".join(out), *arrays)

    def merge(self, x: int, y: int, M: FArray) -> int:
        """Replace arcs x and y by one arc carrying their product x.y."""
        s = self._letters()
        ix, iy = self.arcs.index(x), self.arcs.index(y)
        rest = [ch for i, ch in enumerate(s) if i not in (ix, iy)]
        self.state = einsum(f"{s},{s[ix]}{s[iy]}Z->{''.join(rest)}Z", self.state, M)
        self.arcs = [a for a in self.arcs if a not in (x, y)]
        aid = self.next_id
        self.next_id += 1
        self.arcs.append(aid)
        return aid

    def contract(self, x: int, form: FArray):
        s = self._letters()
        ix = self.arcs.index(x)
        rest = s[:ix] + s[ix + 1:]
        self.state = einsum(f"{s},{s[ix]}->{rest}", self.state, form)
        self.arcs.remove(x)

    def reorder(self, ids):
        s = self._letters()
        self.state = einsum(f"{s}->" + "".join(s[self.arcs.index(a)] for a in ids), self.state)
        self.arcs = list(ids)


def _mult_ops(H: HopfPresentation, elems: FArray, right: bool) -> FArray:
    """op[s, in, out]: x -> x.elems[s] (right) or elems[s].x (left)."""
    if right:
        return einsum("sj,ijk->sik", elems, H.M)
    return einsum("sj,jik->sik", elems, H.M)


def _crossing_beads(rib: RibbonStructure, kind: str, e1: int, e2: int):
    """Bead families (rows indexed by the R-term) for the BL->TR and BR->TL strands.

    The over strand carries a (with an extra S on a '\\' crossing), the under
    strand carries b; each is then raised to its S-exponent.
    """
    H = rib.algebra
    if kind == OVER_R:
        return _S_power(H, e1), matmul(rib.Rarr, _S_power(H, e2))
    return matmul(rib.Rarr, _S_power(H, e1)), _S_power(H, e2 + 1)


def _bead_sweep(L: LinkDiagram, rib: RibbonStructure, concentration=None):
    """Sweep keeping each component's value v_c as its own tensor factor.

    Every arc through a concentration point is split there, so a finished
    component is an arc whose two ends are both at its point.
    """
    H = rib.algebra
    M = H.M
    plan, cps = _bead_plan(L, concentration)
    cpseg = _cp_segments(L, cps)
    info = L.event_info
    sw = _Sweep(H)
    # a slot end: (arc id, is head)
    slots: list[tuple[int, bool]] = []
    tail_cp: dict[int, int] = {}  # arc id -> component whose point is at its tail
    head_cp: dict[int, int] = {}
    finished: dict[int, int] = {}  # component -> arc id

    def split(pos: int, comp: int, travel_up: bool):
        aid, is_head = slots[pos]
        new = sw.new_arc()
        if travel_up:
            # below the point: old arc now ends at the point; new arc starts there
            head_cp[aid] = comp
            tail_cp[new] = comp
            slots[pos] = (new, True)
        else:
            tail_cp[aid] = comp
            head_cp[new] = comp
            slots[pos] = (new, False)
        for a in (aid, new):
            _maybe_finish(a)

    def _maybe_finish(a):
        if a in tail_cp and a in head_cp:
            finished[tail_cp[a]] = a

    for k, (kind, p) in enumerate(L.events):
        if kind == CUP:
            aid = sw.new_arc()
            left_up = info[k]["sense"] == "cw"
            slots[p:p] = [(aid, left_up), (aid, not left_up)]
            for port, pos in (("TL", p), ("TR", p + 1)):
                if (k, port) in cpseg:
                    split(pos, *cpseg[(k, port)])
        elif kind == CAP:
            for port, pos in (("BL", p), ("BR", p + 1)):
                if (k, port) in cpseg:
                    c, _ = cpseg[(k, port)]
                    split(pos, c, False)
            (a1, h1), (a2, h2) = slots[p], slots[p + 1]
            head, tail = (a1, a2) if h1 else (a2, a1)
            if head == tail:
                raise AssertionError("closed arc without a concentration point")
            new = sw.merge(head, tail, M)
            if head in tail_cp:
                tail_cp[new] = tail_cp.pop(head)
            if tail in head_cp:
                head_cp[new] = head_cp.pop(tail)
            # the merged arc keeps the other ends of head and tail
            for i, (a, h) in enumerate(slots):
                if a in (head, tail) and i not in (p, p + 1):
                    slots[i] = (new, h)
            del slots[p:p + 2]
            _maybe_finish(new)
        else:
            for port, pos in (("BL", p), ("BR", p + 1)):
                if (k, port) in cpseg:
                    c, _ = cpseg[(k, port)]
                    split(pos, c, False)
            _, _, e1 = plan[(k, "BLTR")]
            _, _, e2 = plan[(k, "BRTL")]
            A, B = _crossing_beads(rib, kind, e1, e2)
            (a1, h1), (a2, h2) = slots[p], slots[p + 1]
            sw.apply([(a1, _mult_ops(H, A, h1)), (a2, _mult_ops(H, B, h2))])
            slots[p], slots[p + 1] = slots[p + 1], slots[p]
            for port, pos in (("TL", p), ("TR", p + 1)):
                if (k, port) in cpseg:
                    split(pos, *cpseg[(k, port)])
    if slots:
        raise AssertionError("open strands after sweep")
    return sw, finished


@dataclass
class BeadState:
    diagram: LinkDiagram
    tensor: FArray  # arity n_L, axis c holds component c
    whitney: list[int]
    concentration: list[int]  # traversal site after which each point sits

    @property
    def arity(self) -> int:
        return self.tensor.ndim


def bead_tensor(L: LinkDiagram, rib: RibbonStructure, concentration=None) -> BeadState:
    sw, finished = _bead_sweep(L, rib, concentration)
    ids = [finished[c] for c in range(L.n_components)]
    sw.reorder(ids)
    _, cps = _bead_plan(L, concentration)
    return BeadState(L, sw.state, whitney_degrees(L), cps)


def _component_forms(rib: RibbonStructure, z: AlgebraElement, degrees) -> list[FArray]:
    H = rib.algebra
    out = []
    for d in degrees:
        w = z * rib.G_power(d + 1)
        out.append(H.element_to_form(w).vec)
    return out


def _psi(H: HopfPresentation) -> FArray:
    """Row matrix of y -> S^2(y <- nu); lambda(a b) = lambda(psi(b) a)."""
    cache = H.__dict__.setdefault("_psi_map", [])
    if not cache:
        cache.append(matmul(H.nu_harpoon, H.S2))
    return cache[0]


def _pairing_sweep(L: LinkDiagram, rib: RibbonStructure, cvecs, concentration=None) -> FieldElement:
    """sum_k prod_c lambda(c_c v_c^k) with one tensor factor per open arc.

    When the concentration point of an arc is reached, the arc value V is
    replaced by psi(V) c (point passed going up) or c V (going down), so a
    closed component reads lambda(psi(Y) c X) = lambda(c X Y).  Beads added
    later at the tail of such an arc go through psi.
    """
    H = rib.algebra
    M = H.M
    Psi = _psi(H)
    lam = H.right_integral_dual.vec
    plan, cps = _bead_plan(L, concentration)
    cpseg = _cp_segments(L, cps)
    info = L.event_info
    sw = _Sweep(H)
    slots: list[tuple[int, bool]] = []
    has_cp: dict[int, int] = {}

    def unary(aid, mat):
        sw.apply([(aid, mat.reshape(1, *mat.shape))])

    def add_cp(pos, comp, travel_up):
        aid, _ = slots[pos]
        c = cvecs[comp]
        if travel_up:
            unary(aid, einsum("ij,b,jbk->ik", Psi, c, M))
        else:
            unary(aid, einsum("a,aik->ik", c, M))
        has_cp[aid] = comp

    def port_cps(k, ports):
        for port, pos in ports:
            if (k, port) in cpseg:
                add_cp(pos, *cpseg[(k, port)])

    for k, (kind, p) in enumerate(L.events):
        if kind == CUP:
            aid = sw.new_arc()
            left_up = info[k]["sense"] == "cw"
            slots[p:p] = [(aid, left_up), (aid, not left_up)]
            port_cps(k, (("TL", p), ("TR", p + 1)))
        elif kind == CAP:
            port_cps(k, (("BL", p), ("BR", p + 1)))
            (a1, h1), (a2, _) = slots[p], slots[p + 1]
            head, tail = (a1, a2) if h1 else (a2, a1)
            del slots[p:p + 2]
            if head == tail:
                if head not in has_cp:
                    raise AssertionError("closed arc without a concentration point")
                sw.contract(head, lam)
                continue
            if tail in has_cp:
                unary(head, Psi)
            new = sw.merge(head, tail, M)
            for old in (head, tail):
                if old in has_cp:
                    has_cp[new] = has_cp.pop(old)
            slots = [((new, h) if a in (head, tail) else (a, h)) for a, h in slots]
        else:
            port_cps(k, (("BL", p), ("BR", p + 1)))
            _, _, e1 = plan[(k, "BLTR")]
            _, _, e2 = plan[(k, "BRTL")]
            A, B = _crossing_beads(rib, kind, e1, e2)
            ops = []
            for (aid, is_head), X in ((slots[p], A), (slots[p + 1], B)):
                if not is_head and aid in has_cp:
                    X = matmul(X, Psi)
                ops.append((aid, _mult_ops(H, X, is_head)))
            sw.apply(ops)
            slots[p], slots[p + 1] = slots[p + 1], slots[p]
            port_cps(k, (("TL", p), ("TR", p + 1)))
    return sw.state.element(())


def tau_link(L: LinkDiagram, rib: RibbonStructure, z: AlgebraElement, concentration=None, check=True) -> FieldElement:
    """sum_k prod_c lambda(z G^(d_c+1) v_c^k)."""
    H = rib.algebra
    if check and not in_L(H, z):
        raise NotInL(f"z = {z} is not in L(H)")
    cvecs = [(z * rib.G_power(d + 1)).vec for d in whitney_degrees(L)]
    return _pairing_sweep(L, rib, cvecs, concentration)


def tau_link_from_beads(state: BeadState, rib: RibbonStructure, z: AlgebraElement) -> FieldElement:
    """Contract a full bead tensor against the forms lambda(z G^(d_i+1) .)."""
    forms = _component_forms(rib, z, state.whitney)
    T = state.tensor
    for f in forms:
        T = einsum("a...,a->...", T, f)
    return T.element(())


def theta_pm(rib: RibbonStructure, z: AlgebraElement) -> tuple[FieldElement, FieldElement]:
    """(lambda(z theta), lambda(z theta^-1))."""
    return _theta_pm(rib, z)


def _power(x: FieldElement, e: int) -> FieldElement:
    return x ** e if e >= 0 else x.inverse() ** (-e)


def tau_manifold(L: LinkDiagram, rib: RibbonStructure, z: AlgebraElement, force: bool = False) -> FieldElement:
    """lambda(z theta)^(b- - n) lambda(z theta^-1)^(-b-) tau_link(L, z)."""
    if not force:
        cand = is_kirby(rib, z)
        if not cand.normalized:
            raise NotNormalizedKirby("; ".join(cand.failures) or "a Theta value vanishes")
    tp, tm = theta_pm(rib, z)
    if tp.is_zero() or tm.is_zero():
        raise NotNormalizedKirby("Theta_+ or Theta_- vanishes")
    ld = linking_data(L)
    n = L.n_components
    return _power(tp, ld.b_minus - n) * _power(tm, -ld.b_minus) * tau_link(L, rib, z, check=not force)


# ---------------------------------------------------------------------------
# dense module evaluation


def width_cap() -> int:
    return int(os.environ.get("KIRBYLAB_WIDTH_CAP", "6"))


class _DenseSweep:
    def __init__(self, fld):
        self.state = FArray.scalar(fld.one())
        self.n = 0

    def insert(self, p: int, vec2: FArray):
        s = _LETTERS[: self.n]
        out = s[:p] + "YZ" + s[p:]
        self.state = einsum(f"{s},YZ->{out}", self.state, vec2)
        self.n += 2

    def remove(self, p: int, form2: FArray):
        s = _LETTERS[: self.n]
        out = s[:p] + s[p + 2:]
        self.state = einsum(f"{s},{s[p]}{s[p + 1]}->{out}", self.state, form2)
        self.n -= 2

    def cross(self, p: int, opx: FArray, opy: FArray):
        """x (x) y -> sum_s opy[s] y (x) opx[s] x, op[s, out, in]."""
        s = _LETTERS[: self.n]
        x, y = s[p], s[p + 1]
        out = s[:p] + "YX" + s[p + 2:]
        self.state = einsum(f"{s},WX{x},WY{y}->{out}", self.state, opx, opy)


def _dense_eval(L: LinkDiagram, rib: RibbonStructure, reps, first_cup=None) -> FieldElement:
    """Evaluate the diagram with component c coloured by reps[c] (shape (dim, d, d)).

    first_cup, if given, maps each component to a vector replacing its first cup.
    """
    H = rib.algebra
    if L.max_width > width_cap():
        raise WidthCapExceeded(f"diagram width {L.max_width} exceeds cap {width_cap()} (KIRBYLAB_WIDTH_CAP)")
    duals = [dual_rep(H, r) for r in reps]
    G, Gi = rib.G, rib.G_inv
    info = L.event_info
    sw = _DenseSweep(H.field)
    Sarr = H.Smat

    def rho(c, up):
        return duals[c] if up else reps[c]

    for k, (kind, p) in enumerate(L.events):
        if kind == CUP:
            c, sense = info[k]["comp"], info[k]["sense"]
            d = reps[c].shape[1]
            if first_cup is not None and info[k].get("first"):
                vec = first_cup[c]
            elif sense == "ccw":
                vec = FArray.identity(H.field, d)  # sum e_k (x) e^k
            else:
                vec = act(reps[c], Gi).transpose(1, 0)  # sum e^a (x) G^-1 e_a
            sw.insert(p, vec)
        elif kind == CAP:
            c, sense = info[k]["comp"], info[k]["sense"]
            d = reps[c].shape[1]
            if sense == "cw":
                form = FArray.identity(H.field, d)  # f (x) m -> f(m)
            else:
                form = act(reps[c], G).transpose(1, 0)  # m (x) f -> f(G m)
            sw.remove(p, form)
        else:
            cx, ux = info[k]["BLTR"]
            cy, uy = info[k]["BRTL"]
            rx, ry = rho(cx, ux), rho(cy, uy)
            if kind == OVER_R:
                ax = einsum("sj,jab->sab", FArray.identity(H.field, H.dim), rx)
                by = einsum("sj,jab->sab", rib.Rarr, ry)
            else:
                ax = einsum("sj,jab->sab", rib.Rarr, rx)
                by = einsum("sj,jab->sab", Sarr, ry)
            sw.cross(p, ax, by)
    return sw.state.element(())


def oracle_eval(L: LinkDiagram, rib: RibbonStructure, z: AlgebraElement) -> FieldElement:
    """Regular-representation evaluation, each component cut open by (lambda.z) (x) 1."""
    H = rib.algebra
    reg = regular_rep(H)
    phi = H.element_to_form(z).vec
    first = {}
    for c, sites in enumerate(L.traversals):
        if sites[-1].sense == "cw":
            first[c] = einsum("a,b->ab", phi, H.u)
        else:
            first[c] = einsum("a,b->ab", rib.G.vec, phi)
    return _dense_eval(L, rib, [reg] * L.n_components, first)


def colored_eval(L: LinkDiagram, rib: RibbonStructure, coloring) -> FieldElement:
    """coloring: one representation per component, or a dict component -> representation."""
    H = rib.algebra
    if isinstance(coloring, dict):
        reps = [coloring[c] for c in range(L.n_components)]
    else:
        reps = list(coloring)
    if len(reps) != L.n_components:
        raise ValueError(f"{len(reps)} colours for {L.n_components} components")
    for r in reps:
        check_representation(H, r)
    return _dense_eval(L, rib, reps)


def delta_pm(rib: RibbonStructure, modules) -> tuple[FieldElement, FieldElement]:
    """Delta_+- = sum over simple modules of v^{+-1} dim_q^2, read off from +-1-framed unknots."""
    from .links import unknot

    plus = minus = rib.algebra.field.zero()
    for rho in modules:
        dq = quantum_dim(rib, rho)
        plus = plus + dq * colored_eval(unknot(1), rib, [rho])
        minus = minus + dq * colored_eval(unknot(-1), rib, [rho])
    return plus, minus


def rt_invariant(rib: RibbonStructure, modules, L: LinkDiagram) -> FieldElement:
    import itertools

    dp, dm = delta_pm(rib, modules)
    if dp.is_zero() or dm.is_zero():
        raise DeltaVanishes("Delta_+ or Delta_- is zero")
    modules = list(modules)
    dims = [quantum_dim(rib, r) for r in modules]
    total = rib.algebra.field.zero()
    n = L.n_components
    for col in itertools.product(range(len(modules)), repeat=n):
        w = rib.algebra.field.one()
        for c in col:
            w = w * dims[c]
        total = total + w * colored_eval(L, rib, [modules[c] for c in col])
    ld = linking_data(L)
    return _power(dp, ld.b_minus - n) * _power(dm, -ld.b_minus) * total
