"""Fusion-ring shadow of a semisimple ribbon category.

Labels are kept in a fixed order; every mapping over labels is stored as a
list in that order, so serialization and iteration are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import AxiomFailed, KirbyLabError
from .exactfield import FieldDescriptor, FieldElement, cyclotomic, rationals
from .report import Report


class ExponentialGuard(KirbyLabError):
    """Subset enumeration refused for too many labels."""


class UnknownLabel(KirbyLabError):
    pass


SUBSET_LIMIT = 20


@dataclass(frozen=True)
class FusionData:
    field: FieldDescriptor
    labels: tuple
    unit: object
    dual: tuple  # dual[i] = index of the dual of labels[i]
    dims: tuple  # FieldElement per label
    twists: tuple  # FieldElement per label
    N: dict = field(compare=False)  # (i, j, k) -> multiplicity of label k in i (x) j, zero entries omitted

    def index(self, lab) -> int:
        try:
            return self.labels.index(lab)
        except ValueError:
            raise UnknownLabel(f"unknown label {lab!r}") from None

    @property
    def unit_index(self) -> int:
        return self.index(self.unit)

    def n(self, i: int, j: int, k: int) -> int:
        return self.N.get((i, j, k), 0)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "labels": list(self.labels),
            "unit": self.unit,
            "dual": [self.labels[d] for d in self.dual],
            "dims": [d.to_json() for d in self.dims],
            "twists": [t.to_json() for t in self.twists],
            "N": [[self.labels[i], self.labels[j], self.labels[k], m] for (i, j, k), m in sorted(self.N.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FusionData":
        fld = FieldDescriptor.from_json(obj["field"]) if "field" in obj else rationals()
        labels = tuple(obj["labels"])
        idx = {lab: i for i, lab in enumerate(labels)}
        dual = tuple(idx[d] for d in obj["dual"])
        dims = tuple(fld.parse(d) for d in obj["dims"])
        twists = tuple(fld.parse(t) for t in obj["twists"])
        N = {}
        for a, b, c, m in obj["N"]:
            if m:
                N[(idx[a], idx[b], idx[c])] = int(m)
        return cls(fld, labels, obj["unit"], dual, dims, twists, N)


def verify_fusion(data: FusionData) -> Report:
    rep = Report("fusion axioms")
    L = range(len(data.labels))
    u = data.unit_index
    rep.add("unit is self-dual", data.dual[u] == u)
    rep.add("duality is an involution", all(data.dual[data.dual[i]] == i for i in L))
    rep.add("N^1_{l,m} = delta_{l, m dual}", all(data.n(i, j, u) == int(i == data.dual[j]) for i in L for j in L))
    rep.add("unit fusion", all(data.n(u, j, k) == int(j == k) == data.n(j, u, k) for j in L for k in L))
    assoc = all(
        sum(data.n(a, b, x) * data.n(x, c, d) for x in L) == sum(data.n(a, x, d) * data.n(b, c, x) for x in L)
        for a in L for b in L for c in L for d in L
    )
    rep.add("associativity", assoc)
    dims_ok = all(
        data.dims[i] * data.dims[j] == sum((data.dims[k] * data.n(i, j, k) for k in L), data.field.zero())
        for i in L for j in L
    )
    rep.add("dims multiplicative", dims_ok)
    rep.add("dims nonzero", all(not d.is_zero() for d in data.dims))
    rep.add("twists invertible", all(not t.is_zero() for t in data.twists))
    return rep


# ---------------------------------------------------------------------------
# Hom(1, B) basis calculus


@dataclass(frozen=True)
class FusionVector:
    data: FusionData = field(repr=False, compare=False)
    coords: tuple  # FieldElement per label

    @classmethod
    def basis(cls, data: FusionData, lab) -> "FusionVector":
        i = data.index(lab)
        return cls(data, tuple(data.field.one() if k == i else data.field.zero() for k in range(len(data.labels))))

    @classmethod
    def from_mapping(cls, data: FusionData, mapping) -> "FusionVector":
        c = [data.field.zero()] * len(data.labels)
        for lab, v in mapping.items():
            c[data.index(lab)] = v if isinstance(v, FieldElement) else data.field(v)
        return cls(data, tuple(c))

    def __getitem__(self, lab) -> FieldElement:
        return self.coords[self.data.index(lab)]

    def __add__(self, other):
        return FusionVector(self.data, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "FusionVector":
        return FusionVector(self.data, tuple(a * c for a in self.coords))

    def __eq__(self, other):
        return isinstance(other, FusionVector) and self.coords == other.coords

    def __hash__(self):
        return hash(tuple(str(c) for c in self.coords))

    @property
    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coords) if not c.is_zero()]

    def is_zero(self) -> bool:
        return not self.support

    def to_json(self) -> dict:
        return {str(self.data.labels[i]): self.coords[i].to_json() for i in self.support}


def unit_vector(data: FusionData) -> FusionVector:
    return FusionVector.basis(data, data.unit)


def m_B(a: FusionVector, b: FusionVector) -> FusionVector:
    d = a.data
    out = [d.field.zero()] * len(d.labels)
    for (i, j, k), m in d.N.items():
        if a.coords[i].is_zero() or b.coords[j].is_zero():
            continue
        out[k] = out[k] + a.coords[i] * b.coords[j] * m
    return FusionVector(d, tuple(out))


def S_B(a: FusionVector) -> FusionVector:
    d = a.data
    out = [d.field.zero()] * len(d.labels)
    for i, c in enumerate(a.coords):
        out[d.dual[i]] = out[d.dual[i]] + c
    return FusionVector(d, tuple(out))


def eps_B(a: FusionVector) -> FieldElement:
    d = a.data
    return sum((c * dim for c, dim in zip(a.coords, d.dims)), d.field.zero())


def slice_B(a: FusionVector, lab) -> FusionVector:
    """(id (x) f_mu) Delta_B(a): keeps only the mu coefficient."""
    d = a.data
    mu = d.index(lab)
    return FusionVector(d, tuple(c if i == mu else d.field.zero() for i, c in enumerate(a.coords)))


def hom1B_ops(a: FusionVector, b: FusionVector | None = None) -> dict:
    """All basis-calculus operations at once, for reporting."""
    d = a.data
    out = {"S": S_B(a), "eps": eps_B(a), "slices": {lab: slice_B(a, lab) for lab in d.labels}}
    if b is not None:
        out["m"] = m_B(a, b)
    return out


def check_basis_identities(data: FusionData) -> Report:
    rep = Report("basis identities")
    labs = data.labels
    e = {lab: FusionVector.basis(data, lab) for lab in labs}
    one = unit_vector(data)
    rep.add("S_B(e_l) = e_{l dual}", all(S_B(e[l]) == e[labs[data.dual[data.index(l)]]] for l in labs))
    rep.add("m_B(e_1, e_l) = e_l = m_B(e_l, e_1)", all(m_B(one, e[l]) == e[l] == m_B(e[l], one) for l in labs))
    rep.add("eps_B(e_l) = dim_q(l)", all(eps_B(e[l]) == data.dims[data.index(l)] for l in labs))
    rep.add("(id (x) f_m) Delta_B(e_l) = delta_{lm} e_l",
            all(slice_B(e[l], m) == (e[l] if l == m else FusionVector(data, tuple([data.field.zero()] * len(labs)))) for l in labs for m in labs))
    rep.add("m_B associative", all(m_B(m_B(e[a], e[b]), e[c]) == m_B(e[a], m_B(e[b], e[c])) for a in labs for b in labs for c in labs))
    rep.add("S_B anti-multiplicative", all(S_B(m_B(e[a], e[b])) == m_B(S_B(e[b]), S_B(e[a])) for a in labs for b in labs))
    return rep


def kirby_necessary(a: FusionVector) -> Report:
    d = a.data
    rep = Report("necessary conditions for a Kirby element")
    L = range(len(d.labels))
    rep.add("S_B(a) = a", S_B(a) == a)
    u = d.unit_index
    a1 = a.coords[u]
    supp = a.support
    rep.add("a_l = a_1 dim_q(l) on the support", bool(supp) and all(a.coords[i] == a1 * d.dims[i] for i in supp))
    quad = all(
        d.dims[m] * a.coords[m] * a.coords[n]
        == a.coords[m] * sum((a.coords[l] * d.n(l, m, n) for l in L), d.field.zero())
        for m in L for n in L
    )
    rep.add("dim_q(m) a_m a_n = a_m sum_l N^n_{l,m} a_l", quad)
    absorb = all(
        m_B(a, FusionVector.basis(d, d.labels[l])) == a.scale(d.dims[l]) == m_B(FusionVector.basis(d, d.labels[l]), a)
        for l in supp
    )
    rep.add("m_B(a, e_l) = dim_q(l) a = m_B(e_l, a) on the support", absorb)
    return rep


def subset_vector(data: FusionData, E) -> FusionVector:
    """sum over E of dim_q(l) e_l (E given as label indices)."""
    idx = set(E)
    return FusionVector(data, tuple(data.dims[i] if i in idx else data.field.zero() for i in range(len(data.labels))))


def closed_subsets(data: FusionData) -> list[tuple]:
    """Label subsets containing 1, closed under duals and fusion (as label tuples)."""
    n = len(data.labels)
    if n > SUBSET_LIMIT:
        raise ExponentialGuard(f"{n} labels exceeds the limit of {SUBSET_LIMIT}")
    u = data.unit_index
    others = [i for i in range(n) if i != u]
    out = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            E = {u, *combo}
            if any(data.dual[i] not in E for i in E):
                continue
            if any(k not in E for (i, j, k) in data.N if i in E and j in E):
                continue
            out.append(tuple(data.labels[i] for i in sorted(E)))
    return out


def delta_pm(data: FusionData, E=None) -> tuple[FieldElement, FieldElement]:
    """(sum v dim^2, sum v^-1 dim^2) over E (all labels by default)."""
    idx = range(len(data.labels)) if E is None else [data.index(l) for l in E]
    plus = minus = data.field.zero()
    for i in idx:
        d2 = data.dims[i] * data.dims[i]
        plus = plus + data.twists[i] * d2
        minus = minus + data.twists[i].inverse() * d2
    return plus, minus


# ---------------------------------------------------------------------------
# builders


def pointed_data(N: int, quadratic: bool = False) -> FusionData:
    """Z/N with dims 1; twists 1, or zeta_N^(j^2) when quadratic."""
    fld = cyclotomic(N) if quadratic and N > 2 else rationals()
    one = fld.one()
    if quadratic and N > 2:
        q = fld.gen()
        twists = tuple(q ** ((j * j) % N) for j in range(N))
    else:
        twists = tuple(one for _ in range(N))
    Nmap = {(i, j, (i + j) % N): 1 for i in range(N) for j in range(N)}
    return FusionData(fld, tuple(range(N)), 0, tuple((-i) % N for i in range(N)), tuple(one for _ in range(N)), twists, Nmap)


def trivial_data() -> FusionData:
    fld = rationals()
    return FusionData(fld, (0,), 0, (0,), (fld.one(),), (fld.one(),), {(0, 0, 0): 1})


def fusion_from_modules(rib, modules, labels=None) -> FusionData:
    """Fusion data of simple modules given by representation matrices.

    Multiplicities are dimensions of intertwiner spaces; the twist of a label
    is the scalar of theta on it, which is also the value of a positive curl.
    """
    from . import linalg
    from .farray import FArray, einsum
    from .ribboncore import act, check_representation, dual_rep, quantum_dim, tensor_rep

    H = rib.algebra
    mods = list(modules)
    for r in mods:
        check_representation(H, r)
    labels = tuple(labels or range(len(mods)))
    gens = H.generators

    def hom_dim(r1, r2) -> int:
        # X with r2(e) X = X r1(e) for generators e; X has shape (d2, d1)
        d1, d2 = r1.shape[1], r2.shape[1]
        blocks = []
        for g in gens:
            A = r1[g]
            B = r2[g]
            # vec(X) -> B X - X A, as a (d2*d1) x (d2*d1) matrix
            I1, I2 = FArray.identity(H.field, d1), FArray.identity(H.field, d2)
            op = einsum("pr,qs->pqrs", B, I1) - einsum("pr,sq->pqrs", I2, A)
            blocks.extend(linalg.farray_rows(op.reshape(d2 * d1, d2 * d1)))
        return len(linalg.nullspace_rows(H.field, blocks, d2 * d1))

    n = len(mods)
    Nmap = {}
    for i in range(n):
        for j in range(n):
            T = tensor_rep(H, mods[i], mods[j])
            for k in range(n):
                m = hom_dim(T, mods[k])
                if m:
                    Nmap[(i, j, k)] = m
    dual = []
    for i in range(n):
        D = dual_rep(H, mods[i])
        hits = [k for k in range(n) if hom_dim(D, mods[k])]
        if len(hits) != 1:
            raise AxiomFailed("dual of a simple module", f"label {labels[i]} has {len(hits)} candidate duals")
        dual.append(hits[0])
    dims = tuple(quantum_dim(rib, r) for r in mods)
    twists = []
    for r in mods:
        t = act(r, rib.theta)
        d = r.shape[1]
        v = t.element((0, 0))
        if not t == FArray.identity(H.field, d).scale(v):
            raise AxiomFailed("twist acts by a scalar", f"on a module of dimension {d}")
        twists.append(v)
    trivial = [k for k in range(n) if mods[k].shape[1] == 1 and _is_trivial(H, mods[k])]
    if len(trivial) != 1:
        raise AxiomFailed("exactly one trivial module", f"found {len(trivial)}")
    unit = labels[trivial[0]]
    return FusionData(H.field, labels, unit, tuple(dual), dims, tuple(twists), Nmap)


def _is_trivial(H, rho) -> bool:
    from .farray import einsum

    return einsum("iab->i", rho) == H.eps
