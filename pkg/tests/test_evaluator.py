import random

import pytest
from hypothesis import given, settings, strategies as st

from kirbylab.evaluator import (
    NotNormalizedKirby,
    WidthCapExceeded,
    bead_tensor,
    colored_eval,
    delta_pm,
    oracle_eval,
    rt_invariant,
    tau_link,
    tau_link_from_beads,
    tau_manifold,
    theta_pm,
)
from kirbylab.examples import HnSpec, hn_zd, radford_hn
from kirbylab.kirby import NotInL, compute_subspaces
from kirbylab.links import chain, disjoint_union, handle_slide, hopf_link, parse_link_spec, stabilize, trefoil, unknot
from kirbylab.ribboncore import quantum_dim

# dense regular-representation evaluation, normalized by hand
FROZEN = {
    ("hn:3", 1, "unknot:-2"): ["1", "0"],
    ("hn:3", 1, "trefoil:1"): ["1", "0"],
    ("hn:3", 3, "unknot:-2"): ["-1", "0"],
    ("hn:3", 3, "unknot:0"): ["-1", "2"],
    ("hn:3", 3, "unknot:2"): ["-1", "0"],
    ("hn:3", 3, "hopf:1,-1"): ["-1", "0"],
    ("hn:3", 3, "hopf:0,0"): ["1", "0"],
    ("hn:3", 3, "trefoil:1"): ["-1", "2"],
    ("hn:3", 3, "trefoil:-1"): ["1", "-2"],
    ("cyclic:5", None, "unknot:-2"): ["-1", "0", "0", "0"],
    ("cyclic:5", None, "unknot:0"): ["-1", "0", "-2", "-2"],
    ("cyclic:5", None, "hopf:1,-1"): ["-1", "0", "0", "0"],
    ("cyclic:5", None, "trefoil:1"): ["-1", "0", "0", "0"],
}


@pytest.mark.parametrize("key", sorted(FROZEN, key=str), ids=lambda k: f"{k[0]}-{k[1]}-{k[2]}")
def test_frozen_manifold_values(key, h3, z5):
    uri, d, link = key
    if uri == "hn:3":
        spec, H, rib = h3
        z = hn_zd(spec, d)
    else:
        H, rib, _ = z5
        z = H.one()
    assert tau_manifold(parse_link_spec(link), rib, z) == H.field.parse(FROZEN[key])


LINKS = [unknot(0), unknot(2), hopf_link(1, -1), trefoil(), chain(3)]


def test_three_routes_agree_random_z(hn_small, z5):
    rnd = random.Random(7)
    for rib in (hn_small[2], z5[1]):
        H = rib.algebra
        for L in LINKS:
            z = H.element([rnd.randint(-3, 3) for _ in range(H.dim)])
            a = tau_link(L, rib, z, check=False)
            assert a == oracle_eval(L, rib, z)
            assert a == tau_link_from_beads(bead_tensor(L, rib), rib, z)


def test_tau_link_requires_L(h3):
    _, H, rib = h3
    with pytest.raises(NotInL):
        tau_link(unknot(0), rib, H.one())


def test_not_normalized(h3):
    _, H, rib = h3
    with pytest.raises(NotNormalizedKirby):
        tau_manifold(unknot(1), rib, H.one())


def test_width_cap(monkeypatch, h3):
    spec, H, rib = h3
    monkeypatch.setenv("KIRBYLAB_WIDTH_CAP", "2")
    with pytest.raises(WidthCapExceeded):
        oracle_eval(hopf_link(), rib, hn_zd(spec, 1))


def test_known_manifolds(hn_small):
    spec, H, rib = hn_small
    for z in [hn_zd(spec, 1), hn_zd(spec, spec.n), H.left_integral.S()]:
        assert tau_manifold(unknot(1), rib, z) == H.field.one()
        assert tau_manifold(unknot(-1), rib, z) == H.field.one()
        tp, _ = theta_pm(rib, z)
        lam = H.right_integral_dual
        assert tau_manifold(unknot(0), rib, z) == lam(z) / tp


@settings(max_examples=12, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_orientation_and_concentration_independence(seed):
    rnd = random.Random(seed)
    spec = HnSpec.make(3)
    H, rib = radford_hn(spec)
    z = rnd.choice([hn_zd(spec, 1), hn_zd(spec, 3), H.left_integral.S()])
    L = rnd.choice([hopf_link(1, -1), trefoil(), chain(3), unknot(2)])
    base = tau_link(L, rib, z)
    rev = L.with_orientation([rnd.random() < 0.5 for _ in range(L.n_components)])
    assert tau_link(rev, rib, z) == base
    conc = [rnd.randrange(len(s)) for s in L.traversals]
    assert tau_link(L, rib, z, concentration=conc) == base


def test_kirby_moves(hn_small):
    spec, H, rib = hn_small
    z = hn_zd(spec, spec.n)
    for L in [hopf_link(1, -1), chain(3), disjoint_union(unknot(2), trefoil())]:
        base = tau_manifold(L, rib, z)
        assert tau_manifold(stabilize(L, 1), rib, z) == base
        assert tau_manifold(stabilize(L, -1), rib, z) == base
        assert tau_manifold(handle_slide(L, 0, 1), rib, z) == base


def test_multiplicative(h3):
    spec, H, rib = h3
    z = hn_zd(spec, 3)
    A, B = unknot(2), trefoil(-1)
    assert tau_manifold(disjoint_union(A, B), rib, z) == tau_manifold(A, rib, z) * tau_manifold(B, rib, z)


def test_robust_under_scaling_and_negligibles(h3):
    spec, H, rib = h3
    z = hn_zd(spec, 3)
    N = compute_subspaces(rib).N_basis
    for L in [unknot(0), hopf_link(1, -1), trefoil()]:
        assert tau_manifold(L, rib, z * 2 + N[1]) == tau_manifold(L, rib, z)


def test_rt_coincidence(z5):
    H, rib, mods = z5
    dp, dm = delta_pm(rib, mods)
    w = H.field.gen()
    assert dp == -1 - 2 * w ** 2 - 2 * w ** 3
    for p in range(-2, 4):
        assert rt_invariant(rib, mods, unknot(p)) == tau_manifold(unknot(p), rib, H.one())
    L = hopf_link(1, 2)
    assert rt_invariant(rib, mods, L) == tau_manifold(L, rib, H.one())


def test_colored_unknot_is_quantum_dimension(z5):
    H, rib, mods = z5
    for rho in mods:
        assert colored_eval(unknot(0), rib, [rho]) == quantum_dim(rib, rho)
    with pytest.raises(ValueError):
        colored_eval(hopf_link(), rib, [mods[0]])
