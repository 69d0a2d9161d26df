import pytest

from kirbylab.examples import HnSpec, hn_known_data, radford_hn
from kirbylab.ribboncore import (
    NotARepresentation,
    RibbonStructure,
    check_representation,
    check_ribbon_identities,
    dual_rep,
    quantum_dim,
    regular_rep,
    special_grouplike,
    tensor_rep,
    trivial_rep,
    verify_quasitriangular,
    verify_ribbon,
)


def test_hn_ribbon(hn_all):
    spec, H, rib = hn_all
    kd = hn_known_data(spec)
    assert verify_quasitriangular(H, rib.Rarr).ok
    assert verify_ribbon(H, rib.Rarr, rib.theta).ok
    assert special_grouplike(rib) == kd["G"]
    assert rib.h_nu == kd["h_nu"]
    assert check_ribbon_identities(rib).ok


def test_hn_other_parameters():
    for s, beta in [(3, 1), (5, 2)]:
        H, rib = radford_hn(HnSpec.make(3, s, beta))
        assert rib.verify().ok


def test_hn_prime_field():
    H, rib = radford_hn(HnSpec.make(3, 1, 1, 7))
    assert rib.verify().ok
    assert H.field.characteristic == 7


def test_cyclic_ribbon_and_dims(z5):
    H, rib, mods = z5
    assert rib.verify().ok
    for rho in mods:
        check_representation(H, rho)
        assert quantum_dim(rib, rho) == H.field.one()
    assert rib.G == H.one()


def test_rep_constructions(z5):
    H, rib, mods = z5
    check_representation(H, regular_rep(H))
    check_representation(H, trivial_rep(H))
    check_representation(H, dual_rep(H, mods[1]))
    check_representation(H, tensor_rep(H, mods[1], mods[2]))
    bad = mods[1].scale(H.field(2))
    with pytest.raises(NotARepresentation):
        check_representation(H, bad)


def test_wrong_twist_rejected(h3):
    _, H, rib = h3
    wrong = RibbonStructure(H, rib.Rarr, rib.theta * H.basis_element(H.basis_index("a^2")))
    assert not wrong.verify().ok


def test_scaled_r_rejected(h3):
    _, H, rib = h3
    assert not verify_quasitriangular(H, rib.Rarr.scale(H.field(2))).ok
