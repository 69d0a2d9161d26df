import pytest

from kirbylab.examples import (
    BadCharacteristic,
    HnSpec,
    InvalidParameters,
    NoRoot,
    NotADivisor,
    divisors,
    gauss_theta,
    hn_zd,
    parse_algebra_uri,
    spec_from_uri,
)


def test_uris():
    H, rib = parse_algebra_uri("hn:3")
    assert H.dim == 12
    H, rib = parse_algebra_uri("hn:3:s=5:beta=2")
    assert rib.verify().ok
    H, rib = parse_algebra_uri("cyclic:5:q=2")
    assert H.dim == 5 and rib.verify().ok
    H, rib = parse_algebra_uri("sweedler")
    assert H.dim == 4
    assert spec_from_uri("hn:5").n == 5
    assert spec_from_uri("cyclic:5") is None


@pytest.mark.parametrize("uri", ["hn", "hn:3:t=1", "cyclic:4", "hn:2", "hn:3:s=2", "sweedler:q=2"])
def test_bad_uris(uri):
    with pytest.raises(InvalidParameters):
        parse_algebra_uri(uri)


def test_characteristic_errors():
    with pytest.raises(BadCharacteristic):
        HnSpec.make(3, p=3)
    with pytest.raises(BadCharacteristic):
        HnSpec.make(3, p=9)
    with pytest.raises(NoRoot):
        HnSpec.make(3, p=11)


def test_zd():
    spec = HnSpec.make(3)
    assert str(hn_zd(spec, 1)) == "ax + a^3x + a^5x"
    assert str(hn_zd(spec, 3)) == "a^3x"
    with pytest.raises(NotADivisor):
        hn_zd(spec, 2)
    with pytest.raises(NotADivisor):
        gauss_theta(spec, 2, 1)
    assert divisors(15) == [1, 3, 5, 15]


def test_gauss_values():
    spec = HnSpec.make(3)
    one = spec.field.one()
    assert gauss_theta(spec, 1, 1) == one and gauss_theta(spec, 1, -1) == one
    t3 = gauss_theta(spec, 3, 1)
    assert t3 * t3 == spec.field(-1) / 3
    assert gauss_theta(spec, 3, -1) == -t3


def test_gauss_sign_symmetry():
    from kirbylab.examples import radford_hn
    from kirbylab.kirby import theta_pm

    for s in (1, 3):
        a, b = HnSpec.make(3, s), HnSpec.make(3, 6 - s)
        for d in (1, 3):
            assert gauss_theta(a, d, 1) == gauss_theta(b, d, -1)
            assert theta_pm(radford_hn(a)[1], hn_zd(a, d)) == theta_pm(radford_hn(b)[1], hn_zd(b, d))[::-1]


def test_trivial_cyclic():
    from kirbylab.examples import cyclic_ribbon

    H, rib = cyclic_ribbon(1)
    assert H.dim == 1
    assert rib.verify().ok
    assert rib.Rarr.element((0, 0)) == H.field.one()
