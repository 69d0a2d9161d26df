import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kirbylab.exactfield import cyclotomic
from kirbylab.evaluator import delta_pm as module_delta_pm
from kirbylab.fusion import (
    ExponentialGuard,
    FusionData,
    FusionVector,
    UnknownLabel,
    check_basis_identities,
    closed_subsets,
    delta_pm,
    fusion_from_modules,
    kirby_necessary,
    m_B,
    pointed_data,
    subset_vector,
    trivial_data,
    verify_fusion,
)


def fibonacci():
    K = cyclotomic(5)
    w = K.gen()
    phi = K.one() + w + w ** 4
    N = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1, (1, 1, 1): 1}
    return FusionData(K, ("1", "t"), "1", (0, 1), (K.one(), phi), (K.one(), w ** 2), N)


def test_z6_subgroups():
    d = pointed_data(6)
    assert verify_fusion(d).ok
    assert check_basis_identities(d).ok
    assert closed_subsets(d) == [(0,), (0, 3), (0, 2, 4), (0, 1, 2, 3, 4, 5)]


def test_z6_kirby_necessary_exactly_subgroups():
    d = pointed_data(6)
    subgroups = {frozenset(E) for E in closed_subsets(d)}
    for coeffs in itertools.product([0, 1], repeat=6):
        if not any(coeffs):
            continue
        a = FusionVector(d, tuple(d.field(c) for c in coeffs))
        assert kirby_necessary(a).ok == (frozenset(a.support) in subgroups)


@settings(max_examples=30, deadline=None)
@given(k=st.integers(1, 9), which=st.integers(0, 3))
def test_scalar_multiples_accepted(k, which):
    d = pointed_data(6)
    E = closed_subsets(d)[which]
    a = subset_vector(d, [d.index(l) for l in E]).scale(d.field(k))
    assert kirby_necessary(a).ok


def test_fibonacci():
    d = fibonacci()
    assert verify_fusion(d).ok
    assert check_basis_identities(d).ok
    assert closed_subsets(d) == [("1",), ("1", "t")]
    assert kirby_necessary(subset_vector(d, [0, 1])).ok
    assert not kirby_necessary(FusionVector.from_mapping(d, {"1": 1, "t": 1})).ok
    tau = FusionVector.basis(d, "t")
    assert m_B(tau, tau) == FusionVector.from_mapping(d, {"1": 1, "t": 1})


def test_corrupted_duality_fails():
    d = pointed_data(6)
    bad = FusionData(d.field, d.labels, d.unit, tuple(range(6)), d.dims, d.twists, d.N)
    assert not verify_fusion(bad).ok


def test_round_trip_and_labels():
    d = pointed_data(5, quadratic=True)
    assert FusionData.from_json(d.to_json()) == d
    with pytest.raises(UnknownLabel):
        d.index(7)
    assert closed_subsets(trivial_data()) == [(0,)]


def test_subset_guard():
    with pytest.raises(ExponentialGuard):
        closed_subsets(pointed_data(21))


def test_modules_match_pointed_quadratic(z5):
    H, rib, mods = z5
    fd = fusion_from_modules(rib, mods)
    assert verify_fusion(fd).ok
    assert fd.dual == (0, 4, 3, 2, 1)
    assert delta_pm(fd) == module_delta_pm(rib, mods)
    assert delta_pm(fd) == delta_pm(pointed_data(5, quadratic=True))
