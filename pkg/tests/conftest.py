import pytest

from kirbylab.examples import HnSpec, cyclic_characters, cyclic_ribbon, radford_hn


@pytest.fixture(scope="session", params=[1, 3, 5], ids=["H1", "H3", "H5"])
def hn_all(request):
    spec = HnSpec.make(request.param)
    H, rib = radford_hn(spec)
    return spec, H, rib


@pytest.fixture(scope="session", params=[1, 3], ids=["H1", "H3"])
def hn_small(request):
    spec = HnSpec.make(request.param)
    H, rib = radford_hn(spec)
    return spec, H, rib


@pytest.fixture(scope="session")
def h3():
    spec = HnSpec.make(3)
    H, rib = radford_hn(spec)
    return spec, H, rib


@pytest.fixture(scope="session")
def z5():
    H, rib = cyclic_ribbon(5)
    return H, rib, cyclic_characters(5)


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        name, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {name}: {'PASS' if ok else 'FAIL'}")
