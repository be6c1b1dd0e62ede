import pytest

from cayley_wreath.base import build_finite_group_structure, build_integer_structure
from cayley_wreath.groups import (cyclic_group, infinite_dihedral_spec, integers_over_even_spec,
                                  integers_spec, z_times_cyclic_spec)
from cayley_wreath.wreath import build_wreath_structure


@pytest.fixture(scope="session")
def z2():
    return build_finite_group_structure(cyclic_group(2))


@pytest.fixture(scope="session")
def z3():
    return build_finite_group_structure(cyclic_group(3))


@pytest.fixture(scope="session")
def zbase():
    return build_integer_structure()


@pytest.fixture(scope="session")
def lamplighter(z2):
    return build_wreath_structure(z2, integers_spec())


@pytest.fixture(scope="session")
def z2_dihedral(z2):
    return build_wreath_structure(z2, infinite_dihedral_spec())


@pytest.fixture(scope="session")
def z2_over_even(z2):
    return build_wreath_structure(z2, integers_over_even_spec())


@pytest.fixture(scope="session")
def z3_zz5(z3):
    return build_wreath_structure(z3, z_times_cyclic_spec(5))


@pytest.fixture(scope="session")
def z_wr_z(zbase):
    return build_wreath_structure(zbase, integers_spec())


@pytest.fixture(scope="session")
def z_wr_dihedral(zbase):
    return build_wreath_structure(zbase, infinite_dihedral_spec())


@pytest.fixture(params=["lamplighter", "z2_dihedral", "z2_over_even", "z2_far", "z_wr_dihedral"])
def small_structure(request):
    return request.getfixturevalue(request.param)


@pytest.fixture(scope="session")
def z2_far(z2):
    # x1 = 3 over 2Z: right multiplication by x1^{±1} moves three blocks
    return build_wreath_structure(z2, integers_over_even_spec(3))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines):
            terminalreporter.write_line(line)
