from fractions import Fraction

import pytest

from sphere_rigidity.lattice import GridSpec, SpaceModel, SphereFn


def fn(*values, space=None):
    """Sphere function on the standard space ``p1..pn`` from ints/strings/Fractions."""
    space = space or SpaceModel.standard(len(values))
    return SphereFn(space, tuple(Fraction(v) for v in values))


@pytest.fixture
def two():
    return SpaceModel.standard(2)


@pytest.fixture
def three():
    return SpaceModel.standard(3)


@pytest.fixture
def m2():
    return GridSpec(2)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
