"""Acceptance criteria AC-1 .. AC-8, one verdict line per criterion.

The grids live in midconv.checks so that `midconv check` runs the same code.
"""

import pytest

from midconv import checks

from conftest import AC_LINES

_elapsed = []


@pytest.fixture(scope="module")
def instances():
    return checks.ac3_instances()


def _report(res):
    line = res.line()
    AC_LINES.append(line)
    print(line)
    _elapsed.append(res.seconds)
    assert res.passed, "\n".join([line] + [str(d) for d in res.details[:10]])


def test_ac1_gauss_and_jacobi_identities():
    _report(checks.ac1())


def test_ac2_epsilon_of_blocks():
    _report(checks.ac2())


def test_ac3_h1c_determinant(instances):
    _report(checks.ac3(instances))


def test_ac4_convolution_local_data(instances):
    _report(checks.ac4(instances))


def test_ac5_convention_discrimination():
    _report(checks.ac5())


def test_ac6_quadratic_determinant():
    _report(checks.ac6())


def test_ac7_involution():
    _report(checks.ac7())


def test_ac8_parallel_speedup():
    # measured on this machine: one core, so no speedup is available
    _report(checks.ac8(suite_seconds=sum(_elapsed), workers=4))
