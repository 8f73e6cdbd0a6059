import random
from fractions import Fraction

import pytest

from resolvent_roots.algebra import poly_gcd
from resolvent_roots.resolvent import root_polynomial


def random_instances(count, seed, degrees=(2, 3, 4, 5, 6), denom=20):
    """Random p(x, s) with coefficients in [-1, 1], a_1 != 0 and p(x, 0) squarefree."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice(degrees)
        cs = [Fraction(rng.randint(-denom, denom), denom) for _ in range(n)]
        if cs[0] == 0 or cs[-1] == 0:
            continue
        p = root_polynomial(cs)
        base = p.at_s(0)
        if poly_gcd(base, base.derivative()).degree > 0:
            continue
        out.append((cs, p))
    return out


@pytest.fixture(scope="session")
def quadratic():
    return root_polynomial([1, 1])


@pytest.fixture(scope="session")
def cubic():
    return root_polynomial([1, 0, 1])


_verdicts = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.failed:
        _verdicts[props["criterion"]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_verdicts, key=lambda k: int(k.split()[0])):
        terminalreporter.write_line(f"{_verdicts[name]}  criterion {name}")
