import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toricflip import Fan, supplied_weights  # noqa: E402
from toricflip.catalog import PRISM_Q, PRISM_V, one_based, prism_fan  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"

# The eight simplicial subdivisions of the prism fan, 1-based, as printed
# in the worked example (order as listed there).
SIGMAS_1 = {
    1: [(1, 2, 4), (1, 2, 6), (1, 3, 4), (3, 4, 5), (2, 3, 5), (2, 3, 6), (2, 4, 5), (1, 3, 6)],
    2: [(1, 2, 4), (1, 2, 6), (1, 4, 5), (1, 3, 5), (2, 5, 6), (3, 5, 6), (2, 4, 5), (1, 3, 6)],
    3: [(1, 4, 6), (2, 4, 6), (1, 4, 5), (1, 3, 5), (2, 5, 6), (3, 5, 6), (2, 4, 5), (1, 3, 6)],
    4: [(1, 2, 4), (1, 2, 6), (1, 4, 5), (1, 3, 5), (2, 3, 5), (2, 3, 6), (2, 4, 5), (1, 3, 6)],
    5: [(1, 4, 6), (2, 4, 6), (1, 3, 4), (3, 4, 5), (2, 5, 6), (3, 5, 6), (2, 4, 5), (1, 3, 6)],
    6: [(1, 4, 6), (2, 4, 6), (1, 3, 4), (3, 4, 5), (2, 3, 5), (2, 3, 6), (2, 4, 5), (1, 3, 6)],
    7: [(1, 2, 4), (1, 2, 6), (1, 3, 4), (3, 4, 5), (2, 5, 6), (3, 5, 6), (2, 4, 5), (1, 3, 6)],
    8: [(1, 4, 6), (2, 4, 6), (1, 4, 5), (1, 3, 5), (2, 3, 5), (2, 3, 6), (2, 4, 5), (1, 3, 6)],
}

# Bunches of Q-column cones for the same fans, 1-based.
BUNCHES_1 = {
    1: [(3, 5, 6), (3, 4, 5), (2, 5, 6), (1, 2, 6), (1, 4, 6), (1, 4, 5), (1, 3, 6), (2, 4, 5)],
    2: [(3, 5, 6), (3, 4, 5), (2, 3, 6), (2, 4, 6), (1, 3, 4), (1, 2, 4), (1, 3, 6), (2, 4, 5)],
    3: [(2, 3, 5), (1, 3, 5), (2, 3, 6), (2, 4, 6), (1, 3, 4), (1, 2, 4), (1, 3, 6), (2, 4, 5)],
    4: [(3, 5, 6), (3, 4, 5), (2, 3, 6), (2, 4, 6), (1, 4, 6), (1, 4, 5), (1, 3, 6), (2, 4, 5)],
    5: [(2, 3, 5), (1, 3, 5), (2, 5, 6), (1, 2, 6), (1, 3, 4), (1, 2, 4), (1, 3, 6), (2, 4, 5)],
    6: [(2, 3, 5), (1, 3, 5), (2, 5, 6), (1, 2, 6), (1, 4, 6), (1, 4, 5), (1, 3, 6), (2, 4, 5)],
    7: [(3, 5, 6), (3, 4, 5), (2, 5, 6), (1, 2, 6), (1, 3, 4), (1, 2, 4), (1, 3, 6), (2, 4, 5)],
    8: [(2, 3, 5), (1, 3, 5), (2, 3, 6), (2, 4, 6), (1, 4, 6), (1, 4, 5), (1, 3, 6), (2, 4, 5)],
}

NEF_1 = [(1, 0, 1), (1, 1, 2), (1, 1, 1)]


def sigma(i: int) -> Fan:
    return Fan.from_matrix(PRISM_V, one_based(SIGMAS_1[i]))


@pytest.fixture(scope="session")
def prism():
    return prism_fan()


@pytest.fixture(scope="session")
def printed_q():
    return supplied_weights(PRISM_V, PRISM_Q)


@pytest.fixture(scope="session")
def sigmas():
    return {i: sigma(i) for i in SIGMAS_1}


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    results = getattr(test_acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, desc = results[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {desc}")
