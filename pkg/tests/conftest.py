import numpy as np
import pytest

from edgestates.blocks import pure_state

LAMBDAS = (0.4, 2.0, 5.0)
TS = (1.5, 2.0, 10.0)
UNIT_FAMILIES = ("76", "75", "65", "44")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_psd(rng, n, rank=None):
    b = random_complex(rng, n, rank or n)
    return b @ b.conj().T


def random_unit(rng, n):
    v = random_complex(rng, n)
    return v / np.linalg.norm(v)


def random_separable(rng, terms, m=3, n=3):
    """Sum of ``terms`` weighted pure product states; returns (state, [(x, y), ...])."""
    total = None
    factors = []
    for _ in range(terms):
        x, y = random_complex(rng, m), random_complex(rng, n)
        p = pure_state(np.outer(x, y.conj())).scaled(0.1 + rng.random())
        total = p if total is None else total + p
        factors.append((x, y))
    return total, factors


def all_instances():
    """(kind, lambda, t) for every family instance on the acceptance grid."""
    out = [(kind, lam, None) for kind in UNIT_FAMILIES for lam in LAMBDAS]
    out += [("85", lam, t) for lam in LAMBDAS for t in TS]
    return out


# one line per acceptance criterion, filled by test_acceptance.py and echoed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
