import json

import numpy as np
import pytest

from fockfit.dataset import data_dir, load_dataset
from fockfit.hilbert import LinearOperator


@pytest.fixture(scope="session")
def paper_dataset():
    return load_dataset(data_dir() / "paper.csv")


@pytest.fixture(scope="session")
def published():
    return json.loads((data_dir() / "published_params.json").read_text())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_projector(rng, dim, rank=None):
    """Projector onto a random complex subspace of C^dim."""
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    raw = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    q, _ = np.linalg.qr(raw)
    return LinearOperator(q @ q.conj().T, projector=True)


def random_unit(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def record_acceptance(line):
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
