import numpy as np
from hypothesis import strategies as st

from entkit.tensor_core import DensityMatrix, PartyStructure, hermitian_eig


def random_density(rng, dims, rank=None):
    """Random density matrix (Ginibre-style) on the given party dims."""
    structure = PartyStructure(dims)
    d = structure.total_dim
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(structure, m / np.trace(m).real)


def random_unitary(rng, d):
    """Unitary from the eigenvectors of a random Hermitian matrix."""
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    _, v = hermitian_eig(0.5 * (h + h.conj().T))
    return v


seeds = st.integers(min_value=0, max_value=2**32 - 1)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
