import sys

import numpy as np
import pytest

from symmagic.dicke import DickeState
from symmagic.oracle import expand_full


def dicke_isometry(n_qubits):
    """Columns are the Dicke states written out in the 2^N computational basis."""
    cols = []
    for n in range(n_qubits + 1):
        amps = np.zeros(n_qubits + 1, dtype=complex)
        amps[n] = 1
        cols.append(expand_full(DickeState(n_qubits, amps)).amplitudes)
    return np.array(cols).T


def full_collective(n_qubits, axis):
    """sum_j sigma_j^axis / 2 on the full 2^N space, qubit j = bit j."""
    sig = {
        "x": np.array([[0, 1], [1, 0]], dtype=complex),
        "y": np.array([[0, -1j], [1j, 0]]),
        "z": np.diag([1.0, -1.0]).astype(complex),
    }[axis]
    dim = 2**n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for j in range(n_qubits):
        left = np.eye(2 ** (n_qubits - 1 - j))
        right = np.eye(2**j)
        out += np.kron(np.kron(left, sig), right) / 2
    return out


def partial_trace_spectrum(full_amps, n_qubits, n_a):
    """Eigenvalues of rho_A for the lowest n_a bits, by reshaping the state vector."""
    psi = np.asarray(full_amps).reshape(2 ** (n_qubits - n_a), 2**n_a)
    rho_a = psi.T @ psi.conj()
    return np.sort(np.linalg.eigvalsh(rho_a))[::-1]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
