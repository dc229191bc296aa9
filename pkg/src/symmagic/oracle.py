"""Brute-force reference: full 2^N state vector, all 4^N Pauli strings.

Strings are coded by ``(x_mask, z_mask)``; on qubit ``j`` the pair of bits
selects I (0,0), X (1,0), Z (0,1) or Y (1,1). With ``Y = i X Z``::

    <P> = i^popcount(x & z) sum_b conj(psi[b ^ x]) psi[b] (-1)^popcount(b & z)

The sum over ``b`` for every ``z`` at once is a Walsh-Hadamard transform.
Nothing here touches the symmetric reduction.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, log

import numpy as np
from scipy.linalg import hadamard

from .dicke import DickeState, random_state
from .measures import LN2, NULLITY_TOL, MagicReport, report_from_values

MAX_EXPAND = 12
MAX_BRUTE = 10
MAX_VERIFY = 8


@dataclass(frozen=True)
class FullState:
    n_qubits: int
    amplitudes: np.ndarray


def _popcount(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    return np.array([bin(int(v)).count("1") for v in a.ravel()], dtype=np.int64).reshape(a.shape)


def expand_full(state: DickeState) -> FullState:
    """Amplitude of bitstring ``b`` is ``c[popcount(b)] / sqrt(C(N, popcount(b)))``."""
    N = state.n_qubits
    if N > MAX_EXPAND:
        raise ValueError(f"full expansion limited to N <= {MAX_EXPAND}, got N={N}")
    weight = _popcount(np.arange(2**N))
    norms = np.sqrt([comb(N, w) for w in range(N + 1)])
    return FullState(N, state.amplitudes[weight] / norms[weight])


def pauli_string_matrix(x_mask: int, z_mask: int, n_qubits: int) -> np.ndarray:
    """Dense Kronecker product; qubit j is bit j of the basis index."""
    I = np.eye(2)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]])
    Z = np.diag([1.0, -1.0])
    out = np.ones((1, 1), dtype=complex)
    # highest bit is the leftmost tensor factor
    for j in reversed(range(n_qubits)):
        op = {(0, 0): I, (1, 0): X, (0, 1): Z, (1, 1): Y}[((x_mask >> j) & 1, (z_mask >> j) & 1)]
        out = np.kron(out, op)
    return out


def all_expectations(full: FullState) -> np.ndarray:
    """``E[x_mask, z_mask] = <psi| P |psi>`` for every Pauli string (real)."""
    N = full.n_qubits
    if N > MAX_BRUTE:
        raise ValueError(f"full Pauli enumeration limited to N <= {MAX_BRUTE}, got N={N}")
    psi = full.amplitudes
    b = np.arange(2**N)
    V = np.conj(psi[b[None, :] ^ b[:, None]]) * psi[None, :]
    E = V @ hadamard(2**N)
    phase = np.array([1, 1j, -1, -1j])[_popcount(b[:, None] & b[None, :]) % 4]
    E = phase * E
    if np.max(np.abs(E.imag)) > 1e-10:
        raise ArithmeticError("Pauli expectations came out complex")
    return E.real


def string_counts(n_qubits: int) -> np.ndarray:
    """``(n_x, n_y, n_z, n_0)`` of every code, shape ``(2^N, 2^N, 4)``."""
    b = np.arange(2**n_qubits)
    x, z = b[:, None], b[None, :]
    ny = _popcount(x & z)
    nx = _popcount(x) - ny
    nz = _popcount(z) - ny
    return np.stack([nx, ny, nz, n_qubits - nx - ny - nz], axis=-1)


def brute_magic_report(
    full: FullState, tol: float = NULLITY_TOL, n_a: int | None = None
) -> tuple[MagicReport, np.ndarray]:
    """Magic measures straight from the 4^N expectations, plus the sorted ``|<P>|``."""
    N = full.n_qubits
    r = np.abs(all_expectations(full)).ravel()
    m2 = N * LN2 - log(np.sum(r**4))
    count = int(np.count_nonzero(r >= 1 - tol))
    is_pow2 = count > 0 and count & (count - 1) == 0
    nullity = N - int(round(np.log2(count)))
    return report_from_values(N, m2, nullity, is_pow2, n_a), np.sort(r)[::-1]


@dataclass(frozen=True)
class TrialResult:
    trial: int
    n_qubits: int
    m2_sym: float
    m2_brute: float
    nullity_sym: int
    nullity_brute: int
    max_spectrum_dev: float
    groups_ok: bool

    def passed(self, tol: float) -> bool:
        return (
            abs(self.m2_sym - self.m2_brute) < tol
            and self.nullity_sym == self.nullity_brute
            and self.max_spectrum_dev < tol
            and self.groups_ok
        )


def compare_state(state: DickeState, tol: float, trial: int = 0) -> TrialResult:
    """Check the symmetric path against the brute path on one state.

    Brute values are grouped by gate counts; each group must be constant, of
    size g(q), and equal (with sign) to the representative's expectation.
    """
    from .measures import magic_report, spectrum_summary
    from .pauli import exact_degeneracies, quadruple_index

    N = state.n_qubits
    summary = spectrum_summary(state)
    sym = magic_report(summary)
    full = expand_full(state)
    E = all_expectations(full).ravel()
    brute, _ = brute_magic_report(full)

    counts = string_counts(N).reshape(-1, 4)
    idx = quadruple_index(N)[counts[:, 0], counts[:, 1], counts[:, 2]]
    dev = np.abs(E - summary.expectations[idx])
    sizes = np.bincount(idx, minlength=len(summary.expectations))
    groups_ok = sizes.tolist() == exact_degeneracies(summary.quadruples)
    return TrialResult(
        trial=trial,
        n_qubits=N,
        m2_sym=sym.m2,
        m2_brute=brute.m2,
        nullity_sym=sym.nullity,
        nullity_brute=brute.nullity,
        max_spectrum_dev=float(dev.max()),
        groups_ok=groups_ok,
    )


def verify_equivalence(n_qubits: int, trials: int, seed: int, tol: float = 1e-10) -> list[TrialResult]:
    """Seeded random symmetric states through both paths; failures are reported, not raised."""
    if n_qubits > MAX_VERIFY:
        raise ValueError(f"oracle verification limited to N <= {MAX_VERIFY}, got N={n_qubits}")
    rng = np.random.default_rng(seed)
    return [compare_state(random_state(n_qubits, rng), tol, t) for t in range(trials)]
