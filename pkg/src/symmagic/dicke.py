"""Permutation-symmetric qubit states in the Dicke basis.

Basis convention: ``|N, n>`` has ``n`` excitations and
``S_z |N, n> = (N - 2n)/2 |N, n>``, so ``|N, 0>`` is all qubits in ``|0>``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np
from scipy.special import gammaln

NORM_TOL = 1e-12


def log_binom(n, k):
    """Natural log of C(n, k) (vectorised, via log-gamma)."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def log_binom_scalar(n: int, k: int) -> float:
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


@dataclass(frozen=True)
class DickeState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        if amps.shape != (self.n_qubits + 1,):
            raise ValueError(
                f"expected {self.n_qubits + 1} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> DickeState:
        amps = np.asarray(amplitudes, dtype=complex)
        return cls(len(amps) - 1, amps / np.linalg.norm(amps))

    @property
    def dim(self) -> int:
        return self.n_qubits + 1


@dataclass(frozen=True)
class BandMatrix:
    """Hermitian matrix with nonzeros confined to ``|row - col| <= bandwidth``.

    Stored dense; the symmetric subspace is small enough that this is the
    cheapest representation for products and diagonalisation.
    """

    dim: int
    bandwidth: int
    data: np.ndarray

    def __matmul__(self, other):
        if isinstance(other, BandMatrix):
            bw = min(self.bandwidth + other.bandwidth, self.dim - 1)
            return BandMatrix(self.dim, bw, self.data @ other.data)
        return self.data @ other

    def __add__(self, other: BandMatrix) -> BandMatrix:
        return BandMatrix(self.dim, max(self.bandwidth, other.bandwidth), self.data + other.data)

    def __sub__(self, other: BandMatrix) -> BandMatrix:
        return BandMatrix(self.dim, max(self.bandwidth, other.bandwidth), self.data - other.data)

    def scale(self, factor) -> BandMatrix:
        return BandMatrix(self.dim, self.bandwidth, factor * self.data)

    def entry(self, row: int, col: int) -> complex:
        return complex(self.data[row, col])

    def toarray(self) -> np.ndarray:
        return np.array(self.data)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.data, self.data.conj().T, atol=tol, rtol=0))

    def is_real(self) -> bool:
        return not np.any(np.iscomplex(self.data))


def collective_operator(n_qubits: int, axis: str) -> BandMatrix:
    """Collective spin ``S_axis = sum_j sigma_j^axis / 2`` on the symmetric subspace."""
    if n_qubits < 1:
        raise ValueError("collective operators need at least one qubit")
    N = n_qubits
    n = np.arange(N + 1)
    if axis == "z":
        return BandMatrix(N + 1, 0, np.diag((N - 2 * n) / 2).astype(complex))
    # <N, n-1| S_+ |N, n>, raising S_z lowers the excitation count
    k = np.arange(1, N + 1)
    ladder = np.sqrt(k * (N - k + 1)) / 2
    data = np.zeros((N + 1, N + 1), dtype=complex)
    if axis == "x":
        data[k - 1, k] = ladder
        data[k, k - 1] = ladder
    elif axis == "y":
        data[k - 1, k] = -1j * ladder
        data[k, k - 1] = 1j * ladder
    else:
        raise ValueError(f"unknown axis {axis!r}")
    return BandMatrix(N + 1, 1, data)


def named_state(n_qubits: int, kind: str, n: int | None = None) -> DickeState:
    """GHZ, W, Dicke ``|N, n>``, polarized ``|0...0>`` or the product T state.

    ``kind`` also accepts the compact form ``"dicke:3"``.
    """
    N = n_qubits
    if N < 1:
        raise ValueError("need at least one qubit")
    if kind.startswith("dicke:"):
        kind, n = "dicke", int(kind.split(":", 1)[1])
    amps = np.zeros(N + 1, dtype=complex)
    if kind == "ghz":
        amps[0] = amps[N] = 1 / np.sqrt(2)
    elif kind == "w":
        amps[1] = 1
    elif kind == "dicke":
        if n is None or not 0 <= n <= N:
            raise ValueError(f"Dicke excitation number must lie in [0, {N}], got {n}")
        amps[n] = 1
    elif kind in ("polarized_up", "up"):
        amps[0] = 1
    elif kind == "t":
        # (|0> + e^{i pi/4} |1>)^{\otimes N} / 2^{N/2}
        k = np.arange(N + 1)
        amps = np.exp(0.5 * log_binom(N, k) - 0.5 * N * np.log(2) + 1j * np.pi * k / 4)
    else:
        raise ValueError(f"unknown state kind {kind!r}")
    return DickeState(N, amps)


def random_state(n_qubits: int, rng: np.random.Generator) -> DickeState:
    """Complex-Gaussian amplitudes, normalized."""
    z = rng.standard_normal(n_qubits + 1) + 1j * rng.standard_normal(n_qubits + 1)
    return DickeState.from_unnormalized(z)


@dataclass(frozen=True)
class BipartitionSpectrum:
    n_a: int
    rdm: np.ndarray
    eigenvalues: np.ndarray


def bipartition_amplitudes(state: DickeState, n_a: int) -> np.ndarray:
    """Coefficient matrix ``phi[k, j]`` of ``|N_A, k> |N_B, j>``.

    Uses ``|N, n> = sum_k sqrt(p_{n,k}) |N_A, k> |N - N_A, n - k>`` with
    ``p_{n,k} = C(N_A, k) C(N - N_A, n - k) / C(N, n)``.
    """
    N = state.n_qubits
    n_b = N - n_a
    k = np.arange(n_a + 1)[:, None]
    j = np.arange(n_b + 1)[None, :]
    n = k + j
    log_p = log_binom(n_a, k) + log_binom(n_b, j) - log_binom(N, n)
    return state.amplitudes[n] * np.exp(0.5 * log_p)


def reduced_density_matrix(state: DickeState, n_a: int) -> BipartitionSpectrum:
    N = state.n_qubits
    if not 1 <= n_a <= N - 1:
        raise ValueError(f"subsystem size must lie in [1, {N - 1}], got {n_a}")
    phi = bipartition_amplitudes(state, n_a)
    rho = phi @ phi.conj().T
    evals = np.linalg.eigvalsh(rho)[::-1]
    return BipartitionSpectrum(n_a, rho, evals)


def entanglement_entropy(spec: BipartitionSpectrum) -> float:
    lam = np.clip(spec.eigenvalues, 0.0, 1.0)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def flatness_direct(spec: BipartitionSpectrum) -> float:
    """``Tr rho_A^3 - (Tr rho_A^2)^2``."""
    lam = np.clip(spec.eigenvalues, 0.0, 1.0)
    return float(np.sum(lam**3) - np.sum(lam**2) ** 2)


def expectation_dense(op: np.ndarray, state: DickeState) -> complex:
    psi = state.amplitudes
    return complex(np.vdot(psi, op @ psi))
