"""LMG and ferromagnetic p-spin Hamiltonians on the symmetric subspace."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from .dicke import BandMatrix, DickeState, collective_operator

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ModelSpec:
    family: str
    gamma: float
    n_qubits: int
    p: int = 2
    j_coupling: float = 1.0

    def __post_init__(self):
        if self.family not in ("lmg", "pspin"):
            raise ValueError(f"unknown model family {self.family!r}")
        if self.family == "lmg" and self.p != 2:
            object.__setattr__(self, "p", 2)
        if self.p < 2:
            raise ValueError(f"p-spin interaction order must be >= 2, got {self.p}")
        if self.gamma < 0:
            raise ValueError(f"transverse field must be >= 0, got {self.gamma}")
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")


def build_hamiltonian(spec: ModelSpec) -> BandMatrix:
    """``H/J = -gamma S_z - (1/2)(2/N)^(p-1) S_x^p``; p = 2 is LMG, ``-S_x^2/N``."""
    N = spec.n_qubits
    sz = collective_operator(N, "z")
    sx = collective_operator(N, "x")
    sxp = sx
    for _ in range(spec.p - 1):
        sxp = sxp @ sx
    interaction = sxp.scale(0.5 * (2.0 / N) ** (spec.p - 1))
    H = sz.scale(-spec.gamma) - interaction
    return H.scale(spec.j_coupling)


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    state: DickeState
    parity_sector: str | None
    gap_to_other_sector: float


def conserves_parity(H: BandMatrix, tol: float = 0.0) -> bool:
    """True when H has no entries coupling even-n to odd-n levels."""
    n = np.arange(H.dim)
    odd_offset = (n[:, None] - n[None, :]) % 2 == 1
    return not np.any(np.abs(H.data[odd_offset]) > tol)


def _lowest(block: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = eigh(block, subset_by_index=[0, 0])
    return float(w[0]), v[:, 0]


def ground_state(H: BandMatrix, n_qubits: int) -> GroundStateResult:
    """Lowest eigenpair, resolved by excitation-number parity when H conserves it.

    Below the critical field the even/odd doublet is split by less than
    machine precision, so a single dense solve returns an arbitrary mixture.
    Each sector is solved separately instead; near-ties go to the even one.
    """
    if H.dim != n_qubits + 1:
        raise ValueError(f"Hamiltonian has dim {H.dim}, expected {n_qubits + 1}")
    if not H.is_hermitian():
        raise ValueError("Hamiltonian is not Hermitian")
    data = H.data.real if H.is_real() else H.data
    if not conserves_parity(H):
        e, v = _lowest(data)
        return GroundStateResult(e, _normalized(n_qubits, v), None, float("nan"))

    levels = np.arange(H.dim)
    sectors = {}
    for name, sel in (("even", levels[::2]), ("odd", levels[1::2])):
        if len(sel) == 0:
            continue
        e, v = _lowest(data[np.ix_(sel, sel)])
        full = np.zeros(H.dim, dtype=complex)
        full[sel] = v
        sectors[name] = (e, full)
    if "odd" not in sectors:
        e, v = sectors["even"]
        return GroundStateResult(e, _normalized(n_qubits, v), "even", float("inf"))
    (e_even, v_even), (e_odd, v_odd) = sectors["even"], sectors["odd"]
    gap = abs(e_even - e_odd)
    if e_even <= e_odd or gap < TIE_RTOL * abs(e_even):
        return GroundStateResult(e_even, _normalized(n_qubits, v_even), "even", gap)
    return GroundStateResult(e_odd, _normalized(n_qubits, v_odd), "odd", gap)


def _normalized(n_qubits: int, v: np.ndarray) -> DickeState:
    v = np.asarray(v, dtype=complex)
    # fix the arbitrary eigenvector sign: largest component positive
    v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))]))
    return DickeState(n_qubits, v / np.linalg.norm(v))


def order_parameter(state: DickeState) -> float:
    """RMS magnetisation ``sqrt(<(2 S_x / N)^2>)``; ``<S_x>`` vanishes in parity eigenstates."""
    N = state.n_qubits
    sx_psi = collective_operator(N, "x") @ state.amplitudes
    return float(2.0 / N * np.linalg.norm(sx_psi))


def mean_field_energy(theta, gamma: float, p: int):
    """Energy per spin of the product state tilted by ``theta`` from +z toward +x."""
    theta = np.asarray(theta, dtype=float)
    return -0.5 * gamma * np.cos(theta) - 0.25 * np.sin(theta) ** p


@dataclass(frozen=True)
class MeanFieldResult:
    p: int
    gamma_c: float
    theta: np.ndarray
    energy: np.ndarray

    def energy_curve(self, gamma: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        g = self.gamma_c if gamma is None else gamma
        return self.theta, mean_field_energy(self.theta, g, self.p)


def _tilted_minimum_gap(gamma: float, p: int, grid: np.ndarray) -> float:
    """``e(theta*) - e(0)`` for the lowest local minimum at ``theta* > 0``.

    Returns +inf when ``e`` has no interior minimum on (0, pi/2].
    """
    e = mean_field_energy(grid, gamma, p)
    interior = np.flatnonzero((e[1:-1] < e[:-2]) & (e[1:-1] <= e[2:])) + 1
    candidates = list(interior)
    if e[-1] < e[-2]:
        candidates.append(len(grid) - 1)
    if not candidates:
        return float("inf")
    best = float("inf")
    for i in candidates:
        lo, hi = grid[max(i - 1, 1)], grid[min(i + 1, len(grid) - 1)]
        res = minimize_scalar(
            lambda t: mean_field_energy(t, gamma, p),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-14},
        )
        best = min(best, float(res.fun))
    return best - float(mean_field_energy(0.0, gamma, p))


def mean_field_critical_field(p: int, grid_points: int = 20001) -> MeanFieldResult:
    """Mean-field transition field.

    p = 2: ``e''(0)`` changes sign at gamma = 1. p >= 3: first-order point
    where the tilted minimum becomes degenerate with theta = 0, by bisection.
    """
    if p < 2:
        raise ValueError(f"interaction order must be >= 2, got {p}")
    theta = np.linspace(0.0, np.pi / 2, grid_points)
    if p == 2:
        gamma_c = 1.0
    else:
        lo, hi = 0.0, 1.0
        while _tilted_minimum_gap(hi, p, theta) < 0:
            hi *= 2
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if _tilted_minimum_gap(mid, p, theta) < 0:
                lo = mid
            else:
                hi = mid
        gamma_c = 0.5 * (lo + hi)
    return MeanFieldResult(p, float(gamma_c), theta, mean_field_energy(theta, gamma_c, p))
