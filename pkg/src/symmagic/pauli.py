"""Symmetric representatives of the N-qubit Pauli group in the Dicke basis.

On a permutation-invariant state a Pauli string only matters through its gate
counts ``(n_x, n_y, n_z, n_0)``. Each count quadruple gets one representative
operator on the (N+1)-dim symmetric subspace plus a multinomial degeneracy.

Two routes produce the expectation values:

* :func:`representative_matrix` builds the sparse matrix of one
  representative from the explicit triple sum over block excitations.
* :func:`symmetric_expectations` evaluates all representatives at once. The
  X/Y and Z/I sums factorise into Krawtchouk coefficients, which turns the
  whole spectrum into one small matrix product per ``n_x + n_y``. Cost is
  O(N^4) in total, which is what makes N in the hundreds practical.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple

import numpy as np

from .dicke import DickeState, log_binom

DROP_TOL = 1e-300

# i**k for k mod 4
_I_POWERS = np.array([1, 1j, -1, -1j])


class Quadruple(NamedTuple):
    n_x: int
    n_y: int
    n_z: int
    n_0: int

    @property
    def n_qubits(self) -> int:
        return self.n_x + self.n_y + self.n_z + self.n_0


def n_representatives(n_qubits: int) -> int:
    return comb(n_qubits + 3, 3)


def enumerate_quadruples(n_qubits: int) -> list[Quadruple]:
    """All gate-count quadruples, lexicographic in ``(n_x, n_y, n_z)``."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    N = n_qubits
    return [
        Quadruple(nx, ny, nz, N - nx - ny - nz)
        for nx in range(N + 1)
        for ny in range(N + 1 - nx)
        for nz in range(N + 1 - nx - ny)
    ]


@lru_cache(maxsize=8)
def quadruple_array(n_qubits: int) -> np.ndarray:
    """Same order as :func:`enumerate_quadruples`, as a read-only ``(D, 4)`` array."""
    N = n_qubits
    if N < 1:
        raise ValueError("need at least one qubit")
    grid = np.indices((N + 1,) * 3).reshape(3, -1).T
    grid = grid[grid.sum(axis=1) <= N]
    out = np.column_stack([grid, N - grid.sum(axis=1)]).astype(np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def quadruple_index(n_qubits: int) -> np.ndarray:
    """Lookup ``idx[n_x, n_y, n_z]`` into the canonical order (-1 if invalid)."""
    N = n_qubits
    q = quadruple_array(N)
    idx = np.full((N + 1, N + 1, N + 1), -1, dtype=np.int64)
    idx[q[:, 0], q[:, 1], q[:, 2]] = np.arange(len(q))
    idx.setflags(write=False)
    return idx


def degeneracy(q: Quadruple) -> tuple[float, int]:
    """Multinomial ``N! / (n_x! n_y! n_z! n_0!)`` as (log value, exact int)."""
    N = q.n_qubits
    exact = factorial(N) // (
        factorial(q.n_x) * factorial(q.n_y) * factorial(q.n_z) * factorial(q.n_0)
    )
    return float(log_degeneracies(np.array([q]))[0]), exact


def log_degeneracies(quads: np.ndarray) -> np.ndarray:
    from scipy.special import gammaln

    quads = np.asarray(quads, dtype=float)
    N = quads.sum(axis=1)
    return gammaln(N + 1) - gammaln(quads + 1).sum(axis=1)


@lru_cache(maxsize=8)
def log_degeneracy_table(n_qubits: int) -> np.ndarray:
    """:func:`log_degeneracies` for the canonical quadruple order."""
    out = log_degeneracies(quadruple_array(n_qubits))
    out.setflags(write=False)
    return out


def exact_degeneracies(quads: np.ndarray) -> list[int]:
    out = []
    for nx, ny, nz, n0 in np.asarray(quads).tolist():
        N = nx + ny + nz + n0
        out.append(comb(N, nx) * comb(N - nx, ny) * comb(N - nx - ny, nz))
    return out


@dataclass(frozen=True)
class SymPauliMatrix:
    """Sparse representative in COO form, ``value = <N, row| P |N, col>``."""

    quadruple: Quadruple
    log_degeneracy: float
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @property
    def n_qubits(self) -> int:
        return self.quadruple.n_qubits

    @property
    def nnz(self) -> int:
        return len(self.values)

    def toarray(self) -> np.ndarray:
        dim = self.n_qubits + 1
        out = np.zeros((dim, dim), dtype=complex)
        out[self.rows, self.cols] = self.values
        return out


def representative_matrix(q: Quadruple, n_qubits: int | None = None) -> SymPauliMatrix:
    """Dicke-basis matrix of the representative for quadruple ``q``.

    The ket ``|N, n>`` is split into X, Y, Z and identity blocks holding
    ``n_x, n_y, n_z`` and ``n - n_x - n_y - n_z`` excitations. The X and Y
    blocks are fully flipped, so the bra index is
    ``m = n + (N_x - 2 n_x) + (N_y - 2 n_y)``; each term carries
    ``(-1)^(n_y + n_z)`` and the binomial weights of both decompositions.
    The global phase is ``i^N_y`` (from ``Y|0> = i|1>``, ``Y|1> = -i|0>``).
    Terms are summed in the log domain with explicit signs.
    """
    q = Quadruple(*map(int, q))
    N = q.n_qubits
    if n_qubits is not None and n_qubits != N:
        raise ValueError(f"quadruple {q} does not describe {n_qubits} qubits")
    Nx, Ny, Nz, N0 = q
    nx, ny, nz, n0 = np.meshgrid(
        np.arange(Nx + 1), np.arange(Ny + 1), np.arange(Nz + 1), np.arange(N0 + 1),
        indexing="ij", sparse=True,
    )
    n = nx + ny + nz + n0
    m = n + (Nx - 2 * nx) + (Ny - 2 * ny)
    log_w = (
        log_binom(Nx, nx) + log_binom(Ny, ny) + log_binom(Nz, nz) + log_binom(N0, n0)
        - 0.5 * (log_binom(N, n) + log_binom(N, m))
    )
    sign = 1 - 2 * ((ny + nz) % 2)
    terms = np.broadcast_to(sign * np.exp(log_w), np.broadcast_shapes(n.shape, m.shape))
    dim = N + 1
    flat = np.broadcast_to(m * dim + n, terms.shape).ravel()
    dense = np.bincount(flat, weights=terms.ravel(), minlength=dim * dim)
    keep = np.flatnonzero(np.abs(dense) >= DROP_TOL)
    values = _I_POWERS[Ny % 4] * dense[keep]
    return SymPauliMatrix(
        quadruple=q,
        log_degeneracy=float(log_degeneracies(np.array([q]))[0]),
        rows=(keep // dim).astype(np.uint32),
        cols=(keep % dim).astype(np.uint32),
        values=values.astype(complex),
    )


def expectation(p: SymPauliMatrix, state: DickeState, imag_tol: float = 1e-10) -> float:
    if p.n_qubits != state.n_qubits:
        raise ValueError(
            f"operator acts on {p.n_qubits} qubits, state has {state.n_qubits}"
        )
    c = state.amplitudes
    val = np.sum(np.conj(c[p.rows]) * p.values * c[p.cols])
    if abs(val.imag) >= imag_tol:
        raise ArithmeticError(
            f"non-real expectation {val} for {p.quadruple}; operator not Hermitian?"
        )
    return float(val.real)


@lru_cache(maxsize=None)
def krawtchouk_table(size: int) -> np.ndarray:
    """``K[b, k] = [t^k] (1 + t)^(size - b) (1 - t)^b / C(size, k)``.

    Coefficients are exact integers (alternating binomial sums cancel badly in
    floating point); only the normalized ratio, bounded by 1, is rounded.
    """
    binoms = np.array([comb(size, k) for k in range(size + 1)], dtype=object)
    poly = binoms.copy()
    rows = [poly]
    alt = np.array([(-1) ** k for k in range(size + 1)], dtype=object)
    for _ in range(size):
        # divide by (1 + t), multiply by (1 - t)
        quot = alt * np.cumsum(alt * poly)
        poly = quot.copy()
        poly[1:] = quot[1:] - quot[:-1]
        rows.append(poly)
    table = np.array([[int(a) / int(b) for a, b in zip(row, binoms)] for row in rows])
    table.setflags(write=False)
    return table


def symmetric_expectations(state: DickeState) -> np.ndarray:
    """Signed ``<psi| P(q) |psi>`` for every quadruple, canonical order.

    With ``f = n_x + n_y`` and ``r = n_z + n_0``::

        <P> = i^n_y sum_{k, j} K_f[n_y, k] W_f[k, j] K_r[n_z, j]
        W_f[k, j] = conj(c[f - k + j]) c[k + j] C(f, k) C(r, j)
                    / sqrt(C(N, k + j) C(N, f - k + j))

    ``k`` counts excitations of the flipped block and ``j`` of the diagonal
    block, so every ``W_f`` entry is bounded by ``|c_n| |c_m|``.
    """
    N = state.n_qubits
    c = state.amplitudes
    idx = quadruple_index(N)
    out = np.empty(n_representatives(N))
    lbN = log_binom(N, np.arange(N + 1))
    for f in range(N + 1):
        r = N - f
        k = np.arange(f + 1)[:, None]
        j = np.arange(r + 1)[None, :]
        n, m = k + j, f - k + j
        log_w = (log_binom(f, k) + log_binom(r, j)) - 0.5 * (lbN[n] + lbN[m])
        W = np.conj(c[m]) * c[n] * np.exp(log_w)
        E = krawtchouk_table(f) @ W @ krawtchouk_table(r).T
        ny = np.arange(f + 1)[:, None]
        nz = np.arange(r + 1)[None, :]
        E = (_I_POWERS[ny % 4] * E).real
        out[idx[f - ny, ny, nz]] = E
    return out
