"""Magic measures computed from the reduced (symmetric) Pauli spectrum."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import log, log2

import numpy as np
from scipy.special import logsumexp

from .dicke import DickeState
from .pauli import (
    Quadruple,
    exact_degeneracies,
    log_degeneracy_table,
    quadruple_array,
    symmetric_expectations,
)

LN2 = log(2.0)
NULLITY_TOL = 1e-9


@dataclass
class SpectrumSummary:
    """Per-representative expectations with their log-degeneracies."""

    n_qubits: int
    quadruples: np.ndarray
    expectations: np.ndarray
    log_degeneracy: np.ndarray
    power_sums: dict[int, float] = field(default_factory=dict)

    @property
    def r(self) -> np.ndarray:
        return np.abs(self.expectations)

    @property
    def rows(self):
        for q, r, lg in zip(self.quadruples.tolist(), self.r, self.log_degeneracy):
            yield Quadruple(*q), float(r), float(lg)

    def log_power_sum(self, k: int) -> float:
        """``ln sum_q g(q) r_q^(2k)``, zero rows skipped."""
        if k not in self.power_sums:
            r = self.r
            nz = r > 0
            self.power_sums[k] = float(
                logsumexp(self.log_degeneracy[nz] + 2 * k * np.log(r[nz]))
            )
        return self.power_sums[k]


def spectrum_summary(state: DickeState, cache=None, ks=(1, 2)) -> SpectrumSummary:
    """Reduce ``state`` to its symmetric Pauli spectrum.

    With a :class:`~symmagic.cache.PauliCache` the stored matrices are used;
    otherwise the factorised kernel evaluates every representative directly.
    """
    N = state.n_qubits
    if cache is not None:
        if cache.n_qubits != N:
            raise ValueError(f"cache is for N={cache.n_qubits}, state has N={N}")
        quads = cache.quadruples.astype(np.int64)
        expectations = cache.expectations(state)
        log_deg = cache.log_degeneracy
    else:
        quads = quadruple_array(N)
        expectations = symmetric_expectations(state)
        log_deg = log_degeneracy_table(N)
    summary = SpectrumSummary(N, quads, expectations, np.asarray(log_deg, dtype=float))
    for k in ks:
        summary.log_power_sum(k)
    return summary


def sre_m2(summary: SpectrumSummary) -> float:
    """Stabilizer 2-Renyi entropy, ``ln D - ln sum_P <P>^4`` (nats)."""
    return summary.n_qubits * LN2 - summary.log_power_sum(2)


def sre_mk(summary: SpectrumSummary, k: int) -> float:
    if k < 2:
        raise ValueError(f"Renyi index must be >= 2, got {k}")
    return (summary.n_qubits * LN2 - summary.log_power_sum(k)) / (k - 1)


def stabilizer_nullity(summary: SpectrumSummary, tol: float = NULLITY_TOL) -> tuple[int, bool]:
    """``N - log2(#strings with |<P>| = 1)``; flag says whether the count is a power of 2."""
    if not 0 < tol < 1e-3:
        raise ValueError(f"tolerance must lie in (0, 1e-3), got {tol}")
    ones = summary.r >= 1 - tol
    count = sum(exact_degeneracies(summary.quadruples[ones]))
    is_pow2 = count > 0 and count & (count - 1) == 0
    log_count = count.bit_length() - 1 if is_pow2 else log2(count)
    return summary.n_qubits - int(round(log_count)), is_pow2


def log_flatness_coefficient(n_qubits: int, n_a: int) -> float:
    """``ln c(D, D_A)`` with ``c = (D^2 - D_A^2)(D_A^2 - 1) / ((D^2 - 1)(D + 2) D_A^2)``.

    The ``(D + 2)`` factor is what the exact Clifford average gives (checked by
    enumerating the 2-qubit Clifford group: c(4, 2) = 1/10); it makes
    ``c ~ 1/D`` on a balanced cut.
    """
    if not 1 <= n_a <= n_qubits - 1:
        raise ValueError(f"subsystem size must lie in [1, {n_qubits - 1}], got {n_a}")
    N = n_qubits
    return (
        2 * N * LN2 + np.log1p(-(4.0 ** (n_a - N)))      # D^2 - D_A^2
        + 2 * n_a * LN2 + np.log1p(-(4.0 ** -n_a))       # D_A^2 - 1
        - 2 * N * LN2 - np.log1p(-(4.0 ** -N))           # D^2 - 1
        - N * LN2 - np.log1p(2.0 ** (1 - N))             # D + 2
        - 2 * n_a * LN2                                  # D_A^2
    )


def avg_flatness(m2: float, n_qubits: int, n_a: int) -> tuple[float, float, float]:
    """Clifford-averaged flatness from M2: ``(M_lin, <F_A>, <f_A>)``.

    ``<F_A> = c(D, D_A) M_lin`` decays like ``1/D`` on a balanced cut and
    underflows for large N; use :func:`log_flatness_coefficient` there.
    """
    m_lin = -np.expm1(-m2)
    c = np.exp(log_flatness_coefficient(n_qubits, n_a))
    return float(m_lin), float(c * m_lin), float(m_lin)


def sorted_spectrum(summary: SpectrumSummary) -> np.ndarray:
    """One ``|<P>|`` per representative, descending, degeneracies ignored."""
    return np.sort(summary.r)[::-1]


@dataclass(frozen=True)
class MagicReport:
    n_qubits: int
    n_a: int
    m2: float
    m2_density: float
    nullity: int
    nullity_count_is_pow2: bool
    m_lin: float
    avg_flatness: float
    flatness_rescaled: float
    log_avg_flatness: float


def report_from_values(
    n_qubits: int, m2: float, nullity: int, is_pow2: bool, n_a: int | None = None
) -> MagicReport:
    n_a = n_qubits // 2 if n_a is None else n_a
    if n_qubits >= 2:
        m_lin, avg_f, f_res = avg_flatness(m2, n_qubits, n_a)
        log_avg = log_flatness_coefficient(n_qubits, n_a) + (np.log(m_lin) if m_lin > 0 else -np.inf)
    else:
        # no bipartition of a single qubit
        m_lin, avg_f, f_res, log_avg = float(-np.expm1(-m2)), float("nan"), float("nan"), float("nan")
    return MagicReport(
        n_qubits=n_qubits,
        n_a=n_a,
        m2=m2,
        m2_density=m2 / n_qubits,
        nullity=nullity,
        nullity_count_is_pow2=is_pow2,
        m_lin=m_lin,
        avg_flatness=avg_f,
        flatness_rescaled=f_res,
        log_avg_flatness=float(log_avg),
    )


def magic_report(
    summary: SpectrumSummary, n_a: int | None = None, tol: float = NULLITY_TOL
) -> MagicReport:
    nullity, is_pow2 = stabilizer_nullity(summary, tol)
    return report_from_values(summary.n_qubits, sre_m2(summary), nullity, is_pow2, n_a)
