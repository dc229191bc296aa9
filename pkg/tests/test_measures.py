import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from symmagic.dicke import DickeState, collective_operator, named_state, random_state
from symmagic.measures import (
    LN2,
    avg_flatness,
    log_flatness_coefficient,
    magic_report,
    sorted_spectrum,
    spectrum_summary,
    sre_m2,
    sre_mk,
    stabilizer_nullity,
)
from symmagic.oracle import brute_magic_report, expand_full


@pytest.mark.parametrize("N", [2, 5, 30, 121, 200])
def test_ghz_is_stabilizer(N):
    rep = magic_report(spectrum_summary(named_state(N, "ghz")))
    assert abs(rep.m2) < 1e-8
    assert rep.nullity == 0 and rep.nullity_count_is_pow2


@pytest.mark.parametrize("N", [1, 4, 9, 60])
def test_polarized_is_stabilizer(N):
    rep = magic_report(spectrum_summary(named_state(N, "up")))
    assert abs(rep.m2) < 1e-10 and rep.nullity == 0


def test_t_state():
    # frozen: single-qubit T has Pauli spectrum (1, 1/2, 1/2, 0) so M2 = ln(4/3) per qubit
    assert sre_m2(spectrum_summary(named_state(1, "t"))) == pytest.approx(np.log(4 / 3), abs=1e-12)
    for N in (3, 10, 50):
        m2 = sre_m2(spectrum_summary(named_state(N, "t")))
        assert m2 == pytest.approx(N * np.log(4 / 3), abs=1e-10)


def test_w3():
    # frozen: brute enumeration of the 64 strings gives sum <P>^4 = 40/9
    summary = spectrum_summary(named_state(3, "w"))
    assert sre_m2(summary) == pytest.approx(np.log(9 / 5), abs=1e-10)
    assert stabilizer_nullity(summary) == (2, True)
    brute, _ = brute_magic_report(expand_full(named_state(3, "w")))
    assert brute.m2 == pytest.approx(np.log(9 / 5), abs=1e-12)
    assert brute.nullity == 2


def test_sorted_w3_spectrum():
    spec = sorted_spectrum(spectrum_summary(named_state(3, "w")))
    assert len(spec) == 20
    assert np.all(np.diff(spec) <= 0)
    assert spec[0] == pytest.approx(1)
    assert spec[1] == pytest.approx(1)  # Z^3 has <P> = -1
    assert spec[2] == pytest.approx(2 / 3)


@pytest.mark.parametrize("kind,N", [("t", 1), ("w", 3), ("dicke:1", 4)])
def test_mk_limit(kind, N):
    summary = spectrum_summary(named_state(N, kind))
    nu, _ = stabilizer_nullity(summary)
    scaled = [(k - 1) * sre_mk(summary, k) for k in range(2, 31)]
    assert scaled[0] == pytest.approx(sre_m2(summary), abs=1e-12)
    # sum <P>^(2k) shrinks with k, so (k-1) M_k climbs to nu ln 2 from below
    assert np.all(np.diff(scaled) >= -1e-12)
    assert scaled[-1] <= nu * LN2 + 1e-12
    assert scaled[-1] == pytest.approx(nu * LN2, abs=0.05)


def test_mk_t_state_k20():
    # sum <P>^(2k) = 1 + 2^(1-k) for a single T qubit
    mk = sre_mk(spectrum_summary(named_state(1, "t")), 20)
    assert 19 * mk == pytest.approx(LN2 - np.log1p(2.0**-19), abs=1e-12)
    with pytest.raises(ValueError):
        sre_mk(spectrum_summary(named_state(1, "t")), 1)


def test_mk_vanishes_on_stabilizers():
    summary = spectrum_summary(named_state(9, "ghz"))
    assert all(abs(sre_mk(summary, k)) < 1e-10 for k in (2, 3, 7))


def test_nullity_tolerance_validation():
    summary = spectrum_summary(named_state(3, "w"))
    with pytest.raises(ValueError):
        stabilizer_nullity(summary, 0.0)
    with pytest.raises(ValueError):
        stabilizer_nullity(summary, 0.01)


def test_flatness_coefficient_examples():
    # D = 4, D_A = 2: (16 - 4)(4 - 1) / (15 * 6 * 4)
    assert np.exp(log_flatness_coefficient(2, 1)) == pytest.approx(0.1, abs=1e-15)
    # D = 8, D_A = 2: (64 - 4)(4 - 1) / (63 * 10 * 4)
    assert np.exp(log_flatness_coefficient(3, 1)) == pytest.approx(180 / 2520, rel=1e-14)
    with pytest.raises(ValueError):
        log_flatness_coefficient(4, 0)


def two_qubit_cliffords():
    """All 11520 two-qubit Cliffords (mod phase), breadth-first from H, S, CNOT."""
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    s = np.diag([1, 1j])
    eye = np.eye(2)
    cx = np.eye(4)[[0, 1, 3, 2]]
    gens = [np.kron(h, eye), np.kron(eye, h), np.kron(s, eye), np.kron(eye, s), cx]

    def key(u):
        k = np.flatnonzero(np.abs(u.ravel()) > 1e-9)[0]
        return tuple(np.round((u * np.exp(-1j * np.angle(u.ravel()[k]))).ravel(), 6))

    seen = {key(np.eye(4)): np.eye(4)}
    frontier = [np.eye(4)]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                w = g @ u
                if key(w) not in seen:
                    seen[key(w)] = w
                    nxt.append(w)
        frontier = nxt
    return list(seen.values())


def test_clifford_average_flatness_oracle(rng):
    cliffs = two_qubit_cliffords()
    assert len(cliffs) == 11520

    def flat(psi):
        m = psi.reshape(2, 2)
        ev = np.linalg.eigvalsh(m @ m.conj().T)
        return np.sum(ev**3) - np.sum(ev**2) ** 2

    for _ in range(3):
        state = random_state(2, rng)
        full = expand_full(state).amplitudes
        avg = np.mean([flat(u @ full) for u in cliffs])
        rep = magic_report(spectrum_summary(state), n_a=1)
        assert rep.avg_flatness == pytest.approx(avg, abs=1e-12)
        assert avg / rep.m_lin == pytest.approx(0.1, abs=1e-12)


@pytest.mark.parametrize("N", range(20, 61, 2))
def test_flatness_coefficient_scales_like_inverse_dimension(N):
    assert 0.5 <= np.exp(log_flatness_coefficient(N, N // 2) + N * LN2) <= 1.5


def test_avg_flatness_underflow_reported_in_logs():
    rep = magic_report(spectrum_summary(named_state(100, "t")))
    assert rep.log_avg_flatness < np.log(1e-25)
    assert rep.avg_flatness < 1e-25
    assert rep.m_lin == pytest.approx(-np.expm1(-rep.m2), abs=1e-15)
    assert rep.flatness_rescaled == rep.m_lin


def test_report_fields_w3():
    rep = magic_report(spectrum_summary(named_state(3, "w")))
    m_lin, f, f_res = avg_flatness(rep.m2, 3, 1)
    assert m_lin == pytest.approx(4 / 9, abs=1e-12)
    assert rep.n_a == 1
    assert rep.avg_flatness == pytest.approx(f)
    assert rep.m2_density == pytest.approx(rep.m2 / 3)


def global_hadamard(N):
    """H^{(x)N} restricted to the symmetric subspace: i^N exp(-i pi (S_x + S_z)/sqrt 2)."""
    gen = (collective_operator(N, "x") + collective_operator(N, "z")).toarray()
    return (1j**N) * expm(-1j * np.pi * gen / np.sqrt(2))


def test_global_hadamard_is_hadamard():
    U = global_hadamard(1)
    assert np.allclose(U, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(N=st.integers(2, 14), seed=st.integers(0, 2**32 - 1), phase=st.floats(0, 2 * np.pi))
def test_clifford_invariance(N, seed, phase):
    state = random_state(N, np.random.default_rng(seed))
    before = magic_report(spectrum_summary(state))
    # global Hadamard and global S = exp(-i pi/2 (N/2 - S_z)) are symmetric Cliffords
    h = DickeState.from_unnormalized(global_hadamard(N) @ state.amplitudes)
    s = DickeState(N, state.amplitudes * 1j ** np.arange(N + 1))
    g = DickeState(N, state.amplitudes * np.exp(1j * phase))
    for other in (h, s, g):
        after = magic_report(spectrum_summary(other))
        assert after.m2 == pytest.approx(before.m2, abs=1e-9)
        assert after.nullity == before.nullity


@settings(max_examples=40, deadline=None)
@given(N=st.integers(1, 60), seed=st.integers(0, 2**32 - 1))
def test_m2_bounds(N, seed):
    rep = magic_report(spectrum_summary(random_state(N, np.random.default_rng(seed))))
    assert -1e-10 <= rep.m2 < N * LN2
    assert 0 <= rep.nullity <= N
    assert 0 <= rep.m_lin < 1


@settings(max_examples=20, deadline=None)
@given(N=st.integers(1, 7), seed=st.integers(0, 2**32 - 1))
def test_matches_brute(N, seed):
    state = random_state(N, np.random.default_rng(seed))
    sym = magic_report(spectrum_summary(state))
    brute, r = brute_magic_report(expand_full(state))
    assert sym.m2 == pytest.approx(brute.m2, abs=1e-10)
    assert sym.nullity == brute.nullity
