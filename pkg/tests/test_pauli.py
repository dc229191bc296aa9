from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symmagic.dicke import DickeState, named_state, random_state
from symmagic.pauli import (
    Quadruple,
    degeneracy,
    enumerate_quadruples,
    exact_degeneracies,
    expectation,
    krawtchouk_table,
    log_degeneracies,
    n_representatives,
    quadruple_array,
    quadruple_index,
    representative_matrix,
    symmetric_expectations,
)
from symmagic.oracle import all_expectations, expand_full, pauli_string_matrix, string_counts

from conftest import dicke_isometry


def canonical_masks(q):
    """One concrete string with counts q: X on the lowest bits, then Y, then Z."""
    nx, ny, nz, _ = q
    x = (1 << (nx + ny)) - 1
    z = ((1 << (nx + ny + nz)) - 1) ^ ((1 << nx) - 1)
    return x, z


def compressed(q):
    N = sum(q)
    V = dicke_isometry(N)
    return V.conj().T @ pauli_string_matrix(*canonical_masks(q), N) @ V


def test_counts():
    assert len(enumerate_quadruples(1)) == 4
    assert len(enumerate_quadruples(2)) == 10
    assert n_representatives(80) == len(enumerate_quadruples(80)) == 91881
    assert enumerate_quadruples(1) == [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)]


def test_quadruple_array_order_and_index():
    quads = quadruple_array(7)
    assert [tuple(q) for q in quads] == [tuple(q) for q in enumerate_quadruples(7)]
    idx = quadruple_index(7)
    assert all(idx[q[0], q[1], q[2]] == i for i, q in enumerate(quads))


def test_degeneracy_examples():
    assert degeneracy(Quadruple(1, 1, 0, 0))[1] == 2
    assert degeneracy(Quadruple(2, 1, 1, 0))[1] == 12
    assert degeneracy(Quadruple(0, 0, 0, 5))[1] == 1
    lg, g = degeneracy(Quadruple(10, 20, 30, 40))
    assert g == comb(100, 10) * comb(90, 20) * comb(70, 30)
    assert lg == pytest.approx(np.log(float(g)), rel=1e-12)


@pytest.mark.parametrize("N", [1, 2, 5, 17, 60, 200])
def test_degeneracies_sum_to_4_pow_n(N):
    assert sum(exact_degeneracies(quadruple_array(N))) == 4**N


def test_log_degeneracy_matches_exact_at_100():
    quads = quadruple_array(100)[::97]
    exact = np.array([np.log(float(g)) for g in exact_degeneracies(quads)])
    assert np.allclose(log_degeneracies(quads), exact, rtol=1e-12, atol=1e-10)


def test_identity_and_global_strings():
    N = 6
    assert np.allclose(representative_matrix((0, 0, 0, N)).toarray(), np.eye(N + 1))
    zn = representative_matrix((0, 0, N, 0)).toarray()
    assert np.allclose(zn, np.diag([(-1) ** n for n in range(N + 1)]))
    xn = representative_matrix((N, 0, 0, 0)).toarray()
    assert np.allclose(xn, np.fliplr(np.eye(N + 1)))


def test_single_z_compression():
    assert np.allclose(representative_matrix((0, 0, 1, 1)).toarray(), np.diag([1, 0, -1]))


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_every_representative_matches_full_space_compression(N):
    for q in enumerate_quadruples(N):
        assert np.allclose(representative_matrix(q).toarray(), compressed(q), atol=1e-12), q


def test_phase_is_i_to_the_ny():
    # the sign flip (-1)^N_y separates i^N_y from (-i)^N_y
    q = Quadruple(0, 1, 0, 2)
    ours = representative_matrix(q).toarray()
    truth = compressed(q)
    assert np.allclose(ours, truth, atol=1e-12)
    flipped = ours * (-1) ** q.n_y
    assert not np.allclose(flipped, truth, atol=1e-6)


@pytest.mark.parametrize("N", [4, 9, 16])
def test_representatives_hermitian_and_contractive(N):
    for q in enumerate_quadruples(N):
        M = representative_matrix(q).toarray()
        assert np.allclose(M, M.conj().T, atol=1e-12)
        assert np.linalg.norm(M, 2) <= 1 + 1e-12


def test_involution_only_for_single_letter_strings():
    N = 5
    squares_to_one = [
        q for q in enumerate_quadruples(N)
        if np.allclose(representative_matrix(q).toarray() @ representative_matrix(q).toarray(), np.eye(N + 1), atol=1e-10)
    ]
    assert sorted(squares_to_one) == sorted(
        [(N, 0, 0, 0), (0, N, 0, 0), (0, 0, N, 0), (0, 0, 0, N)]
    )


@pytest.mark.parametrize("N", [6, 13, 25])
def test_nnz_bound(N):
    for q in enumerate_quadruples(N):
        f, r = q[0] + q[1], q[2] + q[3]
        m = representative_matrix(q)
        assert m.nnz <= (f + 1) * (r + 1)
        assert m.rows.dtype == np.uint32


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        expectation(representative_matrix((1, 0, 0, 2)), named_state(4, "ghz"))
    with pytest.raises(ValueError):
        representative_matrix((1, 0, 0, 2), n_qubits=4)


def test_w3_and_ghz_values():
    w3 = named_state(3, "w")
    assert expectation(representative_matrix((0, 0, 1, 2)), w3) == pytest.approx(1 / 3, abs=1e-14)
    for N in (2, 7, 30):
        ghz = named_state(N, "ghz")
        z_all = expectation(representative_matrix((0, 0, N, 0)), ghz)
        assert z_all == pytest.approx((1 + (-1) ** N) / 2, abs=1e-12)
        assert expectation(representative_matrix((N, 0, 0, 0)), ghz) == pytest.approx(1, abs=1e-12)


def test_krawtchouk_table_small():
    # (1+t)^2 (1-t)^0 = 1 + 2t + t^2 ; (1+t)(1-t) = 1 - t^2 ; (1-t)^2 = 1 - 2t + t^2
    K = krawtchouk_table(2)
    assert np.array_equal(K, np.array([[1, 1, 1], [1, 0, -1], [1, -1, 1]]))
    assert np.abs(krawtchouk_table(120)).max() <= 1


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6])
def test_three_routes_agree(N, rng):
    quads = enumerate_quadruples(N)
    counts = string_counts(N).reshape(-1, 4)
    idx = quadruple_index(N)[counts[:, 0], counts[:, 1], counts[:, 2]]
    for _ in range(20):
        state = random_state(N, rng)
        kernel = symmetric_expectations(state)
        literal = np.array([expectation(representative_matrix(q), state) for q in quads])
        brute = all_expectations(expand_full(state)).ravel()
        assert np.allclose(kernel, literal, atol=1e-13)
        assert np.allclose(kernel[idx], brute, atol=1e-12)


@pytest.mark.parametrize("N", [10, 40, 120])
def test_purity_sum_rule(N, rng):
    state = random_state(N, rng)
    r = symmetric_expectations(state)
    g = np.array([float(x) for x in exact_degeneracies(quadruple_array(N))])
    assert np.sum(g * r**2) == pytest.approx(2.0**N, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(N=st.integers(1, 30), seed=st.integers(0, 2**32 - 1))
def test_kernel_vs_literal_property(N, seed):
    rng = np.random.default_rng(seed)
    state = random_state(N, rng)
    kernel = symmetric_expectations(state)
    quads = quadruple_array(N)
    for i in rng.choice(len(quads), size=min(8, len(quads)), replace=False):
        val = expectation(representative_matrix(tuple(quads[i])), state)
        assert val == pytest.approx(kernel[i], abs=1e-11)
    assert np.all(np.abs(kernel) <= 1 + 1e-12)
    assert kernel[0] == pytest.approx(1.0)  # identity comes first


@settings(max_examples=30, deadline=None)
@given(
    N=st.integers(2, 12),
    phi=st.floats(0, 2 * np.pi),
    seed=st.integers(0, 2**32 - 1),
)
def test_collective_z_rotation_preserves_spectrum(N, phi, seed):
    # exp(-i phi S_z) is a product of single-qubit Z rotations; it mixes X and Y
    # but leaves every n_x + n_y block's total weight (sum over the orbit) fixed
    state = random_state(N, np.random.default_rng(seed))
    n = np.arange(N + 1)
    rotated = DickeState(N, state.amplitudes * np.exp(1j * phi * n))
    quads = quadruple_array(N)
    g = np.array([float(x) for x in exact_degeneracies(quads)])
    a, b = symmetric_expectations(state), symmetric_expectations(rotated)
    for f in range(N + 1):
        for nz in range(N + 1 - f):
            sel = (quads[:, 0] + quads[:, 1] == f) & (quads[:, 2] == nz)
            assert np.sum(g[sel] * a[sel] ** 2) == pytest.approx(np.sum(g[sel] * b[sel] ** 2), rel=1e-9, abs=1e-12)
