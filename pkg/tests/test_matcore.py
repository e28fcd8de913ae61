import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discordlab import matcore
from discordlab.errors import DimensionMismatch, NotHermitian, NotSquare
from discordlab.states import random_density

from conftest import bell_vector, pt_by_loops, random_hermitian

X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_kron_identity_and_dims():
    np.testing.assert_array_equal(matcore.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert matcore.kron(np.ones((2, 3)), np.ones((3, 2))).shape == (6, 6)


def test_kron_permutation_blocks():
    out = matcore.kron(X, np.eye(2))
    np.testing.assert_array_equal(out[:2, 2:], np.eye(2))
    np.testing.assert_array_equal(out[2:, :2], np.eye(2))
    np.testing.assert_array_equal(out[:2, :2], np.zeros((2, 2)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kron_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3)) for _ in range(3))
    left = matcore.kron(matcore.kron(a, b), c)
    right = matcore.kron(a, matcore.kron(b, c))
    assert np.max(np.abs(left - right)) < 1e-14


def test_hermitian_eig_small_cases():
    np.testing.assert_allclose(matcore.hermitian_eig(np.diag([1.0, 2.0])).values, [2, 1])
    np.testing.assert_allclose(matcore.hermitian_eig(X).values, [1, -1], atol=1e-15)


def test_hermitian_eig_errors():
    with pytest.raises(NotSquare):
        matcore.hermitian_eig(np.ones((2, 3)))
    with pytest.raises(NotHermitian):
        matcore.hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_hermitian_eig_reconstruction():
    rng = np.random.default_rng(2024)
    for trial in range(100):
        d = int(rng.integers(1, 17))
        a = random_hermitian(d, rng)
        res = matcore.hermitian_eig(a)
        assert np.all(np.diff(res.values) <= 0)
        rebuilt = res.vectors @ np.diag(res.values) @ res.vectors.conj().T
        assert np.max(np.abs(rebuilt - a)) < 1e-12, trial


def test_singular_values():
    np.testing.assert_allclose(matcore.singular_values(np.diag([3.0, -2.0])), [3, 2])
    u = np.array([1, 2j, 0.5])
    v = np.array([0.3, -1.0])
    sv = matcore.singular_values(np.outer(u, v.conj()))
    np.testing.assert_allclose(sv[0], np.linalg.norm(u) * np.linalg.norm(v))
    np.testing.assert_allclose(sv[1:], 0, atol=1e-15)
    q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((4, 4)))
    np.testing.assert_allclose(matcore.singular_values(q), np.ones(4))


def test_trace_norm_cases():
    rho = random_density(2, 2, 3, seed=5).mat
    assert matcore.trace_norm(rho) == pytest.approx(1.0, abs=1e-14)
    assert matcore.trace_norm(np.zeros((3, 3))) == 0.0
    bell = np.outer(bell_vector(), bell_vector())
    assert matcore.trace_norm(matcore.partial_transpose(bell, 2, 2)) == pytest.approx(2.0, abs=1e-14)


def test_trace_norm_dominates_trace():
    rng = np.random.default_rng(7)
    for _ in range(50):
        d = int(rng.integers(1, 8))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        assert matcore.trace_norm(a) >= abs(np.trace(a)) - 1e-12


def test_partial_trace_bell_by_contraction():
    bell = np.outer(bell_vector(), bell_vector())
    expected = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            expected[i, j] = sum(bell[2 * i + k, 2 * j + k] for k in range(2))
    np.testing.assert_allclose(expected, np.eye(2) / 2)
    np.testing.assert_allclose(matcore.partial_trace(bell, 2, 2, "A"), expected, atol=1e-15)
    np.testing.assert_allclose(matcore.partial_trace(bell, 2, 2, "B"), expected, atol=1e-15)


def test_partial_trace_product_and_trace():
    ra = random_density(1, 3, 3, seed=1).mat
    rb = random_density(1, 2, 2, seed=2).mat
    prod = np.kron(ra, rb)
    np.testing.assert_allclose(matcore.partial_trace(prod, 3, 2, "A"), ra, atol=1e-15)
    np.testing.assert_allclose(matcore.partial_trace(prod, 3, 2, "B"), rb, atol=1e-15)
    for seed in range(20):
        rho = random_density(3, 2, 6, seed).mat
        for keep in "AB":
            assert abs(np.trace(matcore.partial_trace(rho, 3, 2, keep)) - np.trace(rho)) < 1e-14


def test_partial_ops_dimension_checks():
    with pytest.raises(DimensionMismatch):
        matcore.partial_trace(np.eye(6), 2, 2)
    with pytest.raises(DimensionMismatch):
        matcore.partial_transpose(np.eye(6), 2, 2)
    with pytest.raises(DimensionMismatch):
        matcore.realign(np.eye(6), 2, 2)


def test_partial_transpose_against_loops():
    for seed in range(10):
        rho = random_density(2, 3, 4, seed).mat
        np.testing.assert_array_equal(matcore.partial_transpose(rho, 2, 3), pt_by_loops(rho, 2, 3))


def test_partial_transpose_bell_spectrum():
    bell = np.outer(bell_vector(), bell_vector())
    pt = pt_by_loops(bell, 2, 2)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(pt)), [-0.5, 0.5, 0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(matcore.partial_transpose(bell, 2, 2), pt)


def test_partial_transpose_product_and_involution():
    ra = random_density(1, 2, 2, seed=3).mat
    rb = random_density(1, 3, 3, seed=4).mat
    pt = matcore.partial_transpose(np.kron(ra, rb), 2, 3)
    np.testing.assert_allclose(pt, np.kron(ra, rb.T), atol=1e-15)
    assert np.linalg.eigvalsh(pt)[0] > -1e-14
    rho = random_density(3, 3, 5, seed=9).mat
    twice = matcore.partial_transpose(matcore.partial_transpose(rho, 3, 3), 3, 3)
    np.testing.assert_array_equal(twice, rho)
    once = matcore.partial_transpose(rho, 3, 3)
    assert np.trace(once) == np.trace(rho)
    np.testing.assert_array_equal(once, once.conj().T)


def test_realign_examples():
    psi_a = np.array([0.6, 0.8j])
    psi_b = np.array([1, 1, 1j]) / np.sqrt(3)
    prod = np.kron(np.outer(psi_a, psi_a.conj()), np.outer(psi_b, psi_b.conj()))
    r = matcore.realign(prod, 2, 3)
    assert r.shape == (4, 9)
    assert np.linalg.matrix_rank(r, tol=1e-12) == 1
    assert matcore.trace_norm(r) == pytest.approx(1.0, abs=1e-14)

    bell = np.outer(bell_vector(), bell_vector())
    sv = matcore.singular_values(matcore.realign(bell, 2, 2))
    np.testing.assert_allclose(sv, [0.5] * 4, atol=1e-15)
    assert matcore.trace_norm(matcore.realign(np.eye(4) / 4, 2, 2)) == pytest.approx(0.5)


def test_realign_index_map_and_inverse():
    rho = random_density(3, 2, 6, seed=11).mat
    r = matcore.realign(rho, 3, 2)
    for i in range(3):
        for j in range(3):
            for k in range(2):
                for l in range(2):
                    assert r[i * 3 + j, k * 2 + l] == rho[i * 2 + k, j * 2 + l]
    for seed in range(10):
        rho = random_density(3, 3, 9, seed).mat
        np.testing.assert_array_equal(matcore.unrealign(matcore.realign(rho, 3, 3), 3, 3), rho)


def test_hs_norm_sq():
    psi = np.array([1, 1j, 0]) / np.sqrt(2)
    assert matcore.hs_norm_sq(np.outer(psi, psi.conj())) == pytest.approx(1.0)
    assert matcore.hs_norm_sq(np.eye(5) / 5) == pytest.approx(0.2)
    assert matcore.hs_norm_sq(np.zeros((2, 2))) == 0.0
