"""Tests for the dense linear-algebra layer."""

import json

import numpy as np
import pytest
from scipy.stats import unitary_group

from dqc1.linalg import (
    HADAMARD,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SeededRng,
    eig_hermitian,
    eig_unitary,
    haar_unitary,
    is_density,
    is_right_unitary,
    is_unitary,
    kron,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    random_density,
    random_right_unitary,
    save_matrix,
    trace_sqrt_product,
)

I2 = np.eye(2, dtype=np.complex128)


def partial_trace_by_summation(rho, keep, da, db):
    """Independent reference: contract with explicit basis projectors."""
    rho = rho.reshape(da, db, da, db)
    if keep == "control":
        out = np.zeros((da, da), dtype=np.complex128)
        for k in range(db):
            out += rho[:, k, :, k]
    else:
        out = np.zeros((db, db), dtype=np.complex128)
        for k in range(da):
            out += rho[k, :, k, :]
    return out


def test_seeded_rng_reproducible():
    a = SeededRng(42, 3).gen.standard_normal(8)
    b = SeededRng(42, 3).gen.standard_normal(8)
    c = SeededRng(42, 4).gen.standard_normal(8)
    np.testing.assert_array_equal(a, b)
    assert np.any(a != c)


def test_seeded_rng_rejects_negative():
    with pytest.raises(ValueError):
        SeededRng(-1, 0)
    with pytest.raises(ValueError):
        SeededRng(0, -2)


def test_kron_identities():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(kron(SIGMA_Z, I2), np.diag([1.0, 1.0, -1.0, -1.0]))
    proj0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
    np.testing.assert_array_equal(kron(proj0, I2 / 2), np.diag([0.5, 0.5, 0.0, 0.0]))


def test_kron_matches_numpy():
    rng = SeededRng(5, 0)
    a = haar_unitary(4, rng)
    b = haar_unitary(8, rng)
    np.testing.assert_allclose(kron(a, b), np.kron(a, b), atol=1e-15)


def test_kron_dimension_guard():
    with pytest.raises(ValueError, match="exceeds"):
        kron(np.eye(128), np.eye(64))


def test_partial_trace_projector():
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = 1.0  # |00><00|
    got = partial_trace(rho, keep="control")
    np.testing.assert_allclose(got, [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)


def test_partial_trace_bell_state():
    bell = np.zeros(4, dtype=np.complex128)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    rho = np.outer(bell, bell.conj())
    np.testing.assert_allclose(partial_trace(rho, keep="control"), I2 / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, keep="system"), I2 / 2, atol=1e-15)


@pytest.mark.parametrize("da,db", [(2, 2), (2, 4), (2, 8), (4, 2)])
def test_partial_trace_against_summation(da, db):
    rng = SeededRng(17, 0)
    for _ in range(5):
        g = rng.gen.standard_normal((da * db, da * db)) + 1j * rng.gen.standard_normal(
            (da * db, da * db)
        )
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        for keep in ("control", "system"):
            got = partial_trace(rho, keep=keep, control_dim=da, system_dim=db)
            want = partial_trace_by_summation(rho, keep, da, db)
            np.testing.assert_allclose(got, want, atol=1e-13)
            assert abs(np.trace(got) - 1.0) < 1e-12


def test_partial_trace_bad_keep():
    with pytest.raises(ValueError, match="keep"):
        partial_trace(np.eye(4) / 4, keep="register")


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        partial_trace(np.eye(6) / 6, keep="control", control_dim=4)


def test_predicates():
    assert is_unitary(HADAMARD)
    assert not is_unitary(np.ones((2, 2)))
    assert not is_unitary(np.ones((2, 3)))
    assert is_density(I2 / 2)
    assert not is_density(SIGMA_Z)  # trace 0
    assert not is_density(np.diag([1.5, -0.5]))  # negative eigenvalue
    assert is_right_unitary(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    assert not is_right_unitary(np.ones((2, 3)))
    assert not is_right_unitary(np.ones((3, 2)))  # more rows than columns


def test_eig_hermitian_diagonal():
    spec = eig_hermitian(SIGMA_Z)
    np.testing.assert_allclose(spec.eigenvalues, [1.0, -1.0], atol=1e-15)


def test_eig_hermitian_alpha_control():
    rho = 0.5 * (I2 + 0.3 * SIGMA_Z)
    spec = eig_hermitian(rho)
    np.testing.assert_allclose(spec.eigenvalues, [0.65, 0.35], atol=1e-15)


def test_eig_hermitian_reconstructs():
    rng = SeededRng(23, 0)
    for _ in range(10):
        g = rng.gen.standard_normal((6, 6)) + 1j * rng.gen.standard_normal((6, 6))
        h = (g + g.conj().T) / 2
        spec = eig_hermitian(h)
        recon = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
        np.testing.assert_allclose(recon, h, atol=1e-10)
        assert np.all(np.diff(spec.eigenvalues) <= 1e-12)  # descending


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_unitary_identity():
    spec = eig_unitary(np.eye(4))
    np.testing.assert_allclose(spec.eigenvalues, np.ones(4), atol=1e-15)
    np.testing.assert_allclose(
        spec.eigenvectors.conj().T @ spec.eigenvectors, np.eye(4), atol=1e-12
    )


def test_eig_unitary_sigma_x():
    spec = eig_unitary(SIGMA_X)
    # phase order puts -1 (angle pi) after +1 (angle 0)
    np.testing.assert_allclose(spec.eigenvalues, [1.0, -1.0], atol=1e-12)
    for k in range(2):
        v = spec.eigenvectors[:, k]
        np.testing.assert_allclose(SIGMA_X @ v, spec.eigenvalues[k] * v, atol=1e-12)
        np.testing.assert_allclose(np.abs(v), [1 / np.sqrt(2)] * 2, atol=1e-12)


def test_eig_unitary_haar_reconstructs():
    rng = SeededRng(31, 0)
    u = haar_unitary(8, rng)
    spec = eig_unitary(u)
    resid = u @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues
    assert np.max(np.abs(resid)) < 1e-10
    gram = spec.eigenvectors.conj().T @ spec.eigenvectors
    assert np.max(np.abs(gram - np.eye(8))) < 1e-10


def test_eig_unitary_degenerate_basis_is_orthonormal():
    # X (x) X has eigenvalues +-1, each doubly degenerate; the raw
    # eigensolver basis inside each block need not be orthogonal.
    u = np.kron(SIGMA_X, SIGMA_X)
    spec = eig_unitary(u)
    gram = spec.eigenvectors.conj().T @ spec.eigenvectors
    assert np.max(np.abs(gram - np.eye(4))) < 1e-10
    resid = u @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues
    assert np.max(np.abs(resid)) < 1e-10


def test_eig_unitary_rejects_non_unitary():
    with pytest.raises(ValueError, match="unitary"):
        eig_unitary(np.diag([1.0, 2.0]))


def test_trace_sqrt_product_commuting():
    rho = np.diag([0.7, 0.2, 0.1]).astype(np.complex128)
    u = np.diag(np.exp(1j * np.array([0.3, 1.1, 2.0])))
    assert abs(trace_sqrt_product(u, rho) - 1.0) < 1e-12


def test_trace_sqrt_product_maximally_mixed():
    rng = SeededRng(3, 0)
    for n in (1, 2, 3):
        dim = 2**n
        u = haar_unitary(dim, rng)
        assert abs(trace_sqrt_product(u, np.eye(dim) / dim) - 1.0) < 1e-12


def test_trace_sqrt_product_flip_on_biased_state():
    # eigenvalues of (X rho X) rho are {0.09, 0.09}; the sum of roots is 0.6
    rho = np.diag([0.9, 0.1]).astype(np.complex128)
    assert abs(trace_sqrt_product(SIGMA_X, rho) - 0.6) < 1e-12


def test_haar_unitary_is_unitary():
    rng = SeededRng(9, 0)
    for dim in (1, 2, 5, 8):
        u = haar_unitary(dim, rng)
        assert is_unitary(u, 1e-12)
    assert abs(abs(haar_unitary(1, rng)[0, 0]) - 1.0) < 1e-12


def test_haar_unitary_deterministic():
    a = haar_unitary(4, SeededRng(1234, 0))
    b = haar_unitary(4, SeededRng(1234, 0))
    np.testing.assert_array_equal(a, b)


def test_haar_trace_moment_against_scipy():
    """E|Tr U|^2 = 1 under the Haar measure, cross-checked with an
    independently implemented sampler."""
    rng = SeededRng(123, 0)
    ours = np.mean(
        [abs(np.trace(haar_unitary(4, rng))) ** 2 for _ in range(10**4)]
    )
    theirs = unitary_group.rvs(4, size=10**4, random_state=np.random.default_rng(7))
    ref = np.mean(np.abs(np.trace(theirs, axis1=-2, axis2=-1)) ** 2)
    assert abs(ours - 1.0) < 0.05
    assert abs(ref - 1.0) < 0.05


def test_random_density_properties():
    rng = SeededRng(77, 0)
    rho1 = random_density(4, 1, rng)
    assert abs(np.sum(np.abs(rho1) ** 2) - 1.0) < 1e-10  # rank 1 means pure
    rho = random_density(2, 2, rng)
    evals = np.linalg.eigvalsh(rho)
    assert abs(evals.sum() - 1.0) < 1e-12
    assert evals.min() >= -1e-12
    with pytest.raises(ValueError):
        random_density(4, 5, rng)


def test_random_right_unitary():
    rng = SeededRng(13, 0)
    t = random_right_unitary(2, 4, rng)
    assert t.shape == (2, 4)
    assert is_right_unitary(t, 1e-12)
    full = random_right_unitary(3, 3, rng)
    assert is_unitary(full, 1e-12)
    with pytest.raises(ValueError):
        random_right_unitary(5, 3, rng)


def test_matrix_json_round_trip(tmp_path):
    rng = SeededRng(2, 0)
    a = haar_unitary(4, rng)
    payload = matrix_to_json(a)
    assert payload["dim"] == 4
    np.testing.assert_array_equal(matrix_from_json(payload), a)

    path = tmp_path / "u.json"
    save_matrix(path, a)
    np.testing.assert_array_equal(load_matrix(path), a)
    # the on-disk form is plain JSON with separate real and imaginary parts
    raw = json.loads(path.read_text())
    assert set(raw) == {"dim", "re", "im"}


def test_matrix_from_json_rejects_malformed():
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 2, "re": [[1.0, 0.0]], "im": [[0.0, 0.0]]})
