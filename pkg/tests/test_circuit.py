"""Tests for the one-clean-qubit circuit construction and evolution."""

import numpy as np
import pytest

from dqc1.circuit import (
    ControlQubit,
    Dqc1Instance,
    branch_pure_state,
    controlled_u,
    diag_phase_unitary,
    evolve,
    final_state_closed,
    general_final_control,
    initial_state,
    linear_entropy_closed,
    pauli_string,
    reduced_system_state,
    unitary_from_spec,
)
from dqc1.linalg import (
    HADAMARD,
    SIGMA_X,
    SIGMA_Z,
    SeededRng,
    haar_unitary,
    kron,
    partial_trace,
    random_density,
    save_matrix,
)

I2 = np.eye(2, dtype=np.complex128)


def random_bloch(rng):
    v = rng.gen.standard_normal(3)
    v /= np.linalg.norm(v)
    return tuple(v * rng.gen.uniform(0.0, 1.0))


# --- control qubit -----------------------------------------------------------


def test_control_from_alpha_range():
    assert ControlQubit.from_alpha(1.0).bloch == (0.0, 0.0, 1.0)
    for bad in (0.0, -0.1, 1.2):
        with pytest.raises(ValueError):
            ControlQubit.from_alpha(bad)


def test_control_from_bloch_norm_guard():
    ControlQubit.from_bloch((0.6, 0.0, 0.8))  # norm exactly 1 is allowed
    with pytest.raises(ValueError, match="norm"):
        ControlQubit.from_bloch((0.8, 0.0, 0.8))
    with pytest.raises(ValueError):
        ControlQubit.from_bloch((1.0, 0.0))


def test_control_alpha_property():
    assert ControlQubit.from_alpha(0.3).alpha == 0.3
    assert ControlQubit.from_bloch((0.0, 0.0, 0.5)).alpha == 0.5
    with pytest.raises(ValueError, match="z-polarized"):
        _ = ControlQubit.from_bloch((0.1, 0.0, 0.5)).alpha


def test_control_polarization_exact_on_axis():
    # axis-aligned vectors bypass the sqrt so no rounding creeps in
    assert ControlQubit.from_alpha(0.3).polarization == 0.3
    assert ControlQubit.from_bloch((0.0, 0.0, -0.25)).polarization == 0.25


def test_control_density():
    np.testing.assert_allclose(
        ControlQubit.from_alpha(0.3).density(), np.diag([0.65, 0.35]), atol=1e-15
    )
    np.testing.assert_allclose(
        ControlQubit.from_bloch((1.0, 0.0, 0.0)).density(),
        np.array([[0.5, 0.5], [0.5, 0.5]]),
        atol=1e-15,
    )


def test_control_eigensystem_z_polarized_is_identity():
    vecs, vals = ControlQubit.from_alpha(0.4).eigensystem()
    np.testing.assert_array_equal(vecs, I2)
    np.testing.assert_array_equal(vals, [0.7, 0.3])
    vecs, vals = ControlQubit.from_bloch((0.0, 0.0, 0.0)).eigensystem()
    np.testing.assert_array_equal(vecs, I2)
    np.testing.assert_array_equal(vals, [0.5, 0.5])


def test_control_eigensystem_reconstructs():
    rng = SeededRng(41, 0)
    for _ in range(20):
        ctl = ControlQubit.from_bloch(random_bloch(rng))
        vecs, vals = ctl.eigensystem()
        np.testing.assert_allclose(
            (vecs * vals) @ vecs.conj().T, ctl.density(), atol=1e-14
        )
        np.testing.assert_allclose(vecs.conj().T @ vecs, I2, atol=1e-14)
        assert vals[0] >= vals[1]
        np.testing.assert_allclose(
            vals, [(1 + ctl.polarization) / 2, (1 - ctl.polarization) / 2], atol=1e-15
        )


# --- instance and evolution --------------------------------------------------


def test_instance_validation():
    u = haar_unitary(2, SeededRng(1, 0))
    ctl = ControlQubit.from_alpha(1.0)
    with pytest.raises(ValueError, match="n must"):
        Dqc1Instance(n=0, unitary=u, control=ctl)
    with pytest.raises(ValueError, match="n must"):
        Dqc1Instance(n=11, unitary=np.eye(2**11), control=ctl)
    with pytest.raises(ValueError, match="shape"):
        Dqc1Instance(n=2, unitary=u, control=ctl)
    with pytest.raises(ValueError, match="not unitary"):
        Dqc1Instance(n=1, unitary=np.ones((2, 2)), control=ctl)
    with pytest.raises(ValueError, match="density"):
        Dqc1Instance(n=1, unitary=u, control=ctl, system_state=SIGMA_Z)


def test_instance_default_register_is_maximally_mixed():
    inst = Dqc1Instance(n=2, unitary=np.eye(4), control=ControlQubit.from_alpha(1.0))
    np.testing.assert_array_equal(inst.system_state, np.eye(4) / 4)
    assert inst.dim == 4


def test_initial_state_examples():
    inst = Dqc1Instance(n=1, unitary=I2, control=ControlQubit.from_alpha(1.0))
    np.testing.assert_allclose(
        initial_state(inst), np.diag([0.5, 0.5, 0.0, 0.0]), atol=1e-15
    )
    inst = Dqc1Instance(n=1, unitary=I2, control=ControlQubit.from_alpha(0.5))
    np.testing.assert_allclose(
        initial_state(inst), np.diag([0.375, 0.375, 0.125, 0.125]), atol=1e-15
    )


def test_initial_state_transverse_control():
    inst = Dqc1Instance(
        n=1, unitary=I2, control=ControlQubit.from_bloch((1.0, 0.0, 0.0))
    )
    want = np.array(
        [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1]], dtype=np.complex128
    ) / 4
    np.testing.assert_allclose(initial_state(inst), want, atol=1e-15)
    # agrees with building the product state directly
    np.testing.assert_allclose(
        initial_state(inst), kron(inst.control.density(), I2 / 2), atol=1e-15
    )


def test_controlled_u_cnot():
    want = np.zeros((4, 4))
    want[0, 0] = want[1, 1] = want[2, 3] = want[3, 2] = 1.0
    np.testing.assert_array_equal(controlled_u(SIGMA_X), want)


def test_controlled_u_unitarity():
    u = haar_unitary(8, SeededRng(2, 0))
    cu = controlled_u(u)
    np.testing.assert_allclose(cu @ controlled_u(u.conj().T), np.eye(16), atol=1e-12)
    np.testing.assert_array_equal(controlled_u(np.eye(4)), np.eye(8))


def test_evolve_identity_unitary_gives_plus_control():
    inst = Dqc1Instance(n=1, unitary=I2, control=ControlQubit.from_alpha(1.0))
    marginal = partial_trace(evolve(inst), keep="control")
    plus = np.full((2, 2), 0.5, dtype=np.complex128)
    np.testing.assert_allclose(marginal, plus, atol=1e-14)


def test_evolve_mixed_control_is_invariant():
    u = haar_unitary(4, SeededRng(3, 0))
    inst = Dqc1Instance(
        n=2, unitary=u, control=ControlQubit.from_bloch((0.0, 0.0, 0.0))
    )
    np.testing.assert_allclose(evolve(inst), np.eye(8) / 8, atol=1e-13)


def test_final_state_closed_frozen_sigma_z():
    want = np.array(
        [[1, 0, 1, 0], [0, 1, 0, -1], [1, 0, 1, 0], [0, -1, 0, 1]],
        dtype=np.complex128,
    ) / 4
    np.testing.assert_allclose(final_state_closed(1.0, SIGMA_Z), want, atol=1e-15)
    np.testing.assert_allclose(final_state_closed(0.0, SIGMA_Z), np.eye(4) / 4, atol=1e-15)


def test_evolve_matches_closed_form():
    rng = SeededRng(19, 0)
    for n in (1, 2, 3):
        for alpha in (0.25, 0.7, 1.0):
            u = haar_unitary(2**n, rng)
            inst = Dqc1Instance(n=n, unitary=u, control=ControlQubit.from_alpha(alpha))
            np.testing.assert_allclose(
                evolve(inst), final_state_closed(alpha, u), atol=1e-12
            )


def test_final_control_marginal_and_expectations():
    """The control marginal is 1/2 [[1, a conj(t)], [a t, 1]], so the x and y
    expectations read off the two quadratures of t = Tr U / 2^n."""
    rng = SeededRng(29, 0)
    for n in (1, 2):
        u = haar_unitary(2**n, rng)
        alpha = 0.6
        inst = Dqc1Instance(n=n, unitary=u, control=ControlQubit.from_alpha(alpha))
        t = np.trace(u) / 2**n
        marginal = partial_trace(evolve(inst), keep="control")
        want = 0.5 * np.array([[1.0, alpha * t.conjugate()], [alpha * t, 1.0]])
        np.testing.assert_allclose(marginal, want, atol=1e-13)
        assert abs(np.trace(marginal @ SIGMA_X).real - alpha * t.real) < 1e-13
        assert abs(np.trace((marginal @ (1j * SIGMA_X @ SIGMA_Z))).real - alpha * t.imag) < 1e-13


def test_branch_pure_state_examples():
    phi = np.array([1.0, 0.0], dtype=np.complex128)
    bell = branch_pure_state(phi, SIGMA_X)
    np.testing.assert_allclose(bell, [1, 0, 0, 1] / np.sqrt(2), atol=1e-15)
    product = branch_pure_state(phi, I2)
    np.testing.assert_allclose(product, [1, 0, 1, 0] / np.sqrt(2), atol=1e-15)
    with pytest.raises(ValueError, match="normalized"):
        branch_pure_state(np.array([1.0, 1.0]), I2)


def test_reduced_system_state_matches_partial_trace():
    rng = SeededRng(37, 0)
    for n in (1, 2, 3):
        u = haar_unitary(2**n, rng)
        phi = rng.gen.standard_normal(2**n) + 1j * rng.gen.standard_normal(2**n)
        phi /= np.linalg.norm(phi)
        psi = branch_pure_state(phi, u)
        joint = np.outer(psi, psi.conj())
        np.testing.assert_allclose(
            reduced_system_state(phi, u),
            partial_trace(joint, keep="system"),
            atol=1e-13,
        )
    # a U eigenvector stays pure
    np.testing.assert_allclose(
        reduced_system_state(np.array([1.0, 0.0]), SIGMA_Z),
        [[1.0, 0.0], [0.0, 0.0]],
        atol=1e-15,
    )


def test_general_final_control_identity_unitary():
    rng = SeededRng(43, 0)
    for _ in range(10):
        ctl = ControlQubit.from_bloch(random_bloch(rng))
        rho_f = general_final_control(ctl, I2 / 2, I2)
        np.testing.assert_allclose(
            rho_f, HADAMARD @ ctl.density() @ HADAMARD, atol=1e-13
        )


def test_general_final_control_traceless_flip():
    ctl = ControlQubit.from_bloch((0.0, 0.0, 1.0))
    np.testing.assert_allclose(
        general_final_control(ctl, I2 / 2, SIGMA_X), I2 / 2, atol=1e-13
    )


def test_linear_entropy_plug_ins():
    assert linear_entropy_closed((1.0, 0.0, 0.0), 0.83 + 0.2j) == 0.0
    assert linear_entropy_closed((0.0, 0.0, 1.0), 0.0) == 0.5


def test_linear_entropy_matches_evolution():
    rng = SeededRng(53, 0)
    for _ in range(25):
        n = int(rng.gen.integers(1, 4))
        dim = 2**n
        ctl = ControlQubit.from_bloch(random_bloch(rng))
        u = haar_unitary(dim, rng)
        rho_n = random_density(dim, dim, rng)
        rho_f = general_final_control(ctl, rho_n, u)
        direct = 1.0 - float(np.trace(rho_f @ rho_f).real)
        t = complex(np.trace(u @ rho_n))
        assert abs(linear_entropy_closed(ctl.bloch, t) - direct) < 1e-12


# --- unitary spec grammar ----------------------------------------------------


def test_pauli_string():
    np.testing.assert_array_equal(pauli_string("XZ"), np.kron(SIGMA_X, SIGMA_Z))
    np.testing.assert_array_equal(pauli_string("I"), I2)
    with pytest.raises(ValueError):
        pauli_string("XQ")
    with pytest.raises(ValueError):
        pauli_string("")


def test_diag_phase_unitary():
    u = diag_phase_unitary([0.0, np.pi / 2])
    np.testing.assert_allclose(u, np.diag([1.0, 1.0j]), atol=1e-15)
    with pytest.raises(ValueError):
        diag_phase_unitary([])


def test_unitary_from_spec_named_forms():
    np.testing.assert_array_equal(unitary_from_spec("identity", 2), np.eye(4))
    np.testing.assert_array_equal(
        unitary_from_spec("pauli:XZ", 2), np.kron(SIGMA_X, SIGMA_Z)
    )
    u = unitary_from_spec("diag-phase:0,1.5707963267948966", 1)
    np.testing.assert_allclose(u, np.diag([1.0, 1.0j]), atol=1e-15)
    h1 = unitary_from_spec("haar", 2, SeededRng(8, 0))
    h2 = unitary_from_spec("haar", 2, SeededRng(8, 0))
    np.testing.assert_array_equal(h1, h2)


def test_unitary_from_spec_file_round_trip(tmp_path):
    u = haar_unitary(4, SeededRng(6, 0))
    path = tmp_path / "u.json"
    save_matrix(path, u)
    np.testing.assert_array_equal(unitary_from_spec(f"file:{path}", 2), u)

    bad = tmp_path / "bad.json"
    save_matrix(bad, np.ones((4, 4)))
    with pytest.raises(ValueError, match="not unitary"):
        unitary_from_spec(f"file:{bad}", 2)


@pytest.mark.parametrize(
    "spec,n",
    [
        ("haar", 1),  # no rng supplied
        ("pauli:XYZ", 2),  # wrong letter count
        ("diag-phase:0,0,0", 2),  # wrong angle count
        ("diag-phase:0,abc", 1),  # non-numeric
        ("rotation:0.4", 1),  # unknown form
    ],
)
def test_unitary_from_spec_rejects(spec, n):
    with pytest.raises(ValueError):
        unitary_from_spec(spec, n)
