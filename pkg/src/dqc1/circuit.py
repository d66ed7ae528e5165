"""One-clean-qubit circuit: a polarized control qubit, a Hadamard, and a
controlled unitary acting on a maximally mixed (or user-supplied) register.

The control qubit is described either by a polarization ``alpha`` along z or
by a full Bloch vector; both are stored canonically as a Bloch vector so that
``alpha`` mode and ``bloch (0, 0, alpha)`` are the same object and produce
bit-identical results everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    HADAMARD,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SeededRng,
    TOL_CONSTRUCT,
    TOL_SPECTRAL,
    is_density,
    is_unitary,
    kron,
    load_matrix,
)

#: Largest register size an instance will accept (joint dimension 2**11).
MAX_QUBITS = 10

_PAULI_1Q = {
    "I": np.eye(2, dtype=np.complex128),
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
}


@dataclass(frozen=True)
class ControlQubit:
    """Control-qubit state, stored as a Bloch vector.

    Build with :meth:`from_alpha` (z polarization in (0, 1]) or
    :meth:`from_bloch` (any vector with norm <= 1).  ``mode`` records which
    constructor was used; it never affects numerics.
    """

    bloch: tuple[float, float, float]
    mode: str = field(default="bloch")

    @classmethod
    def from_alpha(cls, alpha: float) -> "ControlQubit":
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
        return cls(bloch=(0.0, 0.0, float(alpha)), mode="alpha")

    @classmethod
    def from_bloch(cls, p) -> "ControlQubit":
        p = tuple(float(x) for x in p)
        if len(p) != 3:
            raise ValueError("bloch vector must have three components")
        if _bloch_norm(p) > 1.0 + TOL_CONSTRUCT:
            raise ValueError(f"bloch vector norm {_bloch_norm(p)} exceeds 1")
        return cls(bloch=p, mode="bloch")

    @property
    def alpha(self) -> float:
        """z polarization; only meaningful when the x/y components vanish."""
        if self.bloch[0] != 0.0 or self.bloch[1] != 0.0:
            raise ValueError("control is not z-polarized; no scalar alpha")
        return self.bloch[2]

    @property
    def polarization(self) -> float:
        """Bloch-vector norm."""
        return _bloch_norm(self.bloch)

    def density(self) -> np.ndarray:
        p1, p2, p3 = self.bloch
        return 0.5 * (
            np.eye(2, dtype=np.complex128) + p1 * SIGMA_X + p2 * SIGMA_Y + p3 * SIGMA_Z
        )

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvector columns and descending eigenvalues of the state.

        The eigenvalues are (1 +- polarization)/2.  The eigenvector phase is
        fixed so the matrix is exactly the identity for a z-polarized control
        (and for the fully mixed case), which keeps alpha-mode and bloch-mode
        computations bit-identical.
        """
        p1, p2, p3 = self.bloch
        gamma = self.polarization
        vals = np.array([(1.0 + gamma) / 2.0, (1.0 - gamma) / 2.0])
        if gamma == 0.0 or (p1 == 0.0 and p2 == 0.0 and p3 > 0.0):
            return np.eye(2, dtype=np.complex128), vals
        cos_t = min(1.0, max(-1.0, p3 / gamma))
        c = math.sqrt((1.0 + cos_t) / 2.0)
        s = math.sqrt((1.0 - cos_t) / 2.0)
        phase = complex(math.cos(math.atan2(p2, p1)), math.sin(math.atan2(p2, p1)))
        vecs = np.array(
            [[c, -s * phase.conjugate()], [s * phase, c]], dtype=np.complex128
        )
        return vecs, vals


def _bloch_norm(p) -> float:
    p1, p2, p3 = p
    if p1 == 0.0 and p2 == 0.0:
        return abs(p3)  # exact for axis-aligned vectors
    return math.sqrt(p1 * p1 + p2 * p2 + p3 * p3)


@dataclass(frozen=True)
class Dqc1Instance:
    """A register size, the unitary under test, the control state, and the
    register state (maximally mixed unless overridden)."""

    n: int
    unitary: np.ndarray
    control: ControlQubit
    system_state: np.ndarray | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n must lie in [1, {MAX_QUBITS}], got {self.n}")
        dim = 2**self.n
        u = np.asarray(self.unitary, dtype=np.complex128)
        if u.shape != (dim, dim):
            raise ValueError(f"unitary shape {u.shape} does not match n={self.n}")
        if not is_unitary(u, TOL_SPECTRAL):
            raise ValueError("unitary is not unitary within tolerance")
        object.__setattr__(self, "unitary", u)
        rho = self.system_state
        if rho is None:
            rho = np.eye(dim, dtype=np.complex128) / dim
        else:
            rho = np.asarray(rho, dtype=np.complex128)
            if rho.shape != (dim, dim):
                raise ValueError(
                    f"system_state shape {rho.shape} does not match n={self.n}"
                )
            if not is_density(rho, TOL_SPECTRAL):
                raise ValueError("system_state is not a density matrix")
        object.__setattr__(self, "system_state", rho)

    @property
    def dim(self) -> int:
        return 2**self.n


def initial_state(inst: Dqc1Instance) -> np.ndarray:
    """Joint state before the circuit: control (x) register."""
    return kron(inst.control.density(), inst.system_state)


def controlled_u(u: np.ndarray) -> np.ndarray:
    """Block-diagonal controlled unitary |0><0| (x) I + |1><1| (x) U."""
    u = np.asarray(u, dtype=np.complex128)
    dim = u.shape[0]
    out = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    out[:dim, :dim] = np.eye(dim)
    out[dim:, dim:] = u
    return out


def evolve(inst: Dqc1Instance) -> np.ndarray:
    """Full joint state after Hadamard-then-controlled-U, by matrix products."""
    dim = inst.dim
    v = controlled_u(inst.unitary) @ kron(HADAMARD, np.eye(dim, dtype=np.complex128))
    return v @ initial_state(inst) @ v.conj().T


def final_state_closed(alpha: float, u: np.ndarray) -> np.ndarray:
    """Closed form of the post-circuit joint state for a z-polarized control.

    Normalized to unit trace: with register dimension d, the state is
    (|0><0| (x) I + |1><1| (x) I + alpha |0><1| (x) U^+ + alpha |1><0| (x) U) / 2d.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    u = np.asarray(u, dtype=np.complex128)
    dim = u.shape[0]
    out = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    out[:dim, :dim] = np.eye(dim)
    out[dim:, dim:] = np.eye(dim)
    out[:dim, dim:] = alpha * u.conj().T
    out[dim:, :dim] = alpha * u
    return out / (2 * dim)


def branch_pure_state(phi: np.ndarray, u: np.ndarray) -> np.ndarray:
    """(|0>|phi> + |1>U|phi>)/sqrt(2): the circuit's action on a pure register
    state with a fully polarized control."""
    phi = np.asarray(phi, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(phi)
    if abs(norm - 1.0) > TOL_SPECTRAL:
        raise ValueError(f"phi is not normalized (norm {norm})")
    return np.concatenate([phi, u @ phi]) / np.sqrt(2.0)


def reduced_system_state(phi: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Register marginal of the branch state: (|phi><phi| + U|phi><phi|U^+)/2."""
    phi = np.asarray(phi, dtype=np.complex128).reshape(-1, 1)
    uphi = np.asarray(u, dtype=np.complex128) @ phi
    return 0.5 * (phi @ phi.conj().T + uphi @ uphi.conj().T)


def general_final_control(
    control: ControlQubit, rho_n: np.ndarray, u: np.ndarray
) -> np.ndarray:
    """Control-qubit marginal after the circuit, for any control Bloch vector
    and any register state, computed by full density-matrix evolution."""
    from .linalg import partial_trace

    rho_n = np.asarray(rho_n, dtype=np.complex128)
    dim = rho_n.shape[0]
    v = controlled_u(u) @ kron(HADAMARD, np.eye(dim, dtype=np.complex128))
    joint = v @ kron(control.density(), rho_n) @ v.conj().T
    return partial_trace(joint, keep="control", control_dim=2, system_dim=dim)


def linear_entropy_closed(p, t: complex) -> float:
    """Closed form of 1 - Tr(rho_f^2) for control Bloch vector ``p`` and
    register trace overlap ``t`` = Tr(U rho_n)."""
    p1, p2, p3 = (float(x) for x in p)
    return 0.5 * (1.0 - p1 * p1 - (p2 * p2 + p3 * p3) * abs(t) ** 2)


def pauli_string(label: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, e.g. ``"XZ"`` or ``"IYX"``."""
    if not label or any(ch not in _PAULI_1Q for ch in label):
        raise ValueError(f"pauli label must be a nonempty string over IXYZ, got {label!r}")
    out = _PAULI_1Q[label[0]]
    for ch in label[1:]:
        out = kron(out, _PAULI_1Q[ch])
    return out


def diag_phase_unitary(phases) -> np.ndarray:
    """Diagonal unitary diag(e^{i phi_k}) from a sequence of angles."""
    phases = np.asarray(phases, dtype=np.float64)
    if phases.ndim != 1 or phases.size == 0:
        raise ValueError("phases must be a nonempty 1-D sequence")
    return np.diag(np.exp(1j * phases))


def unitary_from_spec(spec: str, n: int, rng: SeededRng | None = None) -> np.ndarray:
    """Build the register unitary named by a compact spec string.

    Grammar: ``haar`` | ``identity`` | ``pauli:<IXYZ string>`` |
    ``diag-phase:<comma-separated angles>`` | ``file:<path>``.

    ``haar`` needs an rng; ``pauli`` needs one letter per register qubit;
    ``diag-phase`` needs 2**n angles; ``file`` loads the JSON matrix format
    and checks unitarity.
    """
    dim = 2**n
    if spec == "haar":
        from .linalg import haar_unitary

        if rng is None:
            raise ValueError("unitary spec 'haar' requires a random stream")
        return haar_unitary(dim, rng)
    if spec == "identity":
        return np.eye(dim, dtype=np.complex128)
    if spec.startswith("pauli:"):
        label = spec[len("pauli:") :]
        if len(label) != n:
            raise ValueError(
                f"pauli spec {label!r} has {len(label)} letters, expected n={n}"
            )
        return pauli_string(label)
    if spec.startswith("diag-phase:"):
        body = spec[len("diag-phase:") :]
        try:
            phases = [float(x) for x in body.split(",")]
        except ValueError as err:
            raise ValueError(f"diag-phase spec has a non-numeric entry: {body!r}") from err
        if len(phases) != dim:
            raise ValueError(
                f"diag-phase spec has {len(phases)} angles, expected 2**n = {dim}"
            )
        return diag_phase_unitary(phases)
    if spec.startswith("file:"):
        u = load_matrix(spec[len("file:") :])
        if u.shape != (dim, dim):
            raise ValueError(f"matrix file has shape {u.shape}, expected ({dim}, {dim})")
        if not is_unitary(u, TOL_SPECTRAL):
            raise ValueError("matrix file is not unitary within tolerance")
        return u
    raise ValueError(f"unknown unitary spec {spec!r}")
