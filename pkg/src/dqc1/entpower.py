"""Entangling power of the one-clean-qubit circuit.

The circuit's power to entangle the control with the register is quantified
by E = sqrt(2 (1 - Tr rho_r^2)) of the register marginal, maximized over
pure-state realizations of the register density matrix and minimized over
decompositions of each mixed branch.  Closed forms:

* fully polarized control: sqrt(1 - |Tr U / 2^n|^2), saturated by the
  Fourier-superposition ensemble of U's eigenvectors;
* z polarization alpha: exactly alpha times the fully polarized value;
* general Bloch vector: the fully-polarized value scales by lambda_1 -
  lambda_2, the gap of the square-rooted spectrum of
  rho_c sigma_z rho_c^* sigma_z, and for a general register state it is
  sandwiched between 1 - Tr sqrt(U rho U^+ rho) and sqrt(1 - |Tr U rho|^2).

Every closed form here has an independent sampling route in this module
(ensemble_average, brute_force_entpower, brute_force_min_mixing) so the two
can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import ControlQubit, Dqc1Instance, branch_pure_state
from .linalg import (
    SIGMA_Z,
    SeededRng,
    Spectrum,
    TOL_SPECTRAL,
    eig_hermitian,
    eig_unitary,
    is_right_unitary,
    partial_trace,
    trace_sqrt_product,
)

_SQRT2 = np.sqrt(2.0)


@dataclass
class PureEnsemble:
    """Weighted pure states; columns of ``states`` are the state vectors."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.states = np.asarray(self.states, dtype=np.complex128)
        if self.weights.ndim != 1 or self.states.ndim != 2:
            raise ValueError("weights must be 1-D and states 2-D (columns)")
        if self.states.shape[1] != self.weights.size:
            raise ValueError(
                f"{self.states.shape[1]} states but {self.weights.size} weights"
            )
        if self.weights.min() <= 0.0:
            raise ValueError("ensemble weights must be positive")
        if abs(self.weights.sum() - 1.0) > TOL_SPECTRAL:
            raise ValueError(f"weights sum to {self.weights.sum()}, expected 1")
        norms = np.linalg.norm(self.states, axis=0)
        if np.max(np.abs(norms - 1.0)) > TOL_SPECTRAL:
            raise ValueError("ensemble states must be normalized")

    @property
    def size(self) -> int:
        return self.weights.size

    def density(self) -> np.ndarray:
        return (self.states * self.weights) @ self.states.conj().T


@dataclass
class BranchCoefficients:
    """Per-member amplitudes of a control-state decomposition pushed through
    the circuit: member j of the branch is x_j |0>|phi> + y_j |1>U|phi>
    with weight r_j = |x_j|^2 + |y_j|^2."""

    xs: np.ndarray
    ys: np.ndarray

    @property
    def rs(self) -> np.ndarray:
        return np.abs(self.xs) ** 2 + np.abs(self.ys) ** 2


def pure_entanglement(psi: np.ndarray) -> float:
    """sqrt(2 (1 - purity)) of the register marginal of a pure joint state.

    The state lives on control (x) register with the control factor first;
    for that cut the value lies in [0, 1] and vanishes exactly on product
    states.
    """
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.size % 2 != 0:
        raise ValueError("joint state dimension must be even (control x register)")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > TOL_SPECTRAL:
        raise ValueError(f"state is not normalized (norm {norm})")
    amp = psi.reshape(2, -1)
    rho_r = amp.T @ amp.conj()  # register marginal, control traced out
    purity = float(np.sum(np.abs(rho_r) ** 2))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def entpower_standard(u: np.ndarray) -> float:
    """Closed form sqrt(1 - |Tr U / d|^2) for a fully polarized control and
    maximally mixed register."""
    u = np.asarray(u, dtype=np.complex128)
    t = np.trace(u) / u.shape[0]
    return float(np.sqrt(max(0.0, 1.0 - abs(t) ** 2)))


def entpower_alpha(u: np.ndarray, alpha: float) -> float:
    """Linear scaling of the closed form with z polarization alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha * entpower_standard(u)


def fourier_ensemble(u: np.ndarray) -> PureEnsemble:
    """Equal-weight ensemble of Fourier superpositions of U's eigenvectors.

    Member j is d^{-1/2} sum_k e^{2 pi i jk/d} |v_k>.  The ensemble realizes
    the maximally mixed state, and every member has the same overlap
    <phi|U|phi> = Tr U / d, which is what makes it saturate the closed form.
    """
    spec = eig_unitary(u)
    d = spec.eigenvalues.size
    grid = np.arange(d)
    fourier = np.exp(2j * np.pi * np.outer(grid, grid) / d) / np.sqrt(d)
    return PureEnsemble(weights=np.full(d, 1.0 / d), states=spec.eigenvectors @ fourier)


def decompose_from_T(
    target: np.ndarray, t_mat: np.ndarray, tol: float = TOL_SPECTRAL
) -> PureEnsemble:
    """Pure-state ensemble of ``target`` selected by a right-unitary matrix.

    With eigendecomposition target = Phi M Phi^+ restricted to its support,
    the (unnormalized) members are the columns of Phi sqrt(M) T; every
    ensemble of the target arises this way for some right-unitary T.  T must
    have one row per support dimension (eigenvalues the rows do not cover
    must vanish) and satisfy T T^+ = I.
    """
    t_mat = np.asarray(t_mat, dtype=np.complex128)
    if t_mat.ndim != 2:
        raise ValueError("T must be a 2-D matrix")
    if not is_right_unitary(t_mat, 1e-10):
        raise ValueError("T rows are not orthonormal (T T^+ != I)")
    spec = eig_hermitian(np.asarray(target, dtype=np.complex128), tol)
    rows = t_mat.shape[0]
    if rows > spec.eigenvalues.size:
        raise ValueError(
            f"T has {rows} rows but the target dimension is {spec.eigenvalues.size}"
        )
    discarded = spec.eigenvalues[rows:]
    if discarded.size and discarded.max() > tol:
        raise ValueError(
            f"T has {rows} rows but the target carries weight "
            f"{discarded.max():.3e} outside their span"
        )
    if spec.eigenvalues.min() < -tol:
        raise ValueError("target has a negative eigenvalue; not a density matrix")
    kept = np.clip(spec.eigenvalues[:rows], 0.0, None)
    members = (spec.eigenvectors[:, :rows] * np.sqrt(kept)) @ t_mat
    weights = np.linalg.norm(members, axis=0) ** 2
    keep = weights > 1e-15  # columns T zeroed out carry no member
    return PureEnsemble(
        weights=weights[keep], states=members[:, keep] / np.sqrt(weights[keep])
    )


def branch_coefficients(control: ControlQubit, t_mat: np.ndarray) -> BranchCoefficients:
    """Push a control-state decomposition through the circuit.

    The control eigendecomposition Phi, M and a right-unitary T define
    decomposition members Phi sqrt(M) T[:, j]; after the Hadamard each one
    becomes x_j |0>|phi> + y_j |1>U|phi> with

        x_j = (T_1j (Phi_11 + Phi_21) sqrt(M_1)
               + T_2j (Phi_12 + Phi_22) sqrt(M_2)) / sqrt(2)

    and y_j the same with minus signs inside the parentheses.
    """
    t_mat = np.asarray(t_mat, dtype=np.complex128)
    if t_mat.ndim != 2 or t_mat.shape[0] != 2:
        raise ValueError(f"T must have exactly 2 rows, got shape {t_mat.shape}")
    if not is_right_unitary(t_mat, 1e-10):
        raise ValueError("T rows are not orthonormal (T T^+ != I)")
    vecs, vals = control.eigensystem()
    s0, s1 = np.sqrt(vals[0]), np.sqrt(vals[1])
    plus0 = (vecs[0, 0] + vecs[1, 0]) * s0
    plus1 = (vecs[0, 1] + vecs[1, 1]) * s1
    minus0 = (vecs[0, 0] - vecs[1, 0]) * s0
    minus1 = (vecs[0, 1] - vecs[1, 1]) * s1
    xs = (t_mat[0] * plus0 + t_mat[1] * plus1) / _SQRT2
    ys = (t_mat[0] * minus0 + t_mat[1] * minus1) / _SQRT2
    return BranchCoefficients(xs=xs, ys=ys)


def mixing_factor(coeffs: BranchCoefficients) -> float:
    """sum_j 2 |x_j| |y_j|: the entanglement cost of a decomposition, per
    unit of branch entanglement.  Lies in [lambda gap, 1]."""
    return float(np.sum(2.0 * np.abs(coeffs.xs) * np.abs(coeffs.ys)))


def lambda_factor(control: ControlQubit) -> float:
    """Gap lambda_1 - lambda_2 of the square-rooted spectrum of
    rho_c sigma_z rho_c^* sigma_z: the minimal mixing factor over all
    decompositions of the control state."""
    rho = control.density()
    evals = np.linalg.eigvals(rho @ SIGMA_Z @ rho.conj() @ SIGMA_Z)
    if np.max(np.abs(evals.imag)) > 1e-9:
        raise ValueError("mixing spectrum has a non-real eigenvalue")
    lam = np.sqrt(np.clip(evals.real, 0.0, None))
    lam.sort()
    return float(lam[-1] - lam[-2])


def _takagi_symmetric(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor a complex symmetric matrix as W diag(sigma) W^T, sigma >= 0
    descending, W unitary.

    Works through the real symmetric embedding [[X, Y], [Y, -X]] of
    A = X + iY: an eigenvector (u; v) with eigenvalue sigma gives the
    factor column w = u + iv.  Columns for vanishing sigma are rebuilt as an
    orthonormal completion, where the embedding pairs +0/-0 degenerately.
    """
    a = np.asarray(a, dtype=np.complex128)
    d = a.shape[0]
    if np.max(np.abs(a - a.T)) > 1e-10:
        raise ValueError("matrix is not symmetric")
    embed = np.block([[a.real, a.imag], [a.imag, -a.real]])
    evals, evecs = np.linalg.eigh(embed)
    idx = np.argsort(evals)[::-1][:d]
    sigma = evals[idx]
    w = evecs[:d, idx] + 1j * evecs[d:, idx]

    floor = 1e-12 * max(1.0, sigma[0] if sigma.size else 1.0)
    null = sigma <= floor
    if np.any(null):
        sigma = sigma.copy()
        sigma[null] = 0.0
        anchor = np.concatenate([w[:, ~null], np.eye(d, dtype=np.complex128)], axis=1)
        full = np.linalg.qr(anchor)[0]
        w = w.copy()
        w[:, null] = full[:, int(np.sum(~null)) : d]

    scale = max(1.0, float(sigma[0]) if sigma.size else 1.0)
    if np.max(np.abs(w.conj().T @ w - np.eye(d))) > 1e-9:
        raise ValueError("factor columns failed to orthonormalize")
    if np.max(np.abs(w @ np.diag(sigma) @ w.T - a)) > 1e-9 * scale:
        raise ValueError("symmetric factorization failed to reconstruct the input")
    return sigma, w


def analytic_min_T(control: ControlQubit) -> np.ndarray:
    """Right-unitary T achieving the minimal mixing factor.

    Diagonalize the symmetric matrix sqrt(M) Phi^T sigma_z Phi sqrt(M) as
    W diag(sigma) W^T; the minimizer is conj(W) followed by the phase mixer
    [[1, 1], [i, -i]]/sqrt(2), which lands every diagonal entry on
    (sigma_1 - sigma_2)/2.  For a z-polarized control this reduces to the
    real Hadamard.
    """
    vecs, vals = control.eigensystem()
    s = np.sqrt(vals)
    sym = (s[:, None] * vecs.T) @ SIGMA_Z @ (vecs * s[None, :])
    _, w = _takagi_symmetric(sym)
    mixer = np.array([[1.0, 1.0], [1.0j, -1.0j]], dtype=np.complex128) / _SQRT2
    return w.conj() @ mixer


def ensemble_average(
    inst: Dqc1Instance,
    ens: PureEnsemble,
    *,
    mixing_samples: int = 0,
    mixing_cols: int = 4,
    rng: SeededRng | None = None,
) -> float:
    """Weighted branch entanglement of the circuit over a register ensemble.

    The ensemble must realize the instance's register state.  With a fully
    z-polarized control each branch is pure and its entanglement is computed
    from the branch state's marginal purity.  Otherwise each branch is a
    rank-2 mixed state whose entanglement is its minimal decomposition
    mixing (the analytic minimizer, optionally cross-checked against
    ``mixing_samples`` random decompositions) times the pure-branch value
    sqrt(1 - |<phi|U|phi>|^2).
    """
    if np.max(np.abs(ens.density() - inst.system_state)) > TOL_SPECTRAL:
        raise ValueError("ensemble does not realize the instance's register state")

    u = inst.unitary
    if inst.control.bloch == (0.0, 0.0, 1.0):
        values = [
            pure_entanglement(branch_pure_state(ens.states[:, j], u))
            for j in range(ens.size)
        ]
        return float(np.dot(ens.weights, values))

    mix = mixing_factor(branch_coefficients(inst.control, analytic_min_T(inst.control)))
    if mixing_samples > 0:
        if rng is None:
            raise ValueError("mixing_samples > 0 requires a random stream")
        sampled = _sampled_mixing(inst.control, mixing_samples, mixing_cols, rng)
        mix = min(mix, float(sampled.min()))
    overlaps = np.einsum("ij,ij->j", ens.states.conj(), u @ ens.states)
    branch = np.sqrt(np.clip(1.0 - np.abs(overlaps) ** 2, 0.0, None))
    return float(np.dot(ens.weights, mix * branch))


def entpower_bounds(u: np.ndarray, rho_n: np.ndarray) -> tuple[float, float]:
    """Lower and upper bounds on the entangling power for an arbitrary
    register state and fully polarized control:
    1 - Tr sqrt(U rho U^+ rho) <= E_p <= sqrt(1 - |Tr(U rho)|^2)."""
    u = np.asarray(u, dtype=np.complex128)
    rho_n = np.asarray(rho_n, dtype=np.complex128)
    if u.shape != rho_n.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {rho_n.shape}")
    lower = 1.0 - trace_sqrt_product(u, rho_n)
    overlap = np.trace(u @ rho_n)
    upper = float(np.sqrt(max(0.0, 1.0 - abs(overlap) ** 2)))
    return float(lower), upper


def entpower_general_scaled(
    control: ControlQubit, u: np.ndarray, rho_n: np.ndarray
) -> tuple[float, float]:
    """The bounds of :func:`entpower_bounds` scaled by the control's
    lambda gap, valid for any control Bloch vector."""
    factor = lambda_factor(control)
    lower, upper = entpower_bounds(u, rho_n)
    return factor * lower, factor * upper


def _haar_batch(count: int, dim: int, rng: SeededRng) -> np.ndarray:
    # Batched Ginibre + QR with the phase fix applied column-wise.
    g = rng.gen.standard_normal((count, dim, dim)) + 1j * rng.gen.standard_normal(
        (count, dim, dim)
    )
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (diag / np.abs(diag))[:, None, :]


def _sampled_mixing(
    control: ControlQubit, samples: int, cols: int, rng: SeededRng
) -> np.ndarray:
    """Mixing factors of ``samples`` random right-unitary decompositions."""
    if cols < 2:
        raise ValueError(f"cols must be >= 2, got {cols}")
    t_batch = _haar_batch(samples, cols, rng)[:, :2, :]
    vecs, vals = control.eigensystem()
    s0, s1 = np.sqrt(vals[0]), np.sqrt(vals[1])
    plus0 = (vecs[0, 0] + vecs[1, 0]) * s0
    plus1 = (vecs[0, 1] + vecs[1, 1]) * s1
    minus0 = (vecs[0, 0] - vecs[1, 0]) * s0
    minus1 = (vecs[0, 1] - vecs[1, 1]) * s1
    xs = (t_batch[:, 0, :] * plus0 + t_batch[:, 1, :] * plus1) / _SQRT2
    ys = (t_batch[:, 0, :] * minus0 + t_batch[:, 1, :] * minus1) / _SQRT2
    return np.sum(2.0 * np.abs(xs) * np.abs(ys), axis=1)


def brute_force_min_mixing(
    control: ControlQubit,
    samples: int,
    cols: int,
    rng: SeededRng,
    *,
    include_analytic: bool = True,
) -> float:
    """Minimal mixing factor over random right-unitary decompositions.

    The analytic minimizer is included as a candidate by default, so the
    result equals the lambda gap up to roundoff; set
    ``include_analytic=False`` to probe how close sampling alone gets.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    best = float(_sampled_mixing(control, samples, cols, rng).min())
    if include_analytic:
        analytic = mixing_factor(branch_coefficients(control, analytic_min_T(control)))
        best = min(best, analytic)
    return best


def brute_force_entpower(
    inst: Dqc1Instance,
    samples: int,
    cols: int | None = None,
    rng: SeededRng | None = None,
) -> float:
    """Best entangling power found over random register ensembles.

    Draws ``samples`` right-unitary decompositions of the register state
    (rows = its support dimension, ``cols`` defaulting to twice the register
    dimension) and takes the largest ensemble average.  When the register is
    maximally mixed the Fourier ensemble joins the candidate list, which is
    what lets the search actually attain the closed form.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if rng is None:
        raise ValueError("brute_force_entpower requires a random stream")
    dim = inst.dim
    if cols is None:
        cols = 2 * dim
    spec = eig_hermitian(inst.system_state)
    rank = int(np.sum(spec.eigenvalues > TOL_SPECTRAL))
    if cols < rank:
        raise ValueError(f"cols ({cols}) must cover the register support ({rank})")

    best = -np.inf
    mixed = np.eye(dim, dtype=np.complex128) / dim
    if np.max(np.abs(inst.system_state - mixed)) <= TOL_SPECTRAL:
        best = ensemble_average(inst, fourier_ensemble(inst.unitary))
    for _ in range(samples):
        t_mat = _haar_batch(1, cols, rng)[0, :rank, :]
        ens = decompose_from_T(inst.system_state, t_mat)
        best = max(best, ensemble_average(inst, ens))
    return float(best)
