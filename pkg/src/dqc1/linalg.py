"""Dense complex linear algebra for small multi-qubit systems.

Everything works on plain ``numpy.ndarray`` with ``complex128`` entries.
Matrices are never wrapped in a class; validation helpers (:func:`is_unitary`,
:func:`is_density`) and explicit tolerances take the place of a type system.

Tolerances follow a three-level ladder: ``TOL_CONSTRUCT`` for exact algebraic
constructions, ``TOL_SPECTRAL`` for results of an eigensolve, and
``TOL_VERIFY`` for quantities accumulated over many samples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TOL_CONSTRUCT = 1e-12
TOL_SPECTRAL = 1e-10
TOL_VERIFY = 1e-9

#: Largest matrix dimension :func:`kron` will produce (2**12, i.e. 12 qubits).
MAX_KRON_DIM = 4096

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


class SeededRng:
    """Reproducible random stream identified by a (seed, stream) pair.

    The same pair always replays the same draw sequence.  Distinct stream
    indices under one seed give statistically independent streams, which is
    how per-point randomness in parameter sweeps stays deterministic no
    matter how the points are scheduled.

    Attributes
    ----------
    seed, stream : int
        The identifying pair.
    gen : numpy.random.Generator
        The underlying stateful generator.  Consumers draw from this.
    """

    def __init__(self, seed: int, stream: int = 0):
        if seed < 0 or stream < 0:
            raise ValueError("seed and stream must be non-negative integers")
        self.seed = int(seed)
        self.stream = int(stream)
        self.gen = np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        )

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, stream={self.stream})"


@dataclass
class Spectrum:
    """Eigenvalues with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def kron(a: np.ndarray, b: np.ndarray, *, max_dim: int = MAX_KRON_DIM) -> np.ndarray:
    """Kronecker product with a guard against runaway dimensions."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    out_dim = a.shape[0] * b.shape[0]
    if out_dim > max_dim:
        raise ValueError(
            f"kron result dimension {out_dim} exceeds the configured maximum {max_dim}"
        )
    return np.kron(a, b)


def partial_trace(
    rho: np.ndarray,
    keep: str,
    control_dim: int = 2,
    system_dim: int | None = None,
) -> np.ndarray:
    """Trace out one factor of a control (x) system bipartite operator.

    Parameters
    ----------
    rho : ndarray
        Square matrix on the product space, control factor first.
    keep : {"control", "system"}
        Which marginal to return.
    control_dim, system_dim : int
        Factor dimensions; ``system_dim`` defaults to ``dim // control_dim``.
    """
    rho = _as_square(rho, "rho")
    dim = rho.shape[0]
    if system_dim is None:
        system_dim = dim // control_dim
    if control_dim * system_dim != dim:
        raise ValueError(
            f"dimension mismatch: {control_dim} * {system_dim} != {dim}"
        )
    blocks = rho.reshape(control_dim, system_dim, control_dim, system_dim)
    if keep == "control":
        return np.trace(blocks, axis1=1, axis2=3)
    if keep == "system":
        return np.trace(blocks, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'control' or 'system', got {keep!r}")


def is_unitary(a: np.ndarray, tol: float = TOL_SPECTRAL) -> bool:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    dim = a.shape[0]
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(dim))) <= tol * dim)


def is_density(a: np.ndarray, tol: float = TOL_SPECTRAL) -> bool:
    """Hermitian, unit trace, eigenvalues >= -tol."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if np.max(np.abs(a - a.conj().T)) > tol:
        return False
    if abs(np.trace(a).real - 1.0) > tol or abs(np.trace(a).imag) > tol:
        return False
    evals = np.linalg.eigvalsh(a)
    return bool(evals.min() >= -tol)


def is_right_unitary(t: np.ndarray, tol: float = TOL_CONSTRUCT) -> bool:
    """Rows orthonormal: t @ t^dagger equals the identity on the row space."""
    t = np.asarray(t, dtype=np.complex128)
    if t.ndim != 2 or t.shape[0] > t.shape[1]:
        return False
    rows = t.shape[0]
    return bool(np.max(np.abs(t @ t.conj().T - np.eye(rows))) <= tol * t.shape[1])


def eig_hermitian(a: np.ndarray, tol: float = TOL_SPECTRAL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Ties keep the eigensolver's first-occurrence order.  Raises if the input
    is not Hermitian within ``tol``.
    """
    a = _as_square(a)
    if np.max(np.abs(a - a.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    evals, evecs = np.linalg.eigh(a)
    order = np.arange(len(evals))[::-1]  # eigh is ascending; stable reversal
    return Spectrum(evals[order].copy(), evecs[:, order].copy())


def _phase_clusters(angles: np.ndarray, gap: float) -> list[np.ndarray]:
    # Group sorted phase angles into runs closer than `gap`, merging across
    # the -pi/+pi seam.
    order = np.argsort(angles)
    clusters: list[list[int]] = [[order[0]]]
    for idx in order[1:]:
        if angles[idx] - angles[clusters[-1][-1]] <= gap:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    if len(clusters) > 1:
        wrap = angles[clusters[0][0]] + 2.0 * np.pi - angles[clusters[-1][-1]]
        if wrap <= gap:
            clusters[-1].extend(clusters.pop(0))
    return [np.array(c) for c in clusters]


def eig_unitary(u: np.ndarray, tol: float = TOL_SPECTRAL) -> Spectrum:
    """Eigendecomposition of a unitary with an orthonormal eigenbasis.

    LAPACK's general eigensolver does not promise orthogonal eigenvectors
    inside a degenerate eigenspace, so vectors whose eigenvalues sit within
    1e-8 of each other are re-orthonormalized by a QR pass.  Eigenvalues come
    back sorted by phase angle.
    """
    u = _as_square(u, "u")
    if not is_unitary(u, tol):
        raise ValueError("matrix is not unitary within tolerance")
    evals, evecs = np.linalg.eig(u)
    if np.max(np.abs(np.abs(evals) - 1.0)) > max(tol, 1e-10):
        raise ValueError("eigenvalues of a unitary must have unit modulus")

    angles = np.angle(evals)
    for cluster in _phase_clusters(angles, gap=1e-8):
        if len(cluster) > 1:
            q, _ = np.linalg.qr(evecs[:, cluster])
            evecs[:, cluster] = q
    order = np.argsort(np.mod(angles, 2.0 * np.pi), kind="stable")
    return Spectrum(evals[order].copy(), evecs[:, order].copy())


def trace_sqrt_product(u: np.ndarray, rho: np.ndarray) -> float:
    """Sum of square roots of the eigenvalues of (U rho U^dagger) rho.

    The product is similar to a positive semidefinite matrix, so its spectrum
    is real and non-negative up to roundoff; small negative dust is clamped
    and anything beyond -1e-9 is rejected as an invalid input.
    """
    u = _as_square(u, "u")
    rho = _as_square(rho, "rho")
    if u.shape != rho.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {rho.shape}")
    evals = np.linalg.eigvals((u @ rho @ u.conj().T) @ rho)
    if np.max(np.abs(evals.imag)) > TOL_VERIFY:
        raise ValueError("product spectrum has a non-real eigenvalue")
    re = evals.real
    if re.min() < -TOL_VERIFY:
        raise ValueError("product spectrum has a negative eigenvalue")
    return float(np.sum(np.sqrt(np.clip(re, 0.0, None))))


def haar_unitary(dim: int, rng: SeededRng) -> np.ndarray:
    """Haar-distributed unitary via the QR of a complex Ginibre matrix.

    The R diagonal is divided out by its phases so the distribution is
    exactly Haar rather than QR-convention biased.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    g = rng.gen.standard_normal((dim, dim)) + 1j * rng.gen.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q


def random_density(dim: int, rank: int, rng: SeededRng) -> np.ndarray:
    """Random density matrix of the given rank (Ginibre G: rho = GG^+/Tr)."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    g = rng.gen.standard_normal((dim, rank)) + 1j * rng.gen.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_right_unitary(rows: int, cols: int, rng: SeededRng) -> np.ndarray:
    """First ``rows`` rows of a Haar unitary of size ``cols``."""
    if rows > cols:
        raise ValueError(f"rows ({rows}) must not exceed cols ({cols})")
    return haar_unitary(cols, rng)[:rows, :]


def matrix_to_json(a: np.ndarray) -> dict:
    """Row-major dict form: {"dim": d, "re": [[...]], "im": [[...]]}."""
    a = _as_square(a)
    return {
        "dim": a.shape[0],
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(payload: dict) -> np.ndarray:
    for key in ("dim", "re", "im"):
        if key not in payload:
            raise ValueError(f"matrix payload missing key {key!r}")
    dim = payload["dim"]
    re = np.asarray(payload["re"], dtype=np.float64)
    im = np.asarray(payload["im"], dtype=np.float64)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(
            f"matrix payload shapes {re.shape}/{im.shape} do not match dim {dim}"
        )
    return re + 1j * im


def save_matrix(path: str | Path, a: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)) + "\n")


def load_matrix(path: str | Path) -> np.ndarray:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}: not valid JSON ({err})") from err
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return matrix_from_json(payload)
