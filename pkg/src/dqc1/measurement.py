"""Control-qubit readout: Pauli expectations, binomial shot sampling, trace
estimation from the two quadratures, and the rounds-vs-accuracy bookkeeping
that links measurement cost to extractable entanglement.

Convention established by the step-by-step simulator: for a control with z
polarization ``alpha`` and register state ``rho_n``,

    <sigma_x> = alpha * Re Tr(U rho_n),    <sigma_y> = alpha * Im Tr(U rho_n),

so the estimator inverts as (mean_x + i * mean_y) / alpha.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .circuit import Dqc1Instance, general_final_control
from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, SeededRng, TOL_CONSTRUCT

_PAULI_AXIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


@dataclass(frozen=True)
class TraceEstimate:
    """Result of a two-quadrature trace estimation run."""

    n: int
    alpha: float
    shots_x: int
    shots_y: int
    mean_x: float
    mean_y: float
    stderr_x: float
    stderr_y: float
    trace_estimate: complex


@dataclass(frozen=True)
class ErrorBudget:
    """Per-axis absolute error targets and failure probabilities."""

    eps_x: float
    eps_y: float
    pe_x: float
    pe_y: float

    @property
    def m(self) -> float:
        """Shot-count weight ln(1/pe_x)/eps_x^2 + ln(1/pe_y)/eps_y^2."""
        return (
            math.log(1.0 / self.pe_x) / self.eps_x**2
            + math.log(1.0 / self.pe_y) / self.eps_y**2
        )


def expect_pauli(rho_f: np.ndarray, axis: str) -> float:
    """Real Pauli expectation Tr(rho_f sigma_axis) of a one-qubit state."""
    rho_f = np.asarray(rho_f, dtype=np.complex128)
    if rho_f.shape != (2, 2):
        raise ValueError(f"rho_f must be 2x2, got shape {rho_f.shape}")
    if axis not in _PAULI_AXIS:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
    val = np.trace(rho_f @ _PAULI_AXIS[axis])
    return float(val.real)


def sample_shots(p: float, shots: int, rng: SeededRng) -> int:
    """Number of +1 outcomes in ``shots`` Bernoulli trials with P(+1) = p."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if p < -TOL_CONSTRUCT or p > 1.0 + TOL_CONSTRUCT:
        raise ValueError(f"probability {p} outside [0, 1]")
    p = min(1.0, max(0.0, p))
    return int(rng.gen.binomial(shots, p))


def _effective_alpha(inst: Dqc1Instance) -> float:
    # Trace readout divides by the z polarization; a transverse component
    # would mix the quadratures, so it is rejected rather than approximated.
    p1, p2, p3 = inst.control.bloch
    if p1 != 0.0 or p2 != 0.0:
        raise ValueError("trace estimation requires a z-polarized control")
    if p3 <= 0.0:
        raise ValueError("control polarization is zero; no signal to estimate")
    return p3


def estimate_trace(inst: Dqc1Instance, shots: int, rng: SeededRng) -> TraceEstimate:
    """Estimate Tr(U rho_n) from finite-shot x and y control readout.

    Each axis gets its own ``shots`` independent rounds.  For the default
    maximally mixed register this estimates the normalized trace of U.
    """
    alpha = _effective_alpha(inst)
    rho_f = general_final_control(inst.control, inst.system_state, inst.unitary)

    means, errs = [], []
    for axis in ("x", "y"):
        p_plus = (1.0 + expect_pauli(rho_f, axis)) / 2.0
        hits = sample_shots(p_plus, shots, rng)
        mean = (2.0 * hits - shots) / shots
        means.append(mean)
        if shots > 1:
            errs.append(math.sqrt(max(0.0, 1.0 - mean * mean) / (shots - 1)))
        else:
            errs.append(float("nan"))

    return TraceEstimate(
        n=inst.n,
        alpha=alpha,
        shots_x=shots,
        shots_y=shots,
        mean_x=means[0],
        mean_y=means[1],
        stderr_x=errs[0],
        stderr_y=errs[1],
        trace_estimate=complex(means[0], means[1]) / alpha,
    )


def rounds_required(eps: float, pe: float, alpha: float) -> float:
    """Circuit repetitions to hit absolute error ``eps`` on one quadrature
    with failure probability ``pe``: ln(1/pe) / (alpha^2 eps^2)."""
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not 0.0 < pe < 1.0:
        raise ValueError(f"pe must lie in (0, 1), got {pe}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return math.log(1.0 / pe) / (alpha**2 * eps**2)


def relative_error(eps: float, x: float) -> float:
    """|eps / x| as a fraction.  Zero reference is an error, not infinity."""
    if x == 0.0:
        raise ValueError("relative error is undefined for a zero reference value")
    return abs(eps / x)


def error_budget(eps_x: float, eps_y: float, pe_x: float, pe_y: float) -> ErrorBudget:
    for name, eps in (("eps_x", eps_x), ("eps_y", eps_y)):
        if eps <= 0.0:
            raise ValueError(f"{name} must be positive, got {eps}")
    for name, pe in (("pe_x", pe_x), ("pe_y", pe_y)):
        if not 0.0 < pe < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {pe}")
    return ErrorBudget(eps_x=eps_x, eps_y=eps_y, pe_x=pe_x, pe_y=pe_y)


def rounds_for_budget(budget: ErrorBudget, alpha: float, t: complex) -> float:
    """Rounds implied by a relative-error budget on the trace value ``t``.

    Each axis demands ln(1/pe) / (alpha * eps * quadrature)^2 rounds.  An
    axis whose quadrature is exactly zero is dropped with a warning; if the
    two axes disagree beyond 1e-9 relative the larger count wins, also with
    a warning, since a consistent budget should tune them equal.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    t = complex(t)
    candidates = []
    for label, eps, pe, quad in (
        ("x", budget.eps_x, budget.pe_x, t.real),
        ("y", budget.eps_y, budget.pe_y, t.imag),
    ):
        if quad == 0.0:
            warnings.warn(
                f"{label} quadrature of the target is zero; axis dropped "
                "from the round count",
                RuntimeWarning,
                stacklevel=2,
            )
            continue
        candidates.append(math.log(1.0 / pe) / (alpha * eps * quad) ** 2)
    if not candidates:
        raise ValueError("both quadratures are zero; no rounds can be assigned")
    if len(candidates) == 2:
        lo, hi = sorted(candidates)
        if hi - lo > 1e-9 * hi:
            warnings.warn(
                f"per-axis round counts disagree ({lo:.6g} vs {hi:.6g}); "
                "taking the larger",
                RuntimeWarning,
                stacklevel=2,
            )
    return max(candidates)


def entpower_from_rounds(alpha: float, m: float, rounds: float) -> float:
    """Entangling power reachable at round count ``rounds`` under shot
    budget weight ``m``: sqrt(alpha^2 - m/rounds)."""
    if rounds <= 0.0:
        raise ValueError(f"rounds must be positive, got {rounds}")
    if m < 0.0:
        raise ValueError(f"m must be non-negative, got {m}")
    val = alpha**2 - m / rounds
    if val < -TOL_CONSTRUCT:
        raise ValueError(
            f"budget m={m} is not achievable within {rounds} rounds at alpha={alpha}"
        )
    return math.sqrt(max(0.0, val))


def total_complexity(n: int, rounds: float) -> float:
    """Gate-count proxy: register size times rounds."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if rounds <= 0.0:
        raise ValueError(f"rounds must be positive, got {rounds}")
    return n * rounds
