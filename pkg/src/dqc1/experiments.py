"""Config-driven parameter sweeps with deterministic per-point randomness.

A run is described by a JSON config (strictly validated: unknown keys are
rejected).  Every parameter point draws from its own random stream keyed by
(seed, point index), so results are byte-identical for a given config and
seed no matter how many workers execute the sweep or in which order points
finish.

The reference column of every row comes from a closed form, never from
sampling, so the deviation column isolates statistical error.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .circuit import ControlQubit, Dqc1Instance, unitary_from_spec
from .entpower import (
    brute_force_entpower,
    brute_force_min_mixing,
    decompose_from_T,
    ensemble_average,
    entpower_alpha,
    entpower_bounds,
    entpower_standard,
    fourier_ensemble,
    lambda_factor,
)
from .linalg import SeededRng, is_density, load_matrix, random_density, random_right_unitary
from .measurement import (
    entpower_from_rounds,
    error_budget,
    estimate_trace,
    rounds_for_budget,
)

EXPERIMENTS = (
    "trace-vs-shots",
    "entpower-vs-alpha",
    "complexity-curve",
    "verify-theorem1",
    "verify-theorem2",
    "verify-theorem3",
)

DEFAULT_ALPHAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

_HEADER = ("experiment", "param_name", "param_value", "measured", "reference", "deviation", "seed")


class ConfigError(ValueError):
    """A config that fails schema validation; the message names the field."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int
    alpha: float = 1.0
    bloch: tuple[float, float, float] | None = None
    unitary: str = "haar"
    rho: str = "maximally-mixed"
    shots: tuple[int, ...] = ()
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    samples: int = 100
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    workers: int | None = None


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    param_name: str
    param_value: float
    measured: float
    reference: float
    deviation: float
    seed: int

    @classmethod
    def build(cls, experiment, param_name, param_value, measured, reference, seed):
        return cls(
            experiment=experiment,
            param_name=param_name,
            param_value=float(param_value),
            measured=float(measured),
            reference=float(reference),
            deviation=abs(float(measured) - float(reference)),
            seed=int(seed),
        )


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_real(x) -> bool:
    return _is_int(x) or isinstance(x, float)


def config_from_dict(payload: dict) -> ExperimentConfig:
    """Validate a config dict; every failure names the offending field."""
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    allowed = {f for f in ExperimentConfig.__dataclass_fields__}
    unknown = sorted(set(payload) - allowed)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    if "experiment" not in payload:
        raise ConfigError("missing required field 'experiment'")
    experiment = payload["experiment"]
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"field 'experiment': {experiment!r} is not one of {', '.join(EXPERIMENTS)}"
        )

    if "n" not in payload:
        raise ConfigError("missing required field 'n'")
    n = payload["n"]
    if not _is_int(n):
        raise ConfigError(f"field 'n': expected an integer, got {n!r}")
    if not 1 <= n <= 10:
        raise ConfigError(f"field 'n': {n} outside the supported range [1, 10]")

    if "alpha" in payload and "bloch" in payload:
        raise ConfigError("fields 'alpha' and 'bloch' are mutually exclusive")

    alpha = payload.get("alpha", 1.0)
    if not _is_real(alpha) or not 0.0 < float(alpha) <= 1.0:
        raise ConfigError(f"field 'alpha': expected a number in (0, 1], got {alpha!r}")
    alpha = float(alpha)

    bloch = payload.get("bloch")
    if bloch is not None:
        if not isinstance(bloch, list) or len(bloch) != 3 or not all(
            _is_real(x) for x in bloch
        ):
            raise ConfigError(f"field 'bloch': expected three numbers, got {bloch!r}")
        if math.sqrt(sum(float(x) ** 2 for x in bloch)) > 1.0 + 1e-12:
            raise ConfigError("field 'bloch': vector norm exceeds 1")
        bloch = tuple(float(x) for x in bloch)

    unitary = payload.get("unitary", "haar")
    if not isinstance(unitary, str) or not unitary:
        raise ConfigError(f"field 'unitary': expected a spec string, got {unitary!r}")

    rho = payload.get("rho", "maximally-mixed")
    if not isinstance(rho, str) or not _valid_rho_spec(rho):
        raise ConfigError(
            f"field 'rho': expected 'maximally-mixed', 'random', 'random:<rank>' "
            f"or 'file:<path>', got {rho!r}"
        )

    shots = payload.get("shots", [])
    if not isinstance(shots, list) or not all(_is_int(x) and x >= 1 for x in shots):
        raise ConfigError(f"field 'shots': expected a list of positive integers, got {shots!r}")
    if experiment in ("trace-vs-shots", "complexity-curve") and not shots:
        raise ConfigError(f"field 'shots': required and nonempty for {experiment}")

    alphas = payload.get("alphas", list(DEFAULT_ALPHAS))
    if (
        not isinstance(alphas, list)
        or not alphas
        or not all(_is_real(x) and 0.0 < float(x) <= 1.0 for x in alphas)
    ):
        raise ConfigError(
            f"field 'alphas': expected a nonempty list of numbers in (0, 1], got {alphas!r}"
        )

    samples = payload.get("samples", 100)
    if not _is_int(samples) or samples < 1:
        raise ConfigError(f"field 'samples': expected a positive integer, got {samples!r}")

    seed = payload.get("seed", 0)
    if not _is_int(seed) or seed < 0:
        raise ConfigError(f"field 'seed': expected a non-negative integer, got {seed!r}")

    out = payload.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"field 'out': expected a path string, got {out!r}")

    fmt = payload.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"field 'format': expected 'csv' or 'json', got {fmt!r}")

    workers = payload.get("workers")
    if workers is not None and (not _is_int(workers) or workers < 1):
        raise ConfigError(f"field 'workers': expected a positive integer, got {workers!r}")

    return ExperimentConfig(
        experiment=experiment,
        n=n,
        alpha=alpha,
        bloch=bloch,
        unitary=unitary,
        rho=rho,
        shots=tuple(shots),
        alphas=tuple(float(x) for x in alphas),
        samples=samples,
        seed=seed,
        out=out,
        format=fmt,
        workers=workers,
    )


def parse_config(text: str) -> ExperimentConfig:
    """Parse JSON config text; decode errors keep their line/column info."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from None
    return config_from_dict(payload)


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def _valid_rho_spec(spec: str) -> bool:
    if spec in ("maximally-mixed", "random"):
        return True
    if spec.startswith("random:"):
        return spec[len("random:") :].isdigit()
    return spec.startswith("file:")


def _control_from(cfg: ExperimentConfig) -> ControlQubit:
    if cfg.bloch is not None:
        return ControlQubit.from_bloch(cfg.bloch)
    return ControlQubit.from_alpha(cfg.alpha)


def _rho_from_spec(spec: str, n: int, rng: SeededRng) -> np.ndarray:
    dim = 2**n
    if spec == "maximally-mixed":
        return np.eye(dim, dtype=np.complex128) / dim
    if spec == "random":
        return random_density(dim, dim, rng)
    if spec.startswith("random:"):
        rank = int(spec[len("random:") :])
        return random_density(dim, rank, rng)
    rho = load_matrix(spec[len("file:") :])
    if rho.shape != (dim, dim) or not is_density(rho):
        raise ValueError(f"register file {spec!r} is not a {dim}x{dim} density matrix")
    return rho


# --- sweep machinery ---------------------------------------------------------


def _point_count(cfg: ExperimentConfig) -> int:
    if cfg.experiment in ("trace-vs-shots", "complexity-curve"):
        return len(cfg.shots)
    if cfg.experiment in ("entpower-vs-alpha", "verify-theorem2"):
        return len(cfg.alphas)
    if cfg.experiment == "verify-theorem1":
        return cfg.samples + 1  # Fourier row, then sampled ensembles
    if cfg.experiment == "verify-theorem3":
        return cfg.samples + 3  # sampled pairs, then the three lambda anchors
    raise ValueError(f"unknown experiment {cfg.experiment!r}")


def _point_label(cfg: ExperimentConfig, idx: int) -> str:
    if cfg.experiment in ("trace-vs-shots", "complexity-curve"):
        return f"shots={cfg.shots[idx]}"
    if cfg.experiment in ("entpower-vs-alpha", "verify-theorem2"):
        return f"alpha={cfg.alphas[idx]}"
    if cfg.experiment == "verify-theorem1":
        return "fourier" if idx == 0 else f"sample={idx}"
    lambda_names = ("lambda_pure", "lambda_alpha", "lambda_mixed")
    if idx >= cfg.samples:
        return lambda_names[idx - cfg.samples]
    return f"sample={idx}"


def _setup(cfg: ExperimentConfig) -> dict:
    if cfg.experiment in ("verify-theorem2", "verify-theorem3"):
        return {}
    u = unitary_from_spec(cfg.unitary, cfg.n, SeededRng(cfg.seed, 0))
    return {"u": u}


def _point_trace_vs_shots(cfg, payload, idx):
    u = payload["u"]
    shots = cfg.shots[idx]
    inst = Dqc1Instance(n=cfg.n, unitary=u, control=_control_from(cfg))
    est = estimate_trace(inst, shots, SeededRng(cfg.seed, idx + 1))
    t_ref = complex(np.trace(u @ inst.system_state))
    return [
        ("shots_re", shots, est.trace_estimate.real, t_ref.real),
        ("shots_im", shots, est.trace_estimate.imag, t_ref.imag),
    ]


def _point_entpower_vs_alpha(cfg, payload, idx):
    u = payload["u"]
    a = cfg.alphas[idx]
    inst = Dqc1Instance(n=cfg.n, unitary=u, control=ControlQubit.from_alpha(a))
    measured = brute_force_entpower(
        inst, samples=cfg.samples, rng=SeededRng(cfg.seed, idx + 1)
    )
    return [("alpha", a, measured, entpower_alpha(u, a))]


def _point_complexity_curve(cfg, payload, idx):
    u = payload["u"]
    rounds_target = cfg.shots[idx]
    alpha = cfg.alpha
    t = complex(np.trace(u)) / (2**cfg.n)
    if t.real == 0.0 or t.imag == 0.0:
        raise ValueError(
            "complexity-curve needs both trace quadratures nonzero; "
            f"got t = {t}"
        )
    # Failure probability 1/e per axis makes ln(1/pe) = 1; the eps values
    # are tuned so both axes land on the same round count.
    pe = math.exp(-1.0)
    eps_x = 1.0 / (alpha * math.sqrt(rounds_target) * abs(t.real))
    eps_y = 1.0 / (alpha * math.sqrt(rounds_target) * abs(t.imag))
    budget = error_budget(eps_x, eps_y, pe, pe)
    rounds = rounds_for_budget(budget, alpha, t)
    measured = entpower_from_rounds(alpha, budget.m, rounds)
    return [("rounds", rounds_target, measured, entpower_alpha(u, alpha))]


def _point_verify_theorem1(cfg, payload, idx):
    u = payload["u"]
    dim = 2**cfg.n
    inst = Dqc1Instance(n=cfg.n, unitary=u, control=ControlQubit.from_alpha(1.0))
    reference = entpower_standard(u)
    if idx == 0:
        measured = ensemble_average(inst, fourier_ensemble(u))
        return [("fourier", 0, measured, reference)]
    rng = SeededRng(cfg.seed, idx)
    t_mat = random_right_unitary(dim, 2 * dim, rng)
    ens = decompose_from_T(inst.system_state, t_mat)
    return [("sample", idx, ensemble_average(inst, ens), reference)]


def _point_verify_theorem2(cfg, payload, idx):
    a = cfg.alphas[idx]
    measured = brute_force_min_mixing(
        ControlQubit.from_alpha(a), cfg.samples, cols=4, rng=SeededRng(cfg.seed, idx + 1)
    )
    return [("alpha", a, measured, a)]


def _point_verify_theorem3(cfg, payload, idx):
    if idx >= cfg.samples:
        anchors = (
            ("lambda_pure", 1.0, ControlQubit.from_bloch((0.0, 0.0, 1.0))),
            ("lambda_alpha", cfg.alpha, ControlQubit.from_alpha(cfg.alpha)),
            ("lambda_mixed", 0.0, ControlQubit.from_bloch((0.0, 0.0, 0.0))),
        )
        name, reference, control = anchors[idx - cfg.samples]
        return [(name, reference, lambda_factor(control), reference)]
    rng = SeededRng(cfg.seed, idx + 1)
    u = unitary_from_spec(cfg.unitary, cfg.n, rng)
    rho = _rho_from_spec(cfg.rho, cfg.n, rng)
    lower, upper = entpower_bounds(u, rho)
    return [("sample", idx, lower, upper)]


_POINT_FUNCS = {
    "trace-vs-shots": _point_trace_vs_shots,
    "entpower-vs-alpha": _point_entpower_vs_alpha,
    "complexity-curve": _point_complexity_curve,
    "verify-theorem1": _point_verify_theorem1,
    "verify-theorem2": _point_verify_theorem2,
    "verify-theorem3": _point_verify_theorem3,
}


def _eval_point(args: tuple) -> list[tuple]:
    cfg, payload, idx = args
    try:
        return _POINT_FUNCS[cfg.experiment](cfg, payload, idx)
    except Exception as err:
        raise RuntimeError(
            f"{cfg.experiment} failed at point {idx} ({_point_label(cfg, idx)}): {err}"
        ) from err


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Evaluate every parameter point and return rows in point order."""
    payload = _setup(cfg)
    count = _point_count(cfg)
    tasks = [(cfg, payload, idx) for idx in range(count)]
    workers = cfg.workers if cfg.workers is not None else (os.cpu_count() or 1)
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=min(workers, count)) as pool:
            outputs = list(pool.map(_eval_point, tasks))
    else:
        outputs = [_eval_point(task) for task in tasks]
    rows = []
    for out in outputs:
        for name, value, measured, reference in out:
            rows.append(
                ResultRow.build(cfg.experiment, name, value, measured, reference, cfg.seed)
            )
    return rows


# --- result I/O --------------------------------------------------------------


def _fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def write_results(rows: list[ResultRow], path: str | Path, fmt: str = "csv") -> None:
    """Write rows as CSV (17 significant digits) or JSON.  Both round-trip
    float-exactly; an empty run still writes the CSV header."""
    path = Path(path)
    if fmt == "csv":
        lines = [",".join(_HEADER)]
        for row in rows:
            lines.append(
                ",".join(
                    (
                        row.experiment,
                        row.param_name,
                        _fmt_real(row.param_value),
                        _fmt_real(row.measured),
                        _fmt_real(row.reference),
                        _fmt_real(row.deviation),
                        str(row.seed),
                    )
                )
            )
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        path.write_text(json.dumps([asdict(row) for row in rows], indent=2) + "\n")
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def read_results(path: str | Path, fmt: str | None = None) -> list[ResultRow]:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "csv"
    if fmt == "json":
        payload = json.loads(path.read_text())
        return [ResultRow(**entry) for entry in payload]
    rows = []
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if tuple(header) != _HEADER:
            raise ValueError(f"unexpected CSV header: {header}")
        for rec in reader:
            rows.append(
                ResultRow(
                    experiment=rec[0],
                    param_name=rec[1],
                    param_value=float(rec[2]),
                    measured=float(rec[3]),
                    reference=float(rec[4]),
                    deviation=float(rec[5]),
                    seed=int(rec[6]),
                )
            )
    return rows
