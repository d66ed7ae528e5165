"""Command-line front end.

Subcommands: ``run`` (config-driven sweep), ``estimate-trace`` (one
finite-shot estimation), ``entpower`` (closed-form entangling power), and
``verify`` (self-checks of the three closed-form results against sampling).

Exit codes: 0 success, 2 invalid input (bad flags, bad config, bad files),
1 runtime failure (including a failed verification).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .circuit import ControlQubit, Dqc1Instance, unitary_from_spec
from .entpower import entpower_alpha
from .experiments import (
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    run_experiment,
    write_results,
)
from .linalg import SeededRng
from .measurement import estimate_trace

_F = "{:.17g}".format


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqc1",
        description="One-clean-qubit circuit simulation and analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config-driven parameter sweep")
    p_run.add_argument("config", help="path to a JSON experiment config")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", default=None, help="override the output path")
    p_run.add_argument("--format", choices=("csv", "json"), default=None)
    p_run.add_argument("--n", type=int, default=None, help="override the register size")
    p_run.add_argument("--alpha", type=float, default=None, help="override the polarization")
    p_run.add_argument("--shots", default=None, help="override the shots grid (comma-separated)")

    p_est = sub.add_parser("estimate-trace", help="finite-shot trace estimation")
    p_est.add_argument("--n", type=int, required=True)
    p_est.add_argument("--alpha", type=float, default=1.0)
    p_est.add_argument("--unitary", default="haar")
    p_est.add_argument("--shots", type=int, required=True)
    p_est.add_argument("--seed", type=int, default=0)

    p_ep = sub.add_parser("entpower", help="closed-form entangling power")
    p_ep.add_argument("--n", type=int, required=True)
    p_ep.add_argument("--alpha", type=float, default=1.0)
    p_ep.add_argument("--unitary", default="haar")
    p_ep.add_argument("--seed", type=int, default=0)

    p_ver = sub.add_parser("verify", help="check a closed form against sampling")
    p_ver.add_argument("target", choices=("theorem1", "theorem2", "theorem3"))
    p_ver.add_argument("--n", type=int, default=2)
    p_ver.add_argument("--samples", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--alpha", type=float, default=0.6)
    p_ver.add_argument("--unitary", default="haar")
    return parser


def _cmd_run(args) -> int:
    from pathlib import Path

    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from None
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.out is not None:
        payload["out"] = args.out
    if args.format is not None:
        payload["format"] = args.format
    if args.n is not None:
        payload["n"] = args.n
    if args.alpha is not None:
        payload.pop("bloch", None)
        payload["alpha"] = args.alpha
    if args.shots is not None:
        try:
            payload["shots"] = [int(x) for x in args.shots.split(",")]
        except ValueError:
            raise ConfigError(f"--shots must be comma-separated integers, got {args.shots!r}")
    cfg = config_from_dict(payload)
    rows = run_experiment(cfg)
    out = cfg.out if cfg.out is not None else f"results.{cfg.format}"
    write_results(rows, out, cfg.format)
    print(f"{cfg.experiment}: wrote {len(rows)} rows to {out}")
    return 0


def _cmd_estimate_trace(args) -> int:
    u = unitary_from_spec(args.unitary, args.n, SeededRng(args.seed, 0))
    inst = Dqc1Instance(
        n=args.n, unitary=u, control=ControlQubit.from_alpha(args.alpha)
    )
    est = estimate_trace(inst, args.shots, SeededRng(args.seed, 1))
    exact = complex(np.trace(u)) / (2**args.n)
    err = abs(est.trace_estimate - exact)
    print(f"n={args.n} alpha={_F(args.alpha)} shots={args.shots} seed={args.seed}")
    print(f"estimate  re={_F(est.trace_estimate.real)} im={_F(est.trace_estimate.imag)}")
    print(f"exact     re={_F(exact.real)} im={_F(exact.imag)}")
    print(f"abs_error {_F(err)}  stderr_x {_F(est.stderr_x)}  stderr_y {_F(est.stderr_y)}")
    return 0


def _cmd_entpower(args) -> int:
    u = unitary_from_spec(args.unitary, args.n, SeededRng(args.seed, 0))
    t = complex(np.trace(u)) / (2**args.n)
    value = entpower_alpha(u, args.alpha)
    print(f"n={args.n} alpha={_F(args.alpha)} unitary={args.unitary}")
    print(f"normalized_trace re={_F(t.real)} im={_F(t.imag)} abs={_F(abs(t))}")
    print(f"entangling_power {_F(value)}")
    return 0


def _cmd_verify(args) -> int:
    experiment = {
        "theorem1": "verify-theorem1",
        "theorem2": "verify-theorem2",
        "theorem3": "verify-theorem3",
    }[args.target]
    cfg = ExperimentConfig(
        experiment=experiment,
        n=args.n,
        alpha=args.alpha,
        unitary=args.unitary,
        rho="random" if experiment == "verify-theorem3" else "maximally-mixed",
        samples=args.samples,
        seed=args.seed,
    )
    rows = run_experiment(cfg)
    failures = 0

    def report(label: str, ok: bool):
        nonlocal failures
        print(f"{args.target}: {label}: {'PASS' if ok else 'FAIL'}")
        if not ok:
            failures += 1

    if experiment == "verify-theorem1":
        fourier = next(r for r in rows if r.param_name == "fourier")
        sampled = [r for r in rows if r.param_name == "sample"]
        report(
            f"Fourier ensemble deviation {fourier.deviation:.3e} (tol 1e-9)",
            fourier.deviation <= 1e-9,
        )
        below = sum(1 for r in sampled if r.measured <= r.reference + 1e-9)
        report(
            f"{below}/{len(sampled)} sampled ensembles at or below the closed form",
            below == len(sampled),
        )
    elif experiment == "verify-theorem2":
        worst = max(r.deviation for r in rows)
        report(
            f"minimal mixing matches alpha at {len(rows)} polarizations "
            f"(worst deviation {worst:.3e}, tol 1e-9)",
            worst <= 1e-9,
        )
    else:
        sampled = [r for r in rows if r.param_name == "sample"]
        ordered = sum(1 for r in sampled if r.measured <= r.reference + 1e-9)
        report(
            f"{ordered}/{len(sampled)} sampled pairs keep lower <= upper",
            ordered == len(sampled),
        )
        anchors = [r for r in rows if r.param_name.startswith("lambda_")]
        worst = max(r.deviation for r in anchors)
        report(
            f"lambda anchors (pure/alpha/mixed) worst deviation {worst:.3e} (tol 1e-12)",
            worst <= 1e-12,
        )
    return 0 if failures == 0 else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    commands = {
        "run": _cmd_run,
        "estimate-trace": _cmd_estimate_trace,
        "entpower": _cmd_entpower,
        "verify": _cmd_verify,
    }
    try:
        return commands[args.command](args)
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # anything else is a runtime failure
        print(f"runtime error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
