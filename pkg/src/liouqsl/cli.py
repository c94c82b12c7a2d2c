"""Command-line front end.

Seven subcommands: evolve, qsl-report, spectral, optimal, mpemba,
krylov, and validate. Specs and reports travel as JSON, time series as
CSV with 17-significant-digit floats. Exit codes: 0 success, 1 input
validation failure, 2 numerical failure; stderr carries one structured
line naming the command and the failing quantity.
"""

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .applications import (
    coherent_gibbs_state,
    krylov_build,
    mpemba_report,
    superposition_state,
)
from .evolve import IntegratorConfig, propagate_expm, propagate_ode
from .exceptions import NumericalConsistencyError, ValidationError
from .lindblad import build_liouvillian
from .liouville import vectorize
from .optimal import (
    GeodesicSpec,
    optimal_liouvillian,
    physicality_check,
    relative_purity,
)
from .qsl import average_speed, complete_basis, exact_qsl, nonclassical_speed
from .serialize import (
    dump_json,
    load_spec,
    matrix_from_json,
    matrix_to_json,
    write_csv,
)
from .spectral import spectral_decompose, steady_state

__all__ = ["ScenarioConfig", "run", "main"]

_METHODS = {
    "expm": "matrix_exponential",
    "rk4": "rk4",
    "rk45": "rk45_adaptive",
}


@dataclass
class ScenarioConfig:
    """Everything a subcommand needs, already type-coerced."""

    command: str
    spec_path: str = None
    rho0_path: str = None
    rho_perp_path: str = None
    h_path: str = None
    t_max: float = 10.0
    points: int = 2001
    alphas: tuple = (0.25, 0.5, 0.75, 0.9)
    alpha: float = 0.5
    gamma: float = 0.01
    n: float = 0.0
    beta: float = 0.0
    seed: int = 0
    jobs: int = 1
    out: str = "./out"
    method: str = "expm"
    dump_states: bool = False

    def __post_init__(self):
        if self.t_max <= 0.0:
            raise ValidationError("t-max must be positive")
        if self.points < 3 or self.points % 2 == 0:
            raise ValidationError(
                f"points must be odd and at least 3, got {self.points}"
            )
        if self.jobs < 1:
            raise ValidationError("jobs must be at least 1")
        if self.method not in _METHODS:
            raise ValidationError(f"unknown method {self.method!r}")


def _grid(cfg):
    return np.linspace(0.0, cfg.t_max, cfg.points)


def _load_matrix(path):
    import json

    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return matrix_from_json(doc)


def _initial_state(cfg, spec):
    if cfg.rho0_path:
        return _load_matrix(cfg.rho0_path)
    if spec.dim != 2:
        raise ValidationError(
            "--alpha initial states are defined for qubit specs; "
            "pass --rho0 for other dimensions"
        )
    return superposition_state(cfg.alpha)


def _trace_rows(trace, dump_states):
    if trace.speeds is None:
        raise NumericalConsistencyError("trace speeds were never filled")
    d = trace.dim
    header = ["t", "purity", "overlap", "speed"]
    if dump_states:
        header += [f"re_{i}{j}" for i in range(d) for j in range(d)]
        header += [f"im_{i}{j}" for i in range(d) for j in range(d)]
    rows = []
    for k in range(len(trace)):
        row = [
            trace.times[k],
            trace.purities[k],
            trace.overlap_with_initial[k],
            trace.speeds[k],
        ]
        if dump_states:
            row += list(trace.states[k].real.ravel())
            row += list(trace.states[k].imag.ravel())
        rows.append(row)
    return header, rows


def _cmd_evolve(cfg):
    spec = load_spec(cfg.spec_path)
    rho0 = _initial_state(cfg, spec)
    times = _grid(cfg)
    L = build_liouvillian(spec).full
    if cfg.method == "expm":
        trace = propagate_expm(L, rho0, times)
    else:
        trace = propagate_ode(
            spec, rho0, times, IntegratorConfig(method=_METHODS[cfg.method])
        )
    average_speed(trace, L)
    header, rows = _trace_rows(trace, cfg.dump_states)
    write_csv(os.path.join(cfg.out, "trace.csv"), header, rows)
    return 0


def _cmd_qsl_report(cfg):
    spec = load_spec(cfg.spec_path)
    rho0 = _initial_state(cfg, spec)
    L = build_liouvillian(spec).full
    trace = propagate_expm(L, rho0, _grid(cfg))
    report = exact_qsl(trace, L)
    dump_json(report.to_json(), os.path.join(cfg.out, "report.json"))
    return 0


def _cmd_spectral(cfg):
    spec = load_spec(cfg.spec_path)
    L = build_liouvillian(spec).full
    sd = spectral_decompose(L)
    doc = {
        "eigenvalues": [
            {"re": float(w.real), "im": float(w.imag)} for w in sd.eigenvalues
        ],
        "condition": sd.condition,
        "timescales": [
            (1.0 / abs(w.real)) if abs(w.real) > 1e-12 else None
            for w in sd.eigenvalues
        ],
        "steady_state": matrix_to_json(steady_state(sd)),
    }
    dump_json(doc, os.path.join(cfg.out, "spectral.json"))
    return 0


def _cmd_optimal(cfg):
    rho0 = _load_matrix(cfg.rho0_path)
    rho_perp = _load_matrix(cfg.rho_perp_path)
    gs = GeodesicSpec(rho0=rho0, rho0_perp=rho_perp, gamma=cfg.gamma)
    L = optimal_liouvillian(gs)
    trace = propagate_expm(L, gs.rho0, _grid(cfg))
    report = exact_qsl(trace, L)
    weights = relative_purity(gs.rho0, trace)
    physical = physicality_check(gs.rho0, trace)
    certificate = {
        "T": report.T,
        "theta": report.theta,
        "mt_ratio": report.bound_mt / report.T,
        "nc_ratio": report.bound_nc / report.T,
        "exact_time_ratio": report.exact_time / report.T,
        "length_minus_theta": report.wootters_length - report.theta,
        "monotone_relative_purity": bool(np.all(np.diff(weights) < 0.0)),
        "physical_at_all_points": bool(np.all(physical)),
    }
    dump_json(certificate, os.path.join(cfg.out, "certificate.json"))
    header, rows = _trace_rows(trace, cfg.dump_states)
    write_csv(os.path.join(cfg.out, "trace.csv"), header, rows)
    return 0


def _cmd_mpemba(cfg):
    report = mpemba_report(
        cfg.alphas, cfg.gamma, cfg.n, cfg.t_max, cfg.points, jobs=cfg.jobs
    )
    rows = []
    for i, alpha in enumerate(report.alphas):
        for k, t in enumerate(report.times):
            rows.append(
                [alpha, t, report.eta[i], report.theta_ss[i, k], report.delta[i]]
            )
    write_csv(
        os.path.join(cfg.out, "mpemba.csv"),
        ["alpha", "t", "eta", "theta_ss", "delta"],
        rows,
    )
    dump_json(report.to_json(), os.path.join(cfg.out, "crossings.json"))
    return 0


def _cmd_krylov(cfg):
    hamiltonian = _load_matrix(cfg.h_path)
    if cfg.rho0_path:
        rho0 = _load_matrix(cfg.rho0_path)
    else:
        rho0 = coherent_gibbs_state(hamiltonian, cfg.beta)
    rho_beta = coherent_gibbs_state(hamiltonian, cfg.beta)
    times = _grid(cfg)
    kd = krylov_build(hamiltonian, rho0, times)
    d = hamiltonian.shape[0]
    eye = np.eye(d, dtype=complex)
    lh = np.kron(eye, hamiltonian) - np.kron(hamiltonian.T, eye)
    L = -1j * lh
    trace = propagate_expm(L, rho0, times)
    basis = complete_basis(trace.normalized[0])
    nc = np.array([nonclassical_speed(L, basis, s) for s in trace.normalized])
    rhs = np.concatenate([[0.0], cumulative_trapezoid(nc, times)])
    if kd.dimension > 1:
        lhs = np.arcsin(np.clip(kd.complexity / (2.0 * kd.ladder_norm), -1.0, 1.0))
    else:
        lhs = np.zeros_like(times)
    vbeta = vectorize(rho_beta)
    sff_trace = trace if cfg.rho0_path is None else propagate_expm(L, rho_beta, times)
    sff_vals = np.array(
        [float(np.real(np.vdot(vbeta, vectorize(rho)))) for rho in sff_trace.states]
    )
    rows = [
        [times[k], kd.complexity[k], sff_vals[k], lhs[k], rhs[k]]
        for k in range(times.size)
    ]
    write_csv(
        os.path.join(cfg.out, "krylov.csv"),
        ["t", "c_k", "sff", "bound_lhs", "bound_rhs"],
        rows,
    )
    return 0


def _cmd_validate(cfg):
    spec = load_spec(cfg.spec_path)
    parts = build_liouvillian(spec)
    trace_defect = float(
        np.abs(vectorize(np.eye(spec.dim, dtype=complex)).conj() @ parts.full).max()
    )
    sd = spectral_decompose(parts.full)
    print(f"spec: dim={spec.dim} jumps={len(spec.jumps)}")
    print(f"trace-preservation defect: {trace_defect:.3e}")
    print(f"spectral condition: {sd.condition:.3e}")
    if sd.size > 1:
        print(f"slowest decay rate: {abs(sd.eigenvalues[1].real):.6g}")
    return 0


_COMMANDS = {
    "evolve": _cmd_evolve,
    "qsl-report": _cmd_qsl_report,
    "spectral": _cmd_spectral,
    "optimal": _cmd_optimal,
    "mpemba": _cmd_mpemba,
    "krylov": _cmd_krylov,
    "validate": _cmd_validate,
}


def run(cfg):
    """Dispatch a validated config; returns the process exit code."""
    os.makedirs(cfg.out, exist_ok=True)
    return _COMMANDS[cfg.command](cfg)


def _add_common(sub):
    sub.add_argument("--out", default="./out", help="output directory")
    sub.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--points", type=int, default=2001)
    sub.add_argument("--t-max", type=float, default=10.0, dest="t_max")


def _parser():
    parser = argparse.ArgumentParser(
        prog="liouqsl",
        description="Speed limits for Lindblad dynamics in Liouville space",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("evolve", help="propagate a spec and dump the trace")
    p.add_argument("--spec", required=True, dest="spec_path")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--rho0", dest="rho0_path")
    p.add_argument("--method", choices=sorted(_METHODS), default="expm")
    p.add_argument("--dump-states", action="store_true", dest="dump_states")
    _add_common(p)

    p = subs.add_parser("qsl-report", help="bound report for one trajectory")
    p.add_argument("--spec", required=True, dest="spec_path")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--rho0", dest="rho0_path")
    _add_common(p)

    p = subs.add_parser("spectral", help="eigenmodes and steady state")
    p.add_argument("--spec", required=True, dest="spec_path")
    _add_common(p)

    p = subs.add_parser("optimal", help="straight-line dynamics certificate")
    p.add_argument("--rho0", required=True, dest="rho0_path")
    p.add_argument("--rho-perp", required=True, dest="rho_perp_path")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--dump-states", action="store_true", dest="dump_states")
    _add_common(p)

    p = subs.add_parser("mpemba", help="relaxation sweep for the damped qubit")
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--n", type=float, default=0.0)
    p.add_argument(
        "--alphas",
        default="0.25,0.5,0.75,0.9",
        help="comma-separated initial-state amplitudes",
    )
    _add_common(p)

    p = subs.add_parser("krylov", help="complexity and SFF columns")
    p.add_argument("--h", required=True, dest="h_path")
    p.add_argument("--rho0", dest="rho0_path")
    p.add_argument("--beta", type=float, default=0.0)
    _add_common(p)

    p = subs.add_parser("validate", help="parse and sanity-check a spec")
    p.add_argument("--spec", required=True, dest="spec_path")
    _add_common(p)
    return parser


def _config_from_args(args):
    fields = {}
    for key in (
        "command",
        "spec_path",
        "rho0_path",
        "rho_perp_path",
        "h_path",
        "t_max",
        "points",
        "alpha",
        "gamma",
        "n",
        "beta",
        "seed",
        "jobs",
        "out",
        "method",
        "dump_states",
    ):
        if hasattr(args, key):
            fields[key] = getattr(args, key)
    if hasattr(args, "alphas"):
        try:
            fields["alphas"] = tuple(
                float(a) for a in str(args.alphas).split(",") if a.strip()
            )
        except ValueError as exc:
            raise ValidationError(f"bad --alphas value {args.alphas!r}") from exc
    return ScenarioConfig(**fields)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return run(cfg)
    except ValidationError as exc:
        print(
            f"liouqsl: command={args.command} error=validation detail={exc}",
            file=sys.stderr,
        )
        return 1
    except NumericalConsistencyError as exc:
        print(
            f"liouqsl: command={args.command} error=numerical detail={exc}",
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
