"""Trajectory propagation and trajectory-level speed evaluation.

Propagators return an EvolutionTrace carrying, per grid point, the state,
its purity, the unit Liouville vector, and the overlap with the initial
unit vector. The speed column stays empty until a generator is supplied
(see the qsl module). Two derivative-free speed routes live here as well:
a central-difference evaluation on the stored trace and a Kraus-family
route that never touches the generator.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .exceptions import NumericalConsistencyError, ValidationError
from .lindblad import build_liouvillian, kraus_to_superop
from .liouville import (
    normalize_state,
    rehermitize,
    validate_density_matrix,
    vectorize,
)

__all__ = [
    "EvolutionTrace",
    "IntegratorConfig",
    "build_trace",
    "propagate_expm",
    "propagate_ode",
    "normalized_rhs",
    "projector_rhs",
    "generic_speed",
    "kraus_trajectory_speed",
]

_NORM_CAP = 1e12


@dataclass
class EvolutionTrace:
    """Per-point record of a propagated trajectory.

    speeds is None until filled (qsl.average_speed does this); all other
    arrays are aligned with times.
    """

    times: np.ndarray
    states: list
    purities: np.ndarray
    normalized: list
    overlap_with_initial: np.ndarray
    speeds: np.ndarray = None

    def __len__(self):
        return len(self.times)

    @property
    def dim(self):
        return self.states[0].shape[0]


@dataclass
class IntegratorConfig:
    method: str = "rk45_adaptive"
    step: float = None
    rtol: float = 1e-10
    atol: float = 1e-12

    def __post_init__(self):
        if self.method not in ("matrix_exponential", "rk4", "rk45_adaptive"):
            raise ValidationError(f"unknown integrator method {self.method!r}")
        if self.method == "rk45_adaptive" and (self.rtol <= 0 or self.atol <= 0):
            raise ValidationError("adaptive integration needs positive rtol and atol")
        if self.step is not None and self.step <= 0:
            raise ValidationError("step must be positive")


def _check_grid(times):
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValidationError("time grid must be 1-D with at least two points")
    if np.any(np.diff(t) <= 0):
        raise ValidationError("time grid must be strictly increasing")
    return t


def build_trace(times, states, trace_tol=1e-12, eig_floor=-1e-10):
    """Assemble an EvolutionTrace from raw states, validating each one."""
    t = _check_grid(times)
    if len(states) != t.size:
        raise ValidationError("states and times have different lengths")
    cleaned = []
    for tk, rho in zip(t, states):
        rho = rehermitize(np.asarray(rho, dtype=complex))
        try:
            validate_density_matrix(rho, trace_tol=trace_tol, eig_floor=eig_floor)
        except ValidationError as exc:
            raise ValidationError(f"state at t={tk:g}: {exc}") from exc
        cleaned.append(rho)
    normalized = [normalize_state(rho) for rho in cleaned]
    purities = np.array([s.purity for s in normalized])
    v0 = normalized[0].vector
    overlaps = np.array([np.real(np.vdot(v0, s.vector)) for s in normalized])
    if abs(overlaps[0] - 1.0) > 1e-12:
        raise NumericalConsistencyError(
            f"initial self-overlap {overlaps[0]} deviates from 1"
        )
    return EvolutionTrace(
        times=t,
        states=cleaned,
        purities=purities,
        normalized=normalized,
        overlap_with_initial=overlaps,
    )


def propagate_expm(liouvillian, rho0, times):
    """Exact propagation states[k] = unvec(exp(L t_k) vec(rho0)).

    On a uniform grid exp(L dt) is computed once and applied repeatedly;
    otherwise each output time gets its own exponential.
    """
    t = _check_grid(times)
    if abs(t[0]) > 1e-12:
        raise ValidationError("propagate_expm expects times[0] = 0")
    L = np.asarray(liouvillian, dtype=complex)
    validate_density_matrix(rho0)
    v = vectorize(np.asarray(rho0, dtype=complex))
    if L.shape != (v.size, v.size):
        raise ValidationError(
            f"generator shape {L.shape} does not act on dim {v.size} vectors"
        )
    dts = np.diff(t)
    vecs = [v]
    if np.allclose(dts, dts[0], rtol=1e-12, atol=1e-15):
        step = expm(L * dts[0])
        for _ in range(t.size - 1):
            v = step @ v
            vecs.append(v)
    else:
        for tk in t[1:]:
            vecs.append(expm(L * tk) @ vecs[0])
    states = []
    for tk, vk in zip(t, vecs):
        norm = np.linalg.norm(vk)
        if not np.isfinite(norm) or norm > _NORM_CAP:
            raise NumericalConsistencyError(f"state norm overflow at t={tk:g}")
        states.append(vk.reshape((int(np.sqrt(vk.size)),) * 2, order="F"))
    return build_trace(t, states)


def propagate_ode(spec, rho0, times, cfg=None):
    """Integrate the vectorized master equation on the given grid.

    rk4 takes fixed steps (cfg.step subdivides grid intervals when set);
    rk45_adaptive delegates to scipy's embedded pair. Positivity floors
    are relaxed to the integrator tolerance scale.
    """
    cfg = cfg or IntegratorConfig()
    t = _check_grid(times)
    validate_density_matrix(rho0)
    L = build_liouvillian(spec).full
    v0 = vectorize(np.asarray(rho0, dtype=complex))
    if cfg.method == "matrix_exponential":
        return propagate_expm(L, rho0, t)
    if cfg.method == "rk4":
        vecs = [v0]
        v = v0
        for a, b in zip(t[:-1], t[1:]):
            nsub = 1 if cfg.step is None else max(1, int(np.ceil((b - a) / cfg.step)))
            h = (b - a) / nsub
            for _ in range(nsub):
                k1 = L @ v
                k2 = L @ (v + 0.5 * h * k1)
                k3 = L @ (v + 0.5 * h * k2)
                k4 = L @ (v + h * k3)
                v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            vecs.append(v)
    else:
        from scipy.integrate import solve_ivp

        sol = solve_ivp(
            lambda _, y: L @ y,
            (t[0], t[-1]),
            v0,
            t_eval=t,
            method="RK45",
            rtol=cfg.rtol,
            atol=cfg.atol,
        )
        if not sol.success:
            raise NumericalConsistencyError(f"adaptive integration failed: {sol.message}")
        vecs = list(sol.y.T)
    d = int(np.sqrt(v0.size))
    states = [v.reshape((d, d), order="F") for v in vecs]
    return build_trace(t, states, trace_tol=1e-8, eig_floor=-1e-8)


def normalized_rhs(liouvillian, state):
    """Time derivative of the unit Liouville vector.

    Returns (L - e) v with e the symmetrized expectation
    (⟨v, Lv⟩ + ⟨v, L†v⟩)/2; Re⟨v, rhs⟩ vanishes identically.
    """
    v = state.vector
    L = np.asarray(liouvillian, dtype=complex)
    if L.shape != (v.size, v.size):
        raise ValidationError("generator and state dimensions disagree")
    lv = L @ v
    e = np.real(np.vdot(v, lv))
    return lv - e * v


def projector_rhs(liouvillian, state):
    """Time derivative of the rank-one projector onto the unit vector.

    L P + P L† - P tr[(L + L†) P]; Hermitian and traceless.
    """
    v = state.vector
    L = np.asarray(liouvillian, dtype=complex)
    if L.shape != (v.size, v.size):
        raise ValidationError("generator and state dimensions disagree")
    lv = L @ v
    lp = np.outer(lv, v.conj())
    e = 2.0 * np.real(np.vdot(v, lv))
    return lp + lp.conj().T - e * np.outer(v, v.conj())


def generic_speed(trace, k):
    """Central-difference speed at interior grid point k.

    sqrt(⟨dv/dt, dv/dt⟩ - |⟨v, dv/dt⟩|²) from the stored unit vectors;
    needs no generator, so it applies to arbitrary recorded dynamics.
    """
    if not 1 <= k <= len(trace) - 2:
        raise ValidationError(f"index {k} is not an interior grid point")
    vp = trace.normalized[k + 1].vector
    vm = trace.normalized[k - 1].vector
    v = trace.normalized[k].vector
    dv = (vp - vm) / (trace.times[k + 1] - trace.times[k - 1])
    var = np.real(np.vdot(dv, dv)) - abs(np.vdot(v, dv)) ** 2
    return np.sqrt(max(var, 0.0))


def kraus_trajectory_speed(ks_provider, rho0, t, h):
    """Speed at time t from a differentiable Kraus family.

    Normalizes each supermatrix K_t so that K_t v0 is a unit vector,
    differentiates by central differences with step h, and evaluates
    sqrt(tr(dK† dK P0) - tr(dK† P_t dK P0)) with P0, P_t the projectors
    onto the initial and current unit vectors.
    """
    if h <= 0:
        raise ValidationError("central-difference step must be positive")
    s0 = normalize_state(np.asarray(rho0, dtype=complex))
    v0 = s0.vector

    def normalized_super(tau):
        K = kraus_to_superop(ks_provider(tau))
        return K / np.linalg.norm(K @ v0)

    dK = (normalized_super(t + h) - normalized_super(t - h)) / (2.0 * h)
    vt = normalized_super(t) @ v0
    p0 = np.outer(v0, v0.conj())
    pt = np.outer(vt, vt.conj())
    var = np.trace(dK.conj().T @ dK @ p0) - np.trace(dK.conj().T @ pt @ dK @ p0)
    return np.sqrt(max(np.real(var), 0.0))
