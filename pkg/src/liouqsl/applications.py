"""Showcase analyses: spectral form factor, Krylov complexity, and the
dissipative Mpemba effect for a damped qubit.

The qubit closed forms (state, angles to the initial and steady states,
speed, operator norm) are transcribed for the thermal amplitude-damping
model with rate gamma and bath occupation n; they act as oracles for the
numerical pipeline. The SFF and Krylov sections bound spectral-form-
factor decay and complexity growth by the integrated non-classical
speed, plus the complementary trade-off between the two.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import expm

from .exceptions import (
    NumericalConsistencyError,
    QuadratureError,
    ValidationError,
)
from .evolve import propagate_expm
from .lindblad import LindbladSpec, build_liouvillian
from .liouville import (
    liouville_angle,
    normalize_state,
    validate_density_matrix,
    vectorize,
)
from .qsl import (
    complete_basis,
    mt_bound,
    nonclassical_speed,
    speed_efficiency,
)

__all__ = [
    "KrylovData",
    "MpembaReport",
    "coherent_gibbs_state",
    "sff",
    "sff_bound_check",
    "krylov_build",
    "krylov_complexity",
    "krylov_bound_check",
    "krylov_precursor_margins",
    "tradeoff_check",
    "amplitude_damping_spec",
    "superposition_state",
    "amplitude_damping_closed_forms",
    "mpemba_report",
]


def coherent_gibbs_state(hamiltonian, beta):
    """Pure state with Boltzmann-weighted amplitudes in the energy basis.

    |psi> = Z^{-1/2} sum_n e^{-beta E_n / 2} |n>; returns the projector.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if np.abs(h - h.conj().T).max() > 1e-12:
        raise ValidationError("hamiltonian is not Hermitian")
    if beta < 0.0:
        raise ValidationError("beta must be nonnegative")
    energies, vectors = np.linalg.eigh(h)
    weights = np.exp(-0.5 * beta * (energies - energies.min()))
    psi = vectors @ (weights / np.linalg.norm(weights))
    return np.outer(psi, psi.conj())


def sff(channel, hamiltonian, beta, t):
    """Overlap tr(rho_beta E_t(rho_beta)) for a channel supermatrix family."""
    rho = coherent_gibbs_state(hamiltonian, beta)
    out = channel(t) @ vectorize(rho)
    d = rho.shape[0]
    evolved = out.reshape((d, d), order="F")
    validate_density_matrix(evolved, trace_tol=1e-8, eig_floor=-1e-8)
    return float(np.real(np.trace(rho @ evolved)))


def _nc_integral(trace, liouvillian, basis):
    if basis is None:
        basis = complete_basis(trace.normalized[0])
    L = np.asarray(liouvillian, dtype=complex)
    nc = np.array([nonclassical_speed(L, basis, s) for s in trace.normalized])
    return float(simpson(nc, x=trace.times))


def sff_bound_check(trace, liouvillian, basis=None):
    """Bound on the overlap decay of a trace started from a pure state.

    lhs = arccos(overlap(T)/sqrt(purity_T)), rhs = integral of the
    non-classical speed; lhs never exceeds rhs.
    """
    rho0 = trace.states[0]
    rhoT = trace.states[-1]
    overlap = float(np.real(np.trace(rho0 @ rhoT)))
    lhs = float(np.arccos(np.clip(overlap / np.sqrt(trace.purities[-1]), -1.0, 1.0)))
    return lhs, _nc_integral(trace, liouvillian, basis)


@dataclass
class KrylovData:
    """Lanczos basis and occupation amplitudes for Hamiltonian dynamics.

    basis holds the orthonormal vectors |K_n)) as columns; amplitudes has
    one row per time with phi_n(t) = (-i)^n (K_n|rho_t~); complexity is
    sum_n n |phi_n|² per time.
    """

    basis: np.ndarray
    lanczos_b: np.ndarray
    times: np.ndarray
    amplitudes: np.ndarray
    complexity: np.ndarray

    @property
    def dimension(self):
        return self.basis.shape[1]

    @property
    def ladder_norm(self):
        """Operator norm of the index operator: the largest Krylov index."""
        return float(self.dimension - 1)


def krylov_build(hamiltonian, rho0, times):
    """Lanczos basis of the commutator generator plus amplitudes in time.

    Runs the recursion on L_H = 1 kron H - H^T kron 1 from the unit
    vector of rho0 with full reorthogonalization, stopping when the
    off-diagonal coefficient falls below 1e-12; then propagates under
    exp(-i L_H t) and projects onto the basis.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if np.abs(h - h.conj().T).max() > 1e-12:
        raise ValidationError("hamiltonian is not Hermitian")
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) <= 0):
        raise ValidationError("times must be a strictly increasing 1-D grid")
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    lh = np.kron(eye, h) - np.kron(h.T, eye)
    validate_density_matrix(rho0)
    v0 = normalize_state(np.asarray(rho0, dtype=complex)).vector

    cols = [v0]
    bs = []
    prev = np.zeros_like(v0)
    b_prev = 0.0
    for _ in range(d * d - 1):
        q = cols[-1]
        r = lh @ q - b_prev * prev
        r -= q * np.vdot(q, r)
        qm = np.column_stack(cols)
        for _ in range(2):
            r -= qm @ (qm.conj().T @ r)
        b = np.linalg.norm(r)
        if b < 1e-12:
            break
        bs.append(float(b))
        prev = q
        b_prev = b
        cols.append(r / b)
    basis = np.column_stack(cols)

    dts = np.diff(t)
    vecs = [v0]
    if t.size > 1 and np.allclose(dts, dts[0], rtol=1e-12, atol=1e-15):
        step = expm(-1j * lh * dts[0])
        v = v0
        for _ in range(t.size - 1):
            v = step @ v
            vecs.append(v)
    else:
        for tk in t[1:]:
            vecs.append(expm(-1j * lh * tk) @ v0)
    phases = (-1j) ** np.arange(basis.shape[1])
    amps = np.array([phases * (basis.conj().T @ v) for v in vecs])
    norms = np.sum(np.abs(amps) ** 2, axis=1)
    if np.abs(norms - 1.0).max() > 1e-10:
        raise NumericalConsistencyError(
            f"Krylov amplitudes lose norm by {np.abs(norms - 1.0).max():.3e}"
        )
    indices = np.arange(basis.shape[1])
    complexity = np.sum(indices * np.abs(amps) ** 2, axis=1)
    return KrylovData(
        basis=basis,
        lanczos_b=np.array(bs),
        times=t,
        amplitudes=amps,
        complexity=complexity,
    )


def krylov_complexity(kd, t):
    """Mean Krylov index at a grid time."""
    k = int(np.argmin(np.abs(kd.times - t)))
    if abs(kd.times[k] - t) > 1e-9 * max(1.0, abs(t)):
        raise ValidationError(f"time {t} is not on the Krylov grid")
    return float(kd.complexity[k])


def krylov_precursor_margins(kd, trace):
    """Per-point slack of C_K²/(4 norm²) ≤ 1 - overlap²."""
    if kd.dimension == 1:
        return 1.0 - trace.overlap_with_initial**2
    ck_term = (kd.complexity / (2.0 * kd.ladder_norm)) ** 2
    return 1.0 - trace.overlap_with_initial**2 - ck_term


def krylov_bound_check(kd, trace, liouvillian, basis=None):
    """Complexity-growth bound against the integrated non-classical speed.

    lhs = arcsin(C_K(T)/(2 norm)), rhs = integral of the non-classical
    speed; also verifies the pointwise precursor inequality feeding the
    arcsin step.
    """
    if len(trace) != kd.times.size or np.abs(trace.times - kd.times).max() > 1e-9:
        raise ValidationError("trace and Krylov data live on different grids")
    margins = krylov_precursor_margins(kd, trace)
    if margins.min() < -1e-8:
        raise NumericalConsistencyError(
            f"precursor inequality violated by {-margins.min():.3e}"
        )
    if kd.dimension == 1:
        lhs = 0.0
    else:
        ratio = kd.complexity[-1] / (2.0 * kd.ladder_norm)
        lhs = float(np.arcsin(np.clip(ratio, -1.0, 1.0)))
    return lhs, _nc_integral(trace, liouvillian, basis)


def tradeoff_check(kd, sff_values):
    """Maximum of C_K²/(4 norm²) + SFF² over the grid; at most 1."""
    vals = np.asarray(sff_values, dtype=float)
    if vals.shape != kd.times.shape:
        raise ValidationError("SFF values and Krylov grid have different lengths")
    if kd.dimension == 1:
        return float(np.max(vals**2))
    ck_term = (kd.complexity / (2.0 * kd.ladder_norm)) ** 2
    return float(np.max(ck_term + vals**2))


def amplitude_damping_spec(gamma, n):
    """Thermal damping qubit: H = 0, decay rate gamma(1+n), pumping gamma n."""
    if gamma <= 0.0:
        raise ValidationError("gamma must be positive")
    if n < 0.0:
        raise ValidationError("bath occupation n must be nonnegative")
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    raise_ = lower.conj().T
    jumps = [(gamma * (1.0 + n), lower)]
    if n > 0.0:
        jumps.append((gamma * n, raise_))
    return LindbladSpec(hamiltonian=np.zeros((2, 2), dtype=complex), jumps=jumps)


def superposition_state(alpha):
    """Projector onto alpha|0> + sqrt(1-alpha²)|1>."""
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha {alpha} outside [0, 1]")
    psi = np.array([alpha, np.sqrt(1.0 - alpha**2)], dtype=complex)
    return np.outer(psi, psi.conj())


def amplitude_damping_closed_forms(alpha, gamma, n, t):
    """Closed-form state, angles, speed, and norm for the damped qubit.

    Returns a dict with rho_t, theta_0t (angle to the initial state),
    theta_ss_t (angle to the steady state), speed, and opnorm. A
    denominator underflow (removable t -> 0 limits) falls back to an
    epsilon-shifted evaluation.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha {alpha} outside [0, 1]")
    if gamma <= 0.0 or n < 0.0 or t < 0.0:
        raise ValidationError("need gamma > 0, n >= 0, t >= 0")
    a2 = alpha * alpha
    m = 2.0 * n + 1.0
    eh = np.exp(0.5 * gamma * m * t)
    e = eh * eh
    edec = 1.0 / e

    rho = np.empty((2, 2), dtype=complex)
    rho[0, 0] = (n + edec * (a2 + n * (2.0 * a2 - 1.0) - 1.0) + 1.0) / m
    rho[0, 1] = np.sqrt(edec) * alpha * np.sqrt(1.0 - a2)
    rho[1, 0] = rho[0, 1]
    rho[1, 1] = edec * (-a2 + n * (-2.0 * a2 + e + 1.0) + 1.0) / m

    x = a2 + (2.0 * a2 - 1.0) * n - 1.0
    y = a2 * a2 * m * m - 2.0 * a2 * (n + 1.0) * m + n + 1.0
    k = 2.0 * n * (n + 1.0) + 1.0
    f = 2.0 * x * x - 2.0 * y * e

    sec_num = m * e * np.sqrt(
        f / (e * e * m * m) + 0.5 * (1.0 / (m * m) + 1.0)
    )
    sec_den = (
        2.0 * a2 * a2 * m
        - a2 * (4.0 * n + 3.0)
        - 2.0 * (a2 - 1.0) * a2 * m * eh
        + (a2 + n) * e
        + n
        + 1.0
    )
    g = -2.0 * y * e + k * e * e
    ss_arg = k * (2.0 * x * x + g)
    h1 = 2.0 * x * (a2 * a2 + (2.0 * a2 - 1.0) * n - 1.0) * e - 2.0 * a2 * (
        a2 - 1.0
    ) * (a2 * (-m) + n + 1.0) ** 2
    h2 = f
    speed_den = np.sqrt(2.0) * (h2 + k * e * e)

    if min(abs(sec_num), abs(ss_arg), abs(speed_den)) < 1e-12:
        shift = 1e-9 / (gamma * m)
        return amplitude_damping_closed_forms(alpha, gamma, n, t + shift)

    theta_0t = float(np.arccos(np.clip(sec_den / sec_num, -1.0, 1.0)))
    ss_num = a2 + (2.0 * a2 - 1.0) * n + k * e - 1.0
    theta_ss_t = float(np.arccos(np.clip(ss_num / np.sqrt(ss_arg), -1.0, 1.0)))
    speed_num = gamma * m * m * eh * np.sqrt(
        max(h1 - a2 * (a2 - 1.0) * k * e * e, 0.0)
    )
    speed = float(speed_num / speed_den)
    opnorm = gamma * np.sqrt(max(2.0 * (1.0 + 2.0 * n * (1.0 + n)), 0.25 * m * m))
    return {
        "rho_t": rho,
        "theta_0t": theta_0t,
        "theta_ss_t": theta_ss_t,
        "speed": speed,
        "opnorm": float(opnorm),
    }


@dataclass
class MpembaReport:
    """Per-alpha efficiency, distance-to-steady-state curves, bound offsets,
    and the times where curves for different alphas cross."""

    alphas: np.ndarray
    gamma: float
    n_bath: float
    times: np.ndarray
    eta: np.ndarray
    theta_ss: np.ndarray
    delta: np.ndarray
    crossing_times: list

    def to_json(self):
        return {
            "alphas": self.alphas.tolist(),
            "gamma": self.gamma,
            "n_bath": self.n_bath,
            "eta": self.eta.tolist(),
            "delta": self.delta.tolist(),
            "crossings": [
                {"alpha_a": a, "alpha_b": b, "time": t}
                for a, b, t in self.crossing_times
            ],
        }


def _mpemba_column_star(args):
    return _mpemba_column(*args)


def _mpemba_column(alpha, gamma, n, horizon, points):
    spec = amplitude_damping_spec(gamma, n)
    L = build_liouvillian(spec).full
    rho_ss = np.diag([(n + 1.0) / (2.0 * n + 1.0), n / (2.0 * n + 1.0)]).astype(
        complex
    )
    times = np.linspace(0.0, float(horizon), points)
    trace = propagate_expm(L, superposition_state(alpha), times)
    eta = speed_efficiency(trace, L)
    delta = float(horizon) - mt_bound(trace, L)
    thetas = np.array([liouville_angle(rho_ss, rho) for rho in trace.states])
    return eta, delta, thetas


def mpemba_report(alphas, gamma, n, horizon, points=2001, jobs=1):
    """Sweep initial superpositions of the damped qubit.

    For each alpha: propagate, record eta (averaged speed over operator
    norm), the angle to the steady state per time, and the offset
    delta = T - theta/averaged-speed. Crossings of the theta curves for
    different alphas signal faster relaxation from farther states. The
    per-alpha columns are independent; jobs > 1 computes them in worker
    processes with deterministic ordering.
    """
    alphas = np.asarray(alphas, dtype=float)
    if points < 3 or points % 2 == 0:
        raise QuadratureError(
            f"sweep grid must be odd with at least 3 points, got {points}"
        )
    times = np.linspace(0.0, float(horizon), points)
    args = [(float(a), gamma, n, horizon, points) for a in alphas]
    if jobs > 1 and alphas.size > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, alphas.size)) as pool:
            columns = list(pool.map(_mpemba_column_star, args))
    else:
        columns = [_mpemba_column(*a) for a in args]
    eta = np.array([c[0] for c in columns])
    delta = np.array([c[1] for c in columns])
    theta_ss = np.array([c[2] for c in columns])
    crossings = []
    for i in range(alphas.size):
        for j in range(i + 1, alphas.size):
            diff = theta_ss[i] - theta_ss[j]
            signs = np.sign(diff)
            for k in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
                frac = diff[k] / (diff[k] - diff[k + 1])
                tc = times[k] + frac * (times[k + 1] - times[k])
                crossings.append((float(alphas[i]), float(alphas[j]), float(tc)))
    crossings.sort(key=lambda item: item[2])
    return MpembaReport(
        alphas=alphas,
        gamma=float(gamma),
        n_bath=float(n),
        times=times,
        eta=eta,
        theta_ss=theta_ss,
        delta=delta,
        crossing_times=crossings,
    )
