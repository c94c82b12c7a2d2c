"""Speed-limit functionals on Liouville-space trajectories.

Everything here works on the unit vector |rho)/sqrt(tr rho^2) and a
supermatrix generator. The pieces: the evolution speed (standard
deviation of the generator on the current unit vector) and its
unitary/dissipative decomposition, time-averaged Mandelstam-Tamm type
bounds with operator-norm and Hilbert-Schmidt relaxations, a split of
the generator into a part diagonal in a fixed orthonormal basis and its
non-classical remainder, a Wootters-style length of the basis amplitude
moduli, and the exact-time relation length / averaged non-classical
speed. The basis is anchored at the initial state and never re-derived
along the trajectory.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .exceptions import (
    DimensionError,
    NumericalConsistencyError,
    QuadratureError,
)
from .liouville import liouville_angle, superop_variance

__all__ = [
    "QslReport",
    "BasisSet",
    "speed",
    "speed_matrix_form",
    "speed_decomposition",
    "average_speed",
    "mt_bound",
    "operator_norm",
    "opnorm_bound",
    "hsnorm_bound",
    "complete_basis",
    "classical_part",
    "nonclassical_speed",
    "exact_uncertainty",
    "wootters_length",
    "exact_qsl",
    "speed_efficiency",
    "uncertainty_product",
]

_POP_FLOOR = 1e-14
_ANGLE_FLOOR = 1e-12


@dataclass
class QslReport:
    """All bound and equality quantities for one trajectory."""

    T: float
    theta: float
    wootters_length: float
    avg_speed: float
    avg_nc_speed: float
    bound_mt: float
    bound_nc: float
    exact_time: float
    bound_opnorm: float
    bound_hsnorm: float
    efficiency: float

    def to_json(self):
        return {k: float(v) for k, v in self.__dict__.items()}


@dataclass
class BasisSet:
    """Orthonormal Liouville-space basis stored as matrix columns.

    Column 0 is the unit vector of the reference state; the Gram matrix
    must be the identity within 1e-10.
    """

    vectors: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.vectors, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("basis must be a square matrix of column vectors")
        defect = np.abs(m.conj().T @ m - np.eye(m.shape[1])).max()
        if defect > 1e-10:
            raise NumericalConsistencyError(
                f"basis Gram defect {defect:.3e} exceeds 1e-10"
            )
        self.vectors = m

    @property
    def size(self):
        return self.vectors.shape[1]

    def amplitudes(self, vector):
        """Components (a_i|v) of a Liouville vector in this basis."""
        return self.vectors.conj().T @ vector


def _check_superop(superop, state):
    m = np.asarray(superop, dtype=complex)
    if m.shape != (state.vector.size, state.vector.size):
        raise DimensionError(
            f"superoperator shape {m.shape} does not act on dim {state.vector.size}"
        )
    return m


def _provider(liouvillian):
    if callable(liouvillian):
        return liouvillian
    m = np.asarray(liouvillian, dtype=complex)
    return lambda _t: m


def _bound_ratio(numerator, denominator):
    if denominator < 1e-14 * max(numerator, 1.0):
        if numerator < _ANGLE_FLOOR:
            return 0.0
        raise NumericalConsistencyError(
            f"vanishing average speed against a finite distance {numerator:.3e}"
        )
    return float(numerator / denominator)


def speed(liouvillian, state):
    """Evolution speed sqrt(tr(L†L P) - tr(L† P) tr(L P))."""
    return float(np.sqrt(superop_variance(_check_superop(liouvillian, state), state)))


def speed_matrix_form(rho, rhodot):
    """Speed from the state and its raw time derivative in matrix form.

    sqrt(tr(drho† drho)/tr(rho²) - (tr(rho drho)/tr(rho²))²); identical
    to the superoperator route once the unit-vector normalization is
    expanded for an unnormalized state.
    """
    r = np.asarray(rho, dtype=complex)
    rd = np.asarray(rhodot, dtype=complex)
    purity = np.real(np.trace(r @ r))
    if purity <= 0.0:
        raise NumericalConsistencyError("state has non-positive purity")
    second = np.real(np.trace(rd.conj().T @ rd)) / purity
    first = np.real(np.trace(r @ rd)) / purity
    return float(np.sqrt(max(second - first * first, 0.0)))


def speed_decomposition(parts, state):
    """Split the squared speed into unitary, dissipative, and cross terms.

    Returns (var_unitary, var_dissipative, cross) with
    cross = Re[i((v|L_H L_D|v) - (v|L_D† L_H|v))]; the three sum to the
    squared speed of the full generator on physical states.
    """
    v = state.vector
    lh = _check_superop(parts.hermitian_generator, state)
    ld = _check_superop(parts.dissipative, state)
    var_h = superop_variance(lh, state)
    var_d = superop_variance(ld, state)
    hv = lh @ v
    dv = ld @ v
    cross = np.real(1j * (np.vdot(hv, dv) - np.vdot(dv, hv)))
    return float(var_h), float(var_d), float(cross)


def _odd_grid(trace):
    n = len(trace)
    if n < 3 or n % 2 == 0:
        raise QuadratureError(
            f"Simpson quadrature needs an odd grid of at least 3 points, got {n}"
        )


def average_speed(trace, liouvillian):
    """Simpson time average of the speed; fills trace.speeds as a side effect."""
    _odd_grid(trace)
    prov = _provider(liouvillian)
    speeds = np.array(
        [speed(prov(t), s) for t, s in zip(trace.times, trace.normalized)]
    )
    trace.speeds = speeds
    span = trace.times[-1] - trace.times[0]
    return float(simpson(speeds, x=trace.times) / span)


def mt_bound(trace, liouvillian):
    """Angle between endpoints divided by the average speed."""
    theta = liouville_angle(trace.states[0], trace.states[-1])
    return _bound_ratio(theta, average_speed(trace, liouvillian))


def operator_norm(superop):
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(superop, dtype=complex), 2))


def opnorm_bound(liouvillian, theta):
    """Angle divided by the operator norm of the generator."""
    theta = float(theta)
    if theta < _ANGLE_FLOOR:
        return 0.0
    norm = operator_norm(liouvillian)
    if norm <= 0.0:
        raise NumericalConsistencyError("zero generator with a finite angle")
    return theta / norm


def hsnorm_bound(liouvillian, theta):
    """Angle divided by the Hilbert-Schmidt norm; never exceeds opnorm_bound."""
    theta = float(theta)
    if theta < _ANGLE_FLOOR:
        return 0.0
    norm = float(np.linalg.norm(np.asarray(liouvillian, dtype=complex)))
    if norm <= 0.0:
        raise NumericalConsistencyError("zero generator with a finite angle")
    return theta / norm


def complete_basis(state):
    """Deterministic orthonormal completion seeded by the state vector.

    Modified Gram-Schmidt over the state vector followed by the canonical
    unit vectors, discarding candidates whose residual norm falls below
    1e-8; each survivor is re-orthogonalized twice for a clean Gram matrix.
    """
    v0 = state.vector
    n = v0.size
    cols = [v0 / np.linalg.norm(v0)]
    for j in range(n):
        cand = np.zeros(n, dtype=complex)
        cand[j] = 1.0
        for _ in range(2):
            for q in cols:
                cand = cand - q * np.vdot(q, cand)
        norm = np.linalg.norm(cand)
        if norm < 1e-8:
            continue
        cols.append(cand / norm)
        if len(cols) == n:
            break
    if len(cols) != n:
        raise NumericalConsistencyError("basis completion fell short of full dimension")
    return BasisSet(vectors=np.column_stack(cols))


def classical_part(liouvillian, basis, state):
    """Component of the generator diagonal in the basis.

    Sum of |a_i)((a_i| (a_i|C|a_i)/(a_i|P|a_i) with C = (L P - P L†)/2
    and P the projector onto the state vector; basis directions with
    population below 1e-14 are dropped. The result is anti-Hermitian by
    construction; a detectable defect is reported, not assumed away.
    """
    L = _check_superop(liouvillian, state)
    v = state.vector
    amps = basis.amplitudes(v)
    lamps = basis.amplitudes(L @ v)
    pops = np.abs(amps) ** 2
    keep = pops >= _POP_FLOOR
    beta = 1j * np.imag(lamps[keep] * amps[keep].conj()) / pops[keep]
    cols = basis.vectors[:, keep]
    out = (cols * beta) @ cols.conj().T
    defect = np.abs(out + out.conj().T).max()
    if defect > 1e-12:
        warnings.warn(
            f"classical part anti-Hermiticity defect {defect:.3e}", RuntimeWarning
        )
    return out


def _classical_variance(superop, basis, state):
    v = state.vector
    amps = basis.amplitudes(v)
    lamps = basis.amplitudes(superop @ v)
    pops = np.abs(amps) ** 2
    keep = pops >= _POP_FLOOR
    beta = 1j * np.imag(lamps[keep] * amps[keep].conj()) / pops[keep]
    mean = np.sum(beta * pops[keep])
    return float(np.sum(np.abs(beta) ** 2 * pops[keep]) - abs(mean) ** 2)


def nonclassical_speed(liouvillian, basis, state):
    """Speed of the non-diagonal remainder: sqrt(max(var - var_cl, 0))."""
    L = _check_superop(liouvillian, state)
    var = superop_variance(L, state)
    var_cl = _classical_variance(L, basis, state)
    return float(np.sqrt(max(var - var_cl, 0.0)))


def exact_uncertainty(superop, basis, state):
    """Population sensitivity scale and non-classical deviation of a superoperator.

    The scale delta obeys delta^{-2} = sum_i Re((a_i|G|a_i))² / (a_i|P|a_i)
    with G = B P + P B† - P tr[(B + B†)P]; the product of the returned
    pair (delta, nonclassical deviation) equals one half identically.
    """
    B = _check_superop(superop, state)
    v = state.vector
    amps = basis.amplitudes(v)
    bamps = basis.amplitudes(B @ v)
    pops = np.abs(amps) ** 2
    keep = pops >= _POP_FLOOR
    mean2 = 2.0 * np.real(np.vdot(v, B @ v))
    diag = 2.0 * np.real(bamps[keep] * amps[keep].conj()) - pops[keep] * mean2
    fisher = float(np.sum(diag**2 / pops[keep]))
    scale = float(np.real(np.vdot(B @ v, B @ v)))
    if fisher <= 1e-24 * max(scale, 1e-300):
        raise NumericalConsistencyError(
            "stationary populations; the sensitivity scale diverges"
        )
    return fisher**-0.5, nonclassical_speed(B, basis, state)


def _mod_derivative(mods, times):
    """Second-order derivative of each column, one-sided at the ends."""
    out = np.empty_like(mods)
    out[1:-1] = (mods[2:] - mods[:-2]) / (times[2:] - times[:-2])[:, None]
    out[0] = (-3.0 * mods[0] + 4.0 * mods[1] - mods[2]) / (2.0 * (times[1] - times[0]))
    out[-1] = (3.0 * mods[-1] - 4.0 * mods[-2] + mods[-3]) / (
        2.0 * (times[-1] - times[-2])
    )
    return out


def _kink_windows(mods, pad=2):
    """Even-aligned index windows around slope breaks of the moduli."""
    n = mods.shape[0]
    slopes = np.diff(mods, axis=0)
    mags = np.maximum(np.abs(slopes[1:]), np.abs(slopes[:-1]))
    floor = 1e-12 * max(float(np.abs(slopes).max()), 1e-300)
    bend = np.abs(slopes[1:] - slopes[:-1]) > 0.8 * mags
    flip = slopes[1:] * slopes[:-1] < 0.0
    marked = np.where(((bend | flip) & (mags > floor)).any(axis=1))[0] + 1
    windows = []
    for k in marked:
        a = max(k - pad, 0)
        b = min(k + pad, n - 1)
        a -= a % 2
        b = min(b + (b % 2), n - 1)
        if windows and a <= windows[-1][1]:
            windows[-1][1] = max(windows[-1][1], b)
        else:
            windows.append([a, b])
    return windows


def wootters_length(trace, basis, refine=10):
    """Path length of the basis amplitude moduli along the trace.

    Integrates sqrt(sum_i (d|c_i|/dt)²) with c_i = (a_i|rho_t~). A zero
    crossing of c_i kinks its modulus, so windows flagged by slope breaks
    are re-evaluated on a 10x refined local grid built by cubic
    interpolation of the complex amplitudes.
    """
    _odd_grid(trace)
    t = trace.times
    vecs = np.column_stack([s.vector for s in trace.normalized])
    amps = (basis.vectors.conj().T @ vecs).T
    mods = np.abs(amps)
    jump = float(np.abs(np.diff(mods, axis=0)).max()) if len(t) > 1 else 0.0
    if jump > 0.1:
        warnings.warn(
            f"amplitude modulus jumps by {jump:.3f} between grid points; "
            "the grid is too coarse for the length quadrature",
            RuntimeWarning,
        )
    integrand = np.sqrt(np.sum(_mod_derivative(mods, t) ** 2, axis=1))
    total = float(simpson(integrand, x=t))
    for a, b in _kink_windows(mods):
        lo, hi = max(a - 2, 0), min(b + 2, len(t) - 1)
        spl_re = CubicSpline(t[lo : hi + 1], amps[lo : hi + 1].real, axis=0)
        spl_im = CubicSpline(t[lo : hi + 1], amps[lo : hi + 1].imag, axis=0)
        tf = np.linspace(t[a], t[b], (b - a) * refine + 1)
        mf = np.abs(spl_re(tf) + 1j * spl_im(tf))
        fine = float(simpson(np.sqrt(np.sum(_mod_derivative(mf, tf) ** 2, axis=1)), x=tf))
        coarse = float(simpson(integrand[a : b + 1], x=t[a : b + 1]))
        total += fine - coarse
    return max(total, 0.0)


def exact_qsl(trace, liouvillian, basis=None):
    """Full bound-and-equality report for a recorded trajectory."""
    span = float(trace.times[-1] - trace.times[0])
    theta = liouville_angle(trace.states[0], trace.states[-1])
    if basis is None:
        basis = complete_basis(trace.normalized[0])
    prov = _provider(liouvillian)
    avg = average_speed(trace, liouvillian)
    nc = np.array(
        [
            nonclassical_speed(prov(t), basis, s)
            for t, s in zip(trace.times, trace.normalized)
        ]
    )
    avg_nc = float(simpson(nc, x=trace.times) / span)
    length = wootters_length(trace, basis)
    l0 = prov(trace.times[0])
    return QslReport(
        T=span,
        theta=theta,
        wootters_length=length,
        avg_speed=avg,
        avg_nc_speed=avg_nc,
        bound_mt=_bound_ratio(theta, avg),
        bound_nc=_bound_ratio(theta, avg_nc),
        exact_time=_bound_ratio(length, avg_nc),
        bound_opnorm=opnorm_bound(l0, theta),
        bound_hsnorm=hsnorm_bound(l0, theta),
        efficiency=speed_efficiency(trace, liouvillian),
    )


def speed_efficiency(trace, liouvillian):
    """Average speed divided by the operator norm of the generator."""
    avg = average_speed(trace, liouvillian)
    norm = operator_norm(_provider(liouvillian)(trace.times[0]))
    if norm <= 0.0:
        raise NumericalConsistencyError("zero operator norm")
    return float(avg / norm)


def uncertainty_product(a_superop, b_superop, state):
    """Variance product and squared covariance of two superoperators.

    Returns (lhs, rhs) = ((ΔA)²(ΔB)², |tr(A†BP) - tr(A†P)tr(BP)|²) with
    P the projector onto the state vector; lhs ≥ rhs always.
    """
    A = _check_superop(a_superop, state)
    B = _check_superop(b_superop, state)
    v = state.vector
    av = A @ v
    bv = B @ v
    lhs = superop_variance(A, state) * superop_variance(B, state)
    cov = np.vdot(av, bv) - np.conj(np.vdot(v, av)) * np.vdot(v, bv)
    return float(lhs), float(abs(cov) ** 2)
