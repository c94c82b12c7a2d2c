"""Time-optimal dissipative dynamics between orthogonal states.

Given orthogonal density matrices rho0 and rho0_perp sharing a spectrum,
the generator gamma (U* kron U - 1) with U rho0 U+ = rho0_perp drives the
state along the straight line P_t rho0 + (1 - P_t) rho0_perp. For the
involutory U produced here the weight is P_t = (1 + exp(-2 gamma t))/2,
which reaches the equal mixture as t grows; the Mandelstam-Tamm type
bound is saturated along the whole path.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .liouville import validate_density_matrix, sandwich_superop

__all__ = [
    "GeodesicSpec",
    "geodesic_state",
    "mixing_schedule",
    "optimal_liouvillian",
    "connecting_unitary",
    "pure_optimal_liouvillian",
    "relative_purity",
    "physicality_check",
]

_TOL = 1e-10


@dataclass
class GeodesicSpec:
    """Endpoint pair, decay rate, and the unitary connecting them."""

    rho0: np.ndarray
    rho0_perp: np.ndarray
    gamma: float
    unitary: np.ndarray = None

    def __post_init__(self):
        self.rho0 = np.asarray(self.rho0, dtype=complex)
        self.rho0_perp = np.asarray(self.rho0_perp, dtype=complex)
        validate_density_matrix(self.rho0)
        validate_density_matrix(self.rho0_perp)
        overlap = abs(np.trace(self.rho0 @ self.rho0_perp))
        if overlap > _TOL:
            raise ValidationError(f"endpoint overlap {overlap:.3e} exceeds {_TOL}")
        self.gamma = float(self.gamma)
        if self.gamma <= 0.0:
            raise ValidationError("gamma must be positive")
        if self.unitary is None:
            self.unitary = connecting_unitary(self.rho0, self.rho0_perp)
        u = np.asarray(self.unitary, dtype=complex)
        d = self.rho0.shape[0]
        if np.abs(u.conj().T @ u - np.eye(d)).max() > _TOL:
            raise ValidationError("connecting matrix is not unitary")
        if np.abs(u @ self.rho0 @ u.conj().T - self.rho0_perp).max() > _TOL:
            raise ValidationError("unitary does not map rho0 onto rho0_perp")
        self.unitary = u

    @property
    def dim(self):
        return self.rho0.shape[0]


def geodesic_state(gs, weight):
    """Convex mixture weight*rho0 + (1-weight)*rho0_perp."""
    if not 0.0 <= weight <= 1.0:
        raise ValidationError(f"mixing weight {weight} outside [0, 1]")
    return weight * gs.rho0 + (1.0 - weight) * gs.rho0_perp


def mixing_schedule(gamma, times):
    """Weight of rho0 along the generated path: (1 + exp(-2 gamma t))/2."""
    return 0.5 * (1.0 + np.exp(-2.0 * gamma * np.asarray(times, dtype=float)))


def optimal_liouvillian(gs):
    """Generator gamma (U* kron U - 1) of the straight-line dynamics."""
    d = gs.dim
    u = gs.unitary
    return gs.gamma * (
        sandwich_superop(u, u.conj().T) - np.eye(d * d, dtype=complex)
    )


def connecting_unitary(rho0, rho0_perp):
    """Involutory unitary swapping rho0 and rho0_perp.

    Both inputs are diagonalized, eigenvalues sorted descending; the two
    spectra must match within 1e-8 and the states must be orthogonal. The
    paired support vectors are exchanged and the orthogonal complement is
    left fixed, so U is Hermitian with U^2 = 1 and conjugation maps the
    states onto each other in both directions. A one-way eigenvector
    pairing would also map rho0 onto rho0_perp, but only the involution
    keeps the generated mixing path on the line between the endpoints.
    """
    a = np.asarray(rho0, dtype=complex)
    b = np.asarray(rho0_perp, dtype=complex)
    if abs(np.trace(a @ b)) > 1e-8:
        raise ValidationError("states are not orthogonal")
    wa, va = np.linalg.eigh(a)
    wb, vb = np.linalg.eigh(b)
    order = slice(None, None, -1)
    wa, va = wa[order], va[:, order]
    wb, vb = wb[order], vb[:, order]
    if np.abs(wa - wb).max() > 1e-8:
        raise ValidationError(
            "no connecting unitary: sorted spectra differ by "
            f"{np.abs(wa - wb).max():.3e}"
        )
    k = int(np.count_nonzero(wa > 1e-12))
    sa, sb = va[:, :k], vb[:, :k]
    return (
        sb @ sa.conj().T
        + sa @ sb.conj().T
        + np.eye(a.shape[0], dtype=complex)
        - sa @ sa.conj().T
        - sb @ sb.conj().T
    )


def pure_optimal_liouvillian(psi, psi_perp, gamma):
    """Generator for a pure orthogonal pair via the swap on their span.

    Builds S = |psi><psi_perp| + |psi_perp><psi| and returns
    gamma (S* kron S - 1). S is unitary only on the two-dimensional span,
    so for d > 2 the generator is meaningful on states supported there.
    """
    if gamma < 0.0:
        raise ValidationError("gamma must be nonnegative")
    a = np.asarray(psi, dtype=complex).ravel()
    b = np.asarray(psi_perp, dtype=complex).ravel()
    if abs(np.linalg.norm(a) - 1.0) > _TOL or abs(np.linalg.norm(b) - 1.0) > _TOL:
        raise ValidationError("state vectors must be normalized")
    if abs(np.vdot(a, b)) > _TOL:
        raise ValidationError("state vectors are not orthogonal")
    swap = np.outer(a, b.conj()) + np.outer(b, a.conj())
    d = a.size
    return gamma * (
        sandwich_superop(swap, swap.conj().T) - np.eye(d * d, dtype=complex)
    )


def relative_purity(rho0, trace):
    """tr(rho0 rho_t)/tr(rho0^2) at each grid point."""
    r0 = np.asarray(rho0, dtype=complex)
    p0 = np.real(np.trace(r0 @ r0))
    return np.array(
        [np.real(np.trace(r0 @ rho)) / p0 for rho in trace.states]
    )


def physicality_check(rho0, trace):
    """Whether rho_t - P_t rho0 is positive semidefinite per grid point.

    P_t is the relative purity; a True flag means the remainder, rescaled
    by 1/(1 - P_t), is itself a physical state orthogonal-in-overlap to
    rho0's share of the mixture.
    """
    r0 = np.asarray(rho0, dtype=complex)
    weights = relative_purity(rho0, trace)
    flags = []
    for w, rho in zip(weights, trace.states):
        rest = rho - w * r0
        flags.append(bool(np.linalg.eigvalsh(rest).min() >= -1e-10))
    return np.array(flags)
