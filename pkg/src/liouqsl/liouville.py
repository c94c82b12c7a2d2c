"""Liouville-space representation of operators and states.

A d x d operator A = sum_ij a_ij |i><j| is flattened by column stacking
into the vector |A) = sum_ij a_ij |j> kron |i> of length d^2, so that
entry A[i, j] sits at flat index d*j + i. The inner product is the
Hilbert-Schmidt one, (A|B) = tr(A^+ B). Under this convention the
operator product A B C vectorizes as (C^T kron A)|B), which is how all
superoperators in this package are assembled.

Density matrices enter most formulas through the normalized vector
|rho~) = |rho)/sqrt(tr rho^2), whose projector P = |rho~)(rho~| carries
expectation values tr(O P) = (rho~|O|rho~) of superoperators O.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, NumericalConsistencyError, ValidationError

__all__ = [
    "vectorize",
    "devectorize",
    "inner",
    "rehermitize",
    "validate_density_matrix",
    "NormalizedState",
    "normalize_state",
    "liouville_angle",
    "sandwich_superop",
    "superop_expectation",
    "superop_variance",
]


def vectorize(operator):
    """Column-stack a square operator into a Liouville vector."""
    a = np.asarray(operator, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a.ravel(order="F")


def devectorize(vector):
    """Inverse of vectorize; the length must be a perfect square."""
    v = np.asarray(vector, dtype=complex).ravel()
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionError(f"length {v.size} is not a perfect square")
    return v.reshape((d, d), order="F")


def inner(a, b):
    """Hilbert-Schmidt inner product (A|B) of two Liouville vectors.

    The first argument is conjugated. Operator inputs are vectorized
    first, so inner(A, B) = tr(A^+ B) either way.
    """
    av = vectorize(a) if np.ndim(a) == 2 else np.asarray(a, dtype=complex)
    bv = vectorize(b) if np.ndim(b) == 2 else np.asarray(b, dtype=complex)
    if av.shape != bv.shape:
        raise DimensionError("vectors of different length")
    return np.vdot(av, bv)


def rehermitize(matrix):
    """Average a matrix with its adjoint; removes round-off skew."""
    m = np.asarray(matrix, dtype=complex)
    return 0.5 * (m + m.conj().T)


def validate_density_matrix(rho, trace_tol=1e-10, herm_tol=1e-10, eig_floor=-1e-10):
    """Check the structural requirements on a density matrix.

    Raises ValidationError when the trace deviates from one beyond
    trace_tol, hermiticity is violated beyond herm_tol, or the smallest
    eigenvalue of the Hermitian part lies below eig_floor.
    """
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {r.shape}")
    tr = np.trace(r)
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    herm_defect = np.abs(r - r.conj().T).max()
    if herm_defect > herm_tol:
        raise ValidationError(f"hermiticity defect {herm_defect:.3e}")
    lowest = np.linalg.eigvalsh(rehermitize(r)).min()
    if lowest < eig_floor:
        raise ValidationError(f"negative eigenvalue {lowest:.3e}")


@dataclass
class NormalizedState:
    """Unit Liouville vector of a state together with its purity.

    vector is |rho~) = vec(rho)/sqrt(tr rho^2) and purity is tr(rho^2)
    of the state it came from.
    """

    vector: np.ndarray
    purity: float

    @property
    def dim(self):
        return int(round(np.sqrt(self.vector.size)))

    def projector(self):
        """The rank-one superoperator |rho~)(rho~|."""
        return np.outer(self.vector, self.vector.conj())


def normalize_state(rho):
    """Build the NormalizedState of a density matrix."""
    v = vectorize(rho)
    purity = float(np.vdot(v, v).real)
    if not np.isfinite(purity) or purity <= 0.0:
        raise ValidationError("state has non-positive purity")
    return NormalizedState(vector=v / np.sqrt(purity), purity=purity)


def liouville_angle(rho_a, rho_b):
    """Angle between two states in Liouville space.

    Theta = arccos[ tr(rho_a rho_b) / sqrt(tr rho_a^2 tr rho_b^2) ],
    clamped into [-1, 1] before the arccos. Symmetric in its arguments
    and zero iff the states coincide up to normalization.
    """
    a = np.asarray(rho_a, dtype=complex)
    b = np.asarray(rho_b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError("states of different dimension")
    pa = np.trace(a @ a).real
    pb = np.trace(b @ b).real
    if pa <= 0.0 or pb <= 0.0:
        raise ValidationError("state has non-positive purity")
    overlap = np.trace(a @ b).real / np.sqrt(pa * pb)
    return float(np.arccos(np.clip(overlap, -1.0, 1.0)))


def sandwich_superop(left, right):
    """Superoperator of X -> left @ X @ right.

    Returns right^T kron left, so that applying it to vec(X) yields
    vec(left X right).
    """
    l = np.asarray(left, dtype=complex)
    r = np.asarray(right, dtype=complex)
    if l.shape != r.shape or l.ndim != 2 or l.shape[0] != l.shape[1]:
        raise DimensionError("factors must be square matrices of equal dimension")
    return np.kron(r.T, l)


def _as_vector(state):
    if isinstance(state, NormalizedState):
        return state.vector
    return np.asarray(state, dtype=complex).ravel()


def superop_expectation(superop, state):
    """Expectation (rho~|O|rho~) = tr(O P) of a superoperator."""
    v = _as_vector(state)
    o = np.asarray(superop, dtype=complex)
    if o.shape != (v.size, v.size):
        raise DimensionError("superoperator does not match the state dimension")
    return complex(np.vdot(v, o @ v))


def superop_variance(superop, state, floor=-1e-10):
    """Variance tr(O^+ O P) - tr(O^+ P) tr(O P) of a superoperator.

    Equals ||O v||^2 - |(v|O|v)|^2 for the unit vector v. Small negative
    round-off is clamped to zero; values below floor raise.
    """
    v = _as_vector(state)
    o = np.asarray(superop, dtype=complex)
    if o.shape != (v.size, v.size):
        raise DimensionError("superoperator does not match the state dimension")
    ov = o @ v
    value = float(np.vdot(ov, ov).real - abs(np.vdot(v, ov)) ** 2)
    if value < floor:
        raise NumericalConsistencyError(f"variance {value:.3e} below floor {floor:.1e}")
    return max(value, 0.0)
