"""Steering-ellipsoid geometry of two-qubit states.

Conventions: the single-qubit basis is ordered (|0>, |1>) with
sigma_z = diag(1, -1), so |0> sits at the north pole of the Bloch ball;
two-qubit indices are ordered A tensor B.

A two-qubit state is coordinatized by Alice's and Bob's local Bloch
vectors ``a``, ``b`` and the 3x3 correlation matrix ``T`` with entries
T[n, m] = tr(rho sigma_n x sigma_m).  The set of states one party can be
steered to by measurements on the other is an ellipsoid in the Bloch
ball; its center and shape follow from (a, b, T) alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ID2,
    PAULIS,
    SingularMarginalError,
    hermitian_eig,
    kron,
    partial_trace,
    psd_inv_sqrt,
    validate_density,
)

# States closer than this to a pure steering-party marginal are rejected
# rather than regularized (regularization silently distorts semiaxes).
MARGINAL_EPS = 1e-9

_NEG_EIG_SLACK = 1e-10
_ALIGNED_OFF_TOL = 1e-12


@dataclass(frozen=True)
class BlochRep:
    """Pauli-basis coordinates (a, b, T) of a two-qubit state."""

    a: np.ndarray
    b: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class Ellipsoid:
    """Center, semiaxis lengths and orthogonal axis directions.

    ``orientation`` columns are the axis directions matching ``semiaxes``
    entrywise.  For states whose ellipsoid axes already lie along x, y, z
    the semiaxes are emitted in that axis order with identity orientation;
    otherwise they are sorted descending.
    """

    center: np.ndarray
    semiaxes: np.ndarray
    orientation: np.ndarray


def bloch_decompose(rho: np.ndarray, validate: bool = True) -> BlochRep:
    """Extract (a, b, T) from a 4x4 density matrix.

    With ``validate`` (the default) the input must pass the physicality
    check; disable it to decompose arbitrary Hermitian unit-trace input.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if validate:
        report = validate_density(rho)
        if not report.valid:
            raise ValueError(f"not a physical density matrix: {report}")
    a = np.array([np.trace(rho @ kron(s, ID2)).real for s in PAULIS])
    b = np.array([np.trace(rho @ kron(ID2, s)).real for s in PAULIS])
    T = np.array(
        [[np.trace(rho @ kron(sn, sm)).real for sm in PAULIS] for sn in PAULIS]
    )
    return BlochRep(a=a, b=b, T=T)


def assemble_from_bloch(rep: BlochRep) -> np.ndarray:
    """Rebuild the 4x4 matrix from (a, b, T).

    Always Hermitian with unit trace; positivity is not guaranteed for
    arbitrary coordinates.  Exact inverse of :func:`bloch_decompose`.
    """
    rho = np.eye(4, dtype=complex)
    for n in range(3):
        rho += rep.a[n] * kron(PAULIS[n], ID2)
        rho += rep.b[n] * kron(ID2, PAULIS[n])
        for m in range(3):
            rho += rep.T[n, m] * kron(PAULIS[n], PAULIS[m])
    return rho / 4.0


def _axes_from_q(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Semiaxes and orientation from the (symmetrized) ellipsoid matrix."""
    q = (q + q.T) / 2.0
    scale = max(1.0, float(np.max(np.abs(q))))
    off = float(np.max(np.abs(q - np.diag(np.diag(q)))))

    if off <= _ALIGNED_OFF_TOL * scale:
        vals = np.diag(q).copy()
        orientation = np.eye(3)
    else:
        res = hermitian_eig(q.astype(complex))
        vals = res.eigenvalues[::-1].copy()  # descending
        orientation = res.eigenvectors[:, ::-1].real.copy()

    if np.min(vals) < -_NEG_EIG_SLACK:
        raise ValueError(
            f"ellipsoid matrix has eigenvalue {np.min(vals):.3e} < -{_NEG_EIG_SLACK:.0e}; "
            "input state is not physical"
        )
    return np.sqrt(np.clip(vals, 0.0, None)), orientation


def steering_ellipsoid(rep: BlochRep, steered: str, eps: float = MARGINAL_EPS) -> Ellipsoid:
    """Ellipsoid of states the ``steered`` party ("A" or "B") can reach.

    Steering B requires Alice's marginal to be mixed (1 - |a|^2 > eps),
    and symmetrically for A; a pure steering-party marginal raises
    :class:`SingularMarginalError`.
    """
    a, b, T = rep.a, rep.b, rep.T
    if steered == "B":
        steer_vec, target_vec, cross = a, b, T.T
    elif steered == "A":
        steer_vec, target_vec, cross = b, a, T
    else:
        raise ValueError(f"steered must be 'A' or 'B', got {steered!r}")

    gamma = 1.0 - float(steer_vec @ steer_vec)
    if gamma <= eps:
        raise SingularMarginalError(
            f"steering party's marginal is pure to within {eps:.1e} (1-|v|^2 = {gamma:.3e})"
        )
    center = (target_vec - cross @ steer_vec) / gamma
    shifted = cross - np.outer(target_vec, steer_vec)
    middle = np.eye(3) + np.outer(steer_vec, steer_vec) / gamma
    q = shifted @ middle @ shifted.T / gamma
    semiaxes, orientation = _axes_from_q(q)
    return Ellipsoid(center=center, semiaxes=semiaxes, orientation=orientation)


def canonical_state(rho: np.ndarray, eps: float = MARGINAL_EPS) -> np.ndarray:
    """Local filter on Alice that makes her marginal maximally mixed.

    The output is a valid state with tr_B marginal I/2, and Bob's steering
    ellipsoid is the same point set as for the input.  Requires Alice's
    marginal to be nonsingular (min eigenvalue > eps).
    """
    rho = np.asarray(rho, dtype=complex)
    rho_a = partial_trace(rho, keep="A")
    filt = psd_inv_sqrt(rho_a, eps) / np.sqrt(2.0)
    f2 = kron(filt, ID2)
    return f2 @ rho @ f2.conj().T


def ellipsoid_surface_points(e: Ellipsoid, n_theta: int, n_phi: int) -> np.ndarray:
    """Latitude-longitude sample of the ellipsoid surface.

    Returns an (n_theta * n_phi, 3) array, theta-major, of points
    center + orientation @ diag(semiaxes) @ u(theta, phi).
    """
    if n_theta < 2 or n_phi < 2:
        raise ValueError("n_theta and n_phi must both be >= 2")
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    u = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)
    return e.center + (u * e.semiaxes) @ e.orientation.T
