"""Small dense complex-matrix algebra used throughout the package.

All matrices are tiny (2x2 up to 16x16) numpy arrays of complex128.  The
Hermitian eigensolver is a cyclic Jacobi iteration: at these sizes it is
plenty fast, bitwise deterministic, and easy to audit, which matters because
ellipsoid semiaxes and reference bases are derived straight from its output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
ID2 = np.eye(2, dtype=complex)

# Default tolerances: Hermiticity/trace defects, and how far below zero an
# eigenvalue may dip before a state is declared unphysical.
HERM_TOL = 1e-10
PSD_SLACK = 1e-10

_JACOBI_OFF_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 100


class SingularMarginalError(ValueError):
    """A reduced state is too close to pure/singular for the requested map."""


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with complex dtype."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Trace out one qubit of a two-qubit operator.

    ``keep`` is ``"A"`` (first factor) or ``"B"`` (second factor); index
    order is A tensor B throughout the package.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    r = rho.reshape(2, 2, 2, 2)  # indices (iA, iB, jA, jB)
    if keep == "A":
        return np.einsum("ikjk->ij", r)
    if keep == "B":
        return np.einsum("kikj->ij", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class HermitianEigenResult:
    """Eigenvalues in ascending order; eigenvector columns match them.

    Within a degenerate cluster (eigenvalues closer than ~1e-9) the column
    directions are an arbitrary orthonormal basis of the eigenspace, so
    callers must not rely on them individually.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(h: np.ndarray, tol: float = HERM_TOL) -> HermitianEigenResult:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi.

    Sweeps over all pivots until the off-diagonal Frobenius norm falls
    below 1e-14 (at most 100 sweeps).  Each pivot is annihilated by a
    complex Givens rotation: the pivot's phase is factored out so the 2x2
    subproblem reduces to the standard real symmetric rotation.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if h.ndim != 2 or h.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    defect = float(np.max(np.abs(h - h.conj().T))) if n else 0.0
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian: max defect {defect:.3e} > {tol:.1e}")

    a = (h + h.conj().T) / 2.0
    v = np.eye(n, dtype=complex)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off < _JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                if r < _JACOBI_OFF_TOL:
                    continue
                phase = a[p, q] / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # Unitary block [[c, s], [-s*conj(phase), c*conj(phase)]]
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * col_p + c * np.conj(phase) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p - s * np.conj(phase) * vcol_q
                v[:, q] = s * vcol_p + c * np.conj(phase) * vcol_q

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigenResult(eigenvalues=w[order], eigenvectors=v[:, order])


def psd_inv_sqrt(rho: np.ndarray, eps: float = 1e-9) -> np.ndarray:
    """Inverse square root of a Hermitian PSD matrix via eigendecomposition.

    Raises :class:`SingularMarginalError` when the smallest eigenvalue is
    at or below ``eps``: regularizing a near-pure marginal would silently
    distort everything downstream, so we refuse instead.
    """
    res = hermitian_eig(rho)
    if res.eigenvalues[0] <= eps:
        raise SingularMarginalError(
            f"matrix is singular to working precision: min eigenvalue "
            f"{res.eigenvalues[0]:.3e} <= {eps:.1e}"
        )
    w = 1.0 / np.sqrt(res.eigenvalues)
    vec = res.eigenvectors
    return (vec * w) @ vec.conj().T


@dataclass(frozen=True)
class DensityReport:
    """Physicality diagnostics for a candidate density matrix."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    valid: bool


def validate_density(rho: np.ndarray, tol: float = HERM_TOL) -> DensityReport:
    """Report Hermiticity defect, trace defect and minimum eigenvalue.

    Never raises for unphysical input; the report carries the failures.
    ``valid`` requires all three defects within ``tol`` (eigenvalues may
    dip to ``-tol`` to absorb roundoff).
    """
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = abs(complex(np.trace(rho)) - 1.0)
    min_eig = float(hermitian_eig((rho + rho.conj().T) / 2.0).eigenvalues[0])
    valid = herm <= tol and trace <= tol and min_eig >= -tol
    return DensityReport(
        hermiticity_defect=herm,
        trace_defect=trace,
        min_eigenvalue=min_eig,
        valid=valid,
    )
