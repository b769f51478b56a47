"""Coherence of steered states and its supremum over measurements.

A measurement outcome M on Alice steers Bob to
rho_B^M = tr_A[(M x I) rho] / p_M.  Coherence is measured relative to the
eigenbasis of Bob's unconditioned marginal, as the sum of absolute
off-diagonal elements.  The supremum over all POVM outcomes restricts to
rank-1 projective elements without loss: the steered state of any PSD
element is a convex mixture of the steered states of its rank-1 parts,
and the coherence sum is convex in the state, so no mixture can beat the
best rank-1 outcome.

When Bob's marginal is degenerate its eigenbasis is not unique; the value
is then the infimum of the POVM supremum over candidate reference bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ID2, PAULIS, hermitian_eig, partial_trace

DEGENERACY_TOL = 1e-9

_MIN_OUTCOME_PROB = 1e-12
_HILL_CLIMB_STEPS = 20
_HILL_CLIMB_SHRINK = 0.6


@dataclass(frozen=True)
class ReferenceBasis:
    """Orthonormal single-qubit basis (columns of ``vectors``).

    ``degenerate`` is set when the basis came from a marginal whose
    eigenvalue gap is below tolerance, i.e. the basis is not unique.
    """

    vectors: np.ndarray
    degenerate: bool


def steered_state(rho: np.ndarray, povm_element: np.ndarray) -> tuple[np.ndarray, float]:
    """Bob's conditional state and outcome probability for element M on Alice."""
    rho = np.asarray(rho, dtype=complex)
    m_full = np.kron(np.asarray(povm_element, dtype=complex), ID2)
    unnorm = partial_trace(m_full @ rho, keep="B")
    prob = float(np.trace(unnorm).real)
    if prob <= _MIN_OUTCOME_PROB:
        raise ValueError(f"outcome probability {prob:.3e} is too small to condition on")
    return unnorm / prob, prob


def coherence(rho: np.ndarray, basis: ReferenceBasis) -> float:
    """Sum of absolute off-diagonal elements of ``rho`` in ``basis``."""
    rho = np.asarray(rho, dtype=complex)
    chi0 = basis.vectors[:, 0]
    chi1 = basis.vectors[:, 1]
    return 2.0 * abs(chi0.conj() @ rho @ chi1)


def reference_basis_of(rho_b: np.ndarray, degen_tol: float = DEGENERACY_TOL) -> ReferenceBasis:
    """Eigenbasis of a single-qubit marginal, flagged if nearly degenerate."""
    res = hermitian_eig(np.asarray(rho_b, dtype=complex))
    gap = float(res.eigenvalues[1] - res.eigenvalues[0])
    return ReferenceBasis(vectors=res.eigenvectors, degenerate=gap < degen_tol)


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic near-uniform grid of ``n`` unit vectors."""
    if n < 1:
        raise ValueError("need at least one grid point")
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    golden_angle = np.pi * (3.0 - np.sqrt(5.0))
    phi = golden_angle * i
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def _steered_batch(rho: np.ndarray, directions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized steered states and probabilities for projective elements.

    For each unit vector n, the element is (I + n.sigma)/2 on Alice.
    Returns (batch of 2x2 matrices, probabilities).
    """
    rho4 = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)  # (iA, iB, jA, jB)
    sig = np.stack(PAULIS)
    elements = 0.5 * (ID2 + np.einsum("kn,nij->kij", directions, sig))
    # tr_A[(M x I) rho][i, j] = sum_{a,c} M[a, c] rho4[c, i, a, j]
    unnorm = np.einsum("kac,ciaj->kij", elements, rho4)
    probs = np.einsum("kii->k", unnorm).real
    return unnorm, probs


def _coherence_on_grid(rho: np.ndarray, directions: np.ndarray, basis: ReferenceBasis) -> np.ndarray:
    """Steered-state coherence for every POVM direction (nan where p ~ 0)."""
    unnorm, probs = _steered_batch(rho, directions)
    chi0 = basis.vectors[:, 0]
    chi1 = basis.vectors[:, 1]
    num = 2.0 * np.abs(np.einsum("i,kij,j->k", chi0.conj(), unnorm, chi1))
    out = np.full(len(directions), np.nan)
    ok = probs > _MIN_OUTCOME_PROB
    out[ok] = num[ok] / probs[ok]
    return out


def _tangent_frame(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(ref, n)
    u /= np.linalg.norm(u)
    return u, np.cross(n, u)


def _hill_climb(rho: np.ndarray, basis: ReferenceBasis, start: np.ndarray, step: float) -> float:
    """Sharpen a grid maximum by a deterministic shrinking-step ascent."""
    n = start / np.linalg.norm(start)
    best = float(_coherence_on_grid(rho, n[None, :], basis)[0])
    for _ in range(_HILL_CLIMB_STEPS):
        u, v = _tangent_frame(n)
        candidates = np.array([n + step * u, n - step * u, n + step * v, n - step * v])
        candidates /= np.linalg.norm(candidates, axis=1, keepdims=True)
        vals = _coherence_on_grid(rho, candidates, basis)
        k = int(np.nanargmax(vals))
        if not np.isnan(vals[k]) and vals[k] > best:
            best = float(vals[k])
            n = candidates[k]
        step *= _HILL_CLIMB_SHRINK
    return best


def _basis_along(direction: np.ndarray) -> ReferenceBasis:
    """Eigenbasis of direction.sigma as an explicit ReferenceBasis."""
    x, y, z = direction
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    phi = np.arctan2(y, x)
    plus = np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])
    minus = np.array([-np.exp(-1j * phi) * np.sin(theta / 2.0), np.cos(theta / 2.0)])
    return ReferenceBasis(vectors=np.column_stack([plus, minus]), degenerate=True)


def msc_bruteforce(rho: np.ndarray, n_grid: int = 10_000, degen_tol: float = DEGENERACY_TOL) -> float:
    """Maximal steered coherence by sweeping rank-1 projective outcomes.

    The POVM directions come from a Fibonacci-sphere grid of ``n_grid``
    points, sharpened by a local hill climb from the best grid point.  If
    Bob's marginal is degenerate, the same grid supplies candidate
    reference bases and the result is the infimum over them (grid only,
    no per-basis climb).  Deterministic for fixed inputs.
    """
    if n_grid < 8:
        raise ValueError("n_grid must be at least 8")
    rho = np.asarray(rho, dtype=complex)
    rho_b = partial_trace(rho, keep="B")
    basis = reference_basis_of(rho_b, degen_tol)
    directions = fibonacci_sphere(n_grid)

    if not basis.degenerate:
        vals = _coherence_on_grid(rho, directions, basis)
        k = int(np.nanargmax(vals))
        return _hill_climb(rho, basis, directions[k], step=2.0 / np.sqrt(n_grid))

    # Degenerate marginal: any basis is an eigenbasis, so take the worst
    # case over basis directions (antipodal pairs give equal values).
    unnorm, probs = _steered_batch(rho, directions)
    ok = probs > _MIN_OUTCOME_PROB
    bloch = np.empty((int(ok.sum()), 3))
    sigma01 = unnorm[ok, 0, 1] / probs[ok]
    bloch[:, 0] = 2.0 * sigma01.real
    bloch[:, 1] = -2.0 * sigma01.imag
    bloch[:, 2] = (unnorm[ok, 0, 0].real - unnorm[ok, 1, 1].real) / probs[ok]
    norms_sq = np.einsum("ki,ki->k", bloch, bloch)
    worst = np.inf
    for lo in range(0, n_grid, 256):
        axes = directions[lo : lo + 256]
        dots = bloch @ axes.T
        perp = np.sqrt(np.clip(norms_sq[:, None] - dots * dots, 0.0, None))
        worst = min(worst, float(perp.max(axis=0).min()))
    return worst


def msc_closed_form(semiaxes: np.ndarray, mode: str = "paper") -> float:
    """Maximal steered coherence from ellipsoid semiaxes.

    Valid when the reference basis lies on the ellipsoid z-axis and the
    semiaxes are given in (x, y, z) axis order (the scenario layer
    guarantees this for its state family).  ``paper`` takes the longest
    of all three semiaxes; ``strict`` the longest transverse one, which
    is what the measurement sweep converges to for such states.
    """
    s = np.asarray(semiaxes, dtype=float)
    if s.shape != (3,):
        raise ValueError(f"expected three semiaxes, got shape {s.shape}")
    if np.min(s) < 0.0:
        raise ValueError(f"semiaxes must be nonnegative, got {s}")
    if mode == "paper":
        return float(np.max(s))
    if mode == "strict":
        return float(max(s[0], s[1]))
    raise ValueError(f"mode must be 'paper' or 'strict', got {mode!r}")
