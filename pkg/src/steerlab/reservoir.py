"""Exact single-excitation dynamics in a shared Lorentzian reservoir.

N identical qubits couple with equal strength to one zero-temperature
bosonic reservoir with Lorentzian spectral density of width ``lam``,
coupling ``gamma0`` and central frequency ``omega0`` (resonant with the
qubit transition).  Only the symmetric collective mode couples; the other
N-1 collective modes are decoherence free.  The excited-state amplitude
of the coupled mode obeys a closed two-parameter solution, and the first
qubit ("Bob", the only one initially excitable) sees an effective
amplitude-damping channel with survival probability p(t) = |G(t)|^2.

Time is measured in units of 1/lam for the lam=1 defaults used in the
scenario layer.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .steering import Ellipsoid

_IMAG_TOL = 1e-12
_AMPLITUDE_SLACK = 1e-12


@dataclass(frozen=True)
class ReservoirParams:
    """Lorentzian reservoir shared by ``n_qubits`` identical qubits."""

    lam: float
    gamma0: float
    omega0: float = 1.0
    n_qubits: int = 1

    def __post_init__(self) -> None:
        if self.lam <= 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.gamma0 <= 0.0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")


@dataclass(frozen=True)
class InitialStateParams:
    """Shared two-qubit initial state: weight ``q`` on the entangled ket
    cos(theta/2)|10> + sin(theta/2)|01>, rest maximally mixed."""

    q: float
    theta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class ChannelSnapshot:
    """Local channel on Bob at one instant: amplitude, probability, Kraus pair."""

    t: float
    g: complex
    p: float
    kraus: tuple[np.ndarray, np.ndarray]


def lorentzian_J(omega: float, params: ReservoirParams) -> float:
    """Spectral density gamma0*lam / (2 pi ((omega-omega0)^2 + lam^2))."""
    d = omega - params.omega0
    return params.gamma0 * params.lam / (2.0 * math.pi * (d * d + params.lam * params.lam))


def _sinhc(x: complex) -> complex:
    """sinh(x)/x with a series branch for the removable singularity."""
    if abs(x) < 1e-6:
        x2 = x * x
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0
    return cmath.sinh(x) / x


def collective_amplitude_ratio(t: float, params: ReservoirParams) -> float:
    """Decay factor of the coupled collective mode's excited amplitude.

    Equals exp(-lam t/2) (cosh(D t/2) + (lam/D) sinh(D t/2)) with
    D = sqrt(lam^2 - 2 N gamma0 lam), evaluated through the principal
    complex square root when the argument is negative (strong coupling,
    oscillatory regime).  The value is real in both regimes; writing the
    D-dependence as lam*t/2 * sinhc(D t/2) also covers D -> 0 smoothly.
    """
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    lam = params.lam
    d = cmath.sqrt(complex(lam * lam - 2.0 * params.n_qubits * params.gamma0 * lam))
    x = d * t / 2.0
    val = cmath.exp(-lam * t / 2.0) * (cmath.cosh(x) + (lam * t / 2.0) * _sinhc(x))
    if abs(val.imag) >= _IMAG_TOL:
        raise ArithmeticError(f"amplitude ratio has imaginary residue {val.imag:.3e}")
    return val.real


def survival_amplitude(t: float, params: ReservoirParams) -> complex:
    """Factor G(t) multiplying Bob's initial excited-state amplitude.

    The N-1 decoherence-free collective modes contribute the constant
    (N-1)/N; only the coupled mode's share 1/N decays, so |G| -> (N-1)/N
    at long times and full protection is approached as N grows.
    """
    n = params.n_qubits
    ratio = collective_amplitude_ratio(t, params)
    return cmath.exp(-1j * params.omega0 * t) * ((n - 1) + ratio) / n


def kraus_pair(g: complex, mode: str = "paper") -> tuple[np.ndarray, np.ndarray]:
    """Amplitude-damping Kraus pair for survival amplitude ``g``.

    ``paper`` keeps only p = |g|^2 (K0 = diag(1, sqrt(p))); ``exact``
    retains the complex amplitude including its sign (K0 = diag(1, g)).
    Both satisfy K0^dag K0 + K1^dag K1 = I.
    """
    g = complex(g)
    p = abs(g) ** 2
    if p > 1.0 + _AMPLITUDE_SLACK:
        raise ValueError(f"|g| = {abs(g):.6f} exceeds 1")
    if mode == "paper":
        surv = math.sqrt(min(p, 1.0))
    elif mode == "exact":
        surv = g
    else:
        raise ValueError(f"mode must be 'paper' or 'exact', got {mode!r}")
    k0 = np.array([[1.0, 0.0], [0.0, surv]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(max(0.0, 1.0 - p))], [0.0, 0.0]], dtype=complex)
    return k0, k1


def channel_snapshot(t: float, params: ReservoirParams, mode: str = "paper") -> ChannelSnapshot:
    """Survival amplitude, probability and Kraus pair at time ``t``."""
    g = survival_amplitude(t, params)
    return ChannelSnapshot(t=t, g=g, p=abs(g) ** 2, kraus=kraus_pair(g, mode))


def initial_state(params: InitialStateParams) -> np.ndarray:
    """Two-qubit state q |phi><phi| + (1-q)/4 I, with
    |phi> = cos(theta/2)|10> + sin(theta/2)|01> in A-tensor-B order."""
    ket = np.zeros(4, dtype=complex)
    ket[2] = math.cos(params.theta / 2.0)  # |10>: Alice excited
    ket[1] = math.sin(params.theta / 2.0)  # |01>: Bob excited
    return params.q * np.outer(ket, ket.conj()) + (1.0 - params.q) / 4.0 * np.eye(4)


def evolve_bipartite(rho0: np.ndarray, kraus: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Apply the local channel to Bob: sum_i (I x K_i) rho (I x K_i)^dag."""
    rho0 = np.asarray(rho0, dtype=complex)
    out = np.zeros_like(rho0)
    for k in kraus:
        full = np.kron(np.eye(2, dtype=complex), k)
        out += full @ rho0 @ full.conj().T
    return out


def closed_form_ellipsoid(params: InitialStateParams, p: float) -> Ellipsoid:
    """Bob's steering ellipsoid for the shared-state family after damping.

    The axes stay aligned with x, y, z for this family, so the orientation
    is the identity and the semiaxes are emitted in axis order:

        s1 = s2 = q sqrt(p) sin(theta) / sqrt(1 - q^2 cos^2 theta)
        s3      = q p (1 - q cos^2 theta) / (1 - q^2 cos^2 theta)

    with the center on the z-axis at
    (1 - p) + p q (1 - q) cos(theta) / (1 - q^2 cos^2 theta).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    q = params.q
    x = math.cos(params.theta)
    denom = 1.0 - q * q * x * x
    if denom <= 1e-12:
        raise ValueError("q = 1 with theta = 0 makes the ellipsoid degenerate; "
                         "use a slightly positive theta if the limit is needed")
    s1 = q * math.sqrt(p) * math.sin(params.theta) / math.sqrt(denom)
    s3 = q * p * (1.0 - q * x * x) / denom
    cz = (1.0 - p) + p * q * (1.0 - q) * x / denom
    return Ellipsoid(
        center=np.array([0.0, 0.0, cz]),
        semiaxes=np.array([s1, s1, s3]),
        orientation=np.eye(3),
    )


def dfs_transform(n: int) -> np.ndarray:
    """Unitary from collective-mode amplitudes to site amplitudes.

    Entry (m, l) is exp(2 pi i m l / n) / sqrt(n); column 0 is the uniform
    superposition (the only collective mode coupled to the reservoir).
    """
    if not 1 <= n <= 16:
        raise ValueError(f"n must lie in 1..16, got {n}")
    m, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return np.exp(2j * np.pi * m * l / n) / np.sqrt(n)


def site_amplitudes(t: float, initial: np.ndarray, params: ReservoirParams) -> np.ndarray:
    """Site excitation amplitudes at time ``t`` from collective ones at 0.

    ``initial`` holds the collective-mode amplitudes C_m(0) (length N).
    Mode 0 decays by the collective ratio, modes 1..N-1 only pick up the
    free phase, applied uniformly so populations are phase-convention
    independent.  The site amplitudes are the transform of the result.
    """
    initial = np.asarray(initial, dtype=complex)
    n = params.n_qubits
    if initial.shape != (n,):
        raise ValueError(f"expected {n} collective amplitudes, got shape {initial.shape}")
    norm = float(np.linalg.norm(initial))
    if norm > 1.0 + _AMPLITUDE_SLACK:
        raise ValueError(f"initial amplitude norm {norm:.6f} exceeds 1")
    coeffs = initial.copy()
    coeffs[0] *= collective_amplitude_ratio(t, params)
    coeffs *= cmath.exp(-1j * params.omega0 * t)
    return dfs_transform(n) @ coeffs
