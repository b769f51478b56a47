import numpy as np
import pytest

from steerlab.coherence import (
    ReferenceBasis,
    coherence,
    fibonacci_sphere,
    msc_bruteforce,
    msc_closed_form,
    reference_basis_of,
    steered_state,
)
from steerlab.linalg import ID2, PAULIS, kron, partial_trace
from steerlab.reservoir import InitialStateParams, evolve_bipartite, initial_state, kraus_pair
from steerlab.steering import bloch_decompose, steering_ellipsoid

from conftest import random_density, singlet

Z_BASIS = ReferenceBasis(vectors=np.eye(2, dtype=complex), degenerate=False)


def projective_element(direction):
    n = np.asarray(direction, dtype=float)
    return 0.5 * (ID2 + sum(n[k] * PAULIS[k] for k in range(3)))


def family_state(q, theta, p, mode="paper"):
    rho0 = initial_state(InitialStateParams(q=q, theta=theta))
    return evolve_bipartite(rho0, kraus_pair(np.sqrt(p), mode=mode))


class TestSteeredState:
    def test_unsharp_element_does_not_steer(self, rng):
        rho = random_density(rng)
        out, p = steered_state(rho, ID2 / 2)
        assert abs(p - 0.5) < 1e-14
        assert np.allclose(out, partial_trace(rho, "B"), atol=1e-12)

    def test_singlet_anticorrelation(self):
        out, p = steered_state(singlet(), np.diag([1.0, 0.0]))
        assert abs(p - 0.5) < 1e-14
        assert np.allclose(out, np.diag([0.0, 1.0]), atol=1e-14)

    def test_product_state_unchanged(self, rng):
        rho_a = random_density(rng, dim=2)
        rho_b = random_density(rng, dim=2)
        m = projective_element([0.0, 0.6, 0.8])
        out, p = steered_state(kron(rho_a, rho_b), m)
        assert np.allclose(out, rho_b, atol=1e-12)
        assert abs(p - np.trace(m @ rho_a).real) < 1e-13

    def test_zero_probability_rejected(self):
        rho = np.outer([1, 0, 0, 0], [1, 0, 0, 0]).astype(complex)  # |00><00|
        with pytest.raises(ValueError, match="probability"):
            steered_state(rho, np.diag([0.0, 1.0]))

    def test_projective_pair_resolves_marginal(self, rng):
        rho = random_density(rng)
        m = projective_element([0.48, -0.6, 0.64])
        out1, p1 = steered_state(rho, m)
        out2, p2 = steered_state(rho, ID2 - m)
        assert abs(p1 + p2 - 1.0) < 1e-13
        assert np.allclose(p1 * out1 + p2 * out2, partial_trace(rho, "B"), atol=1e-12)


class TestCoherence:
    def test_plus_state_maximal(self):
        plus = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
        assert abs(coherence(plus, Z_BASIS) - 1.0) < 1e-14

    def test_diagonal_incoherent(self):
        assert coherence(np.diag([0.3, 0.7]).astype(complex), Z_BASIS) == 0.0

    def test_off_diagonal_magnitude(self):
        rho = np.array([[0.5, 0.3j], [-0.3j, 0.5]], dtype=complex)
        assert abs(coherence(rho, Z_BASIS) - 0.6) < 1e-14

    def test_zero_iff_diagonal_in_basis(self, rng):
        for _ in range(20):
            rho = random_density(rng, dim=2)
            basis = reference_basis_of(rho)
            assert coherence(rho, basis) < 1e-12  # diagonal in own eigenbasis
        rho = np.array([[0.6, 0.1], [0.1, 0.4]], dtype=complex)
        assert coherence(rho, Z_BASIS) > 0.1


class TestReferenceBasis:
    def test_z_diagonal(self):
        basis = reference_basis_of(np.diag([0.8, 0.2]).astype(complex))
        assert not basis.degenerate
        overlap = np.abs(basis.vectors.conj().T @ np.eye(2))
        assert np.allclose(np.sort(overlap, axis=1), [[0, 1], [0, 1]], atol=1e-12)

    def test_maximally_mixed_flagged(self):
        assert reference_basis_of(np.eye(2) / 2).degenerate

    def test_evolved_family_marginal_is_z_diagonal(self):
        rho = family_state(0.8, np.pi / 3, 0.4)
        rho_b = partial_trace(rho, "B")
        basis = reference_basis_of(rho_b)
        assert not basis.degenerate
        assert np.max(np.abs(rho_b - np.diag(np.diag(rho_b)))) < 1e-14


class TestMscBruteforce:
    def test_product_state_has_none(self, rng):
        rho = kron(random_density(rng, dim=2), random_density(rng, dim=2))
        assert msc_bruteforce(rho, n_grid=2000) < 1e-10

    def test_singlet_reaches_unity(self):
        assert abs(msc_bruteforce(singlet(), n_grid=2000) - 1.0) < 2e-2

    def test_family_state_matches_transverse_semiaxis(self):
        rho = family_state(0.8, np.pi / 3, 1.0)
        assert abs(msc_bruteforce(rho, n_grid=10_000) - 0.7559289460184545) < 1e-2

    def test_local_unitary_invariance_on_alice(self, rng):
        rho = family_state(0.8, np.pi / 3, 0.6)
        n_grid = 2000
        base = msc_bruteforce(rho, n_grid=n_grid)
        theta, phi = 0.7, 1.3
        u = np.array(
            [[np.cos(theta), -np.exp(-1j * phi) * np.sin(theta)],
             [np.exp(1j * phi) * np.sin(theta), np.cos(theta)]]
        )
        rotated = kron(u, ID2) @ rho @ kron(u, ID2).conj().T
        assert abs(msc_bruteforce(rotated, n_grid=n_grid) - base) < 2.0 / np.sqrt(n_grid)

    @pytest.mark.parametrize("p", [1.0, 0.5, 0.25])
    def test_converges_to_strict_closed_form(self, p):
        rho = family_state(0.8, np.pi / 3, p)
        e = steering_ellipsoid(bloch_decompose(rho), "B")
        assert abs(msc_bruteforce(rho, n_grid=10_000) - msc_closed_form(e.semiaxes, "strict")) < 1e-2

    def test_values_never_exceed_one(self, rng):
        for _ in range(10):
            rho = random_density(rng)
            assert msc_bruteforce(rho, n_grid=500) <= 1.0 + 1e-9

    def test_grid_size_guard(self):
        with pytest.raises(ValueError):
            msc_bruteforce(singlet(), n_grid=4)


class TestMscClosedForm:
    def test_bloch_sphere(self):
        assert msc_closed_form(np.ones(3), "paper") == 1.0
        assert msc_closed_form(np.ones(3), "strict") == 1.0

    def test_needle_along_z(self):
        q, p = 0.8, 0.49
        s3 = q * p / (1.0 + q)
        semiaxes = np.array([0.0, 0.0, s3])
        assert msc_closed_form(semiaxes, "paper") == s3
        assert msc_closed_form(semiaxes, "strict") == 0.0

    def test_reference_family_values(self):
        semiaxes = np.array([0.7559289460184545, 0.7559289460184545, 16.0 / 21.0])
        assert abs(msc_closed_form(semiaxes, "paper") - 16.0 / 21.0) < 1e-15
        assert abs(msc_closed_form(semiaxes, "strict") - 0.7559289460184545) < 1e-15

    def test_rejects_negative_semiaxes(self):
        with pytest.raises(ValueError):
            msc_closed_form(np.array([0.1, -0.2, 0.3]))

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            msc_closed_form(np.ones(3), "other")


class TestFibonacciSphere:
    def test_unit_norm_and_determinism(self):
        pts = fibonacci_sphere(500)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
        assert np.array_equal(pts, fibonacci_sphere(500))

    def test_near_uniform_coverage(self):
        pts = fibonacci_sphere(2000)
        assert np.max(np.abs(np.mean(pts, axis=0))) < 1e-2
