import numpy as np
import pytest

from steerlab.linalg import SingularMarginalError, kron, partial_trace, validate_density
from steerlab.reservoir import InitialStateParams, initial_state
from steerlab.steering import (
    BlochRep,
    Ellipsoid,
    assemble_from_bloch,
    bloch_decompose,
    canonical_state,
    ellipsoid_surface_points,
    steering_ellipsoid,
)

from conftest import basis_ket, random_density, singlet

S1_REF = 0.7559289460184545  # q sin(theta) / sqrt(1 - q^2 cos^2 theta) at q=0.8, theta=pi/3
S3_REF = 16.0 / 21.0
CENTER_Z_REF = 2.0 / 21.0  # verified against projective steered states directly


def random_bloch_rep(rng, scale=1.0):
    return BlochRep(
        a=scale * rng.uniform(-1, 1, 3),
        b=scale * rng.uniform(-1, 1, 3),
        T=scale * rng.uniform(-1, 1, (3, 3)),
    )


def quadratic_form(e: Ellipsoid, points: np.ndarray) -> np.ndarray:
    local = (points - e.center) @ e.orientation
    return np.sum((local / e.semiaxes) ** 2, axis=1)


class TestBlochDecompose:
    def test_product_of_poles(self):
        rho = np.outer(basis_ket(1), basis_ket(1).conj())  # |01><01|
        rep = bloch_decompose(rho)
        assert np.allclose(rep.a, [0, 0, 1], atol=1e-14)
        assert np.allclose(rep.b, [0, 0, -1], atol=1e-14)
        assert np.allclose(rep.T, np.diag([0, 0, -1]), atol=1e-14)

    def test_maximally_mixed(self):
        rep = bloch_decompose(np.eye(4) / 4)
        assert np.allclose(rep.a, 0) and np.allclose(rep.b, 0) and np.allclose(rep.T, 0)

    def test_singlet_correlations(self):
        rep = bloch_decompose(singlet())
        assert np.allclose(rep.a, 0, atol=1e-14) and np.allclose(rep.b, 0, atol=1e-14)
        assert np.allclose(rep.T, -np.eye(3), atol=1e-14)

    def test_rejects_unphysical(self):
        with pytest.raises(ValueError, match="physical"):
            bloch_decompose(np.diag([0.6, 0.6, -0.1, -0.1]).astype(complex))


class TestAssemble:
    def test_zero_coordinates(self):
        rep = BlochRep(a=np.zeros(3), b=np.zeros(3), T=np.zeros((3, 3)))
        assert np.allclose(assemble_from_bloch(rep), np.eye(4) / 4)

    def test_singlet_round_trip(self):
        assert np.allclose(assemble_from_bloch(bloch_decompose(singlet())), singlet(), atol=1e-14)

    def test_product_reconstruction(self):
        rep = BlochRep(a=np.array([0.0, 0.0, 1.0]), b=np.array([0.0, 0.0, 1.0]), T=np.diag([0.0, 0.0, 1.0]))
        rho = assemble_from_bloch(rep)
        assert np.allclose(rho, np.outer(basis_ket(0), basis_ket(0).conj()), atol=1e-14)

    def test_round_trip_on_arbitrary_coordinates(self, rng):
        for _ in range(50):
            rep = random_bloch_rep(rng, scale=1.5)  # not necessarily physical
            back = bloch_decompose(assemble_from_bloch(rep), validate=False)
            assert np.max(np.abs(back.a - rep.a)) < 1e-12
            assert np.max(np.abs(back.b - rep.b)) < 1e-12
            assert np.max(np.abs(back.T - rep.T)) < 1e-12

    def test_physical_round_trip_stays_physical(self, rng):
        for _ in range(20):
            rho = random_density(rng)
            rebuilt = assemble_from_bloch(bloch_decompose(rho))
            assert validate_density(rebuilt, tol=1e-9).valid


class TestSteeringEllipsoid:
    def test_product_state_is_point(self, rng):
        rho_a = np.diag([0.7, 0.3]).astype(complex)
        rho_b = random_density(rng, dim=2)
        rep = bloch_decompose(kron(rho_a, rho_b))
        e = steering_ellipsoid(rep, "B")
        assert np.max(e.semiaxes) < 1e-12
        assert np.allclose(e.center, rep.b, atol=1e-12)

    def test_singlet_fills_bloch_ball(self):
        e = steering_ellipsoid(bloch_decompose(singlet()), "B")
        assert np.allclose(e.center, 0, atol=1e-14)
        assert np.allclose(e.semiaxes, 1.0, atol=1e-12)

    def test_entangled_family_matches_closed_form(self):
        rho = initial_state(InitialStateParams(q=0.8, theta=np.pi / 3))
        e = steering_ellipsoid(bloch_decompose(rho), "B")
        assert np.allclose(e.center, [0.0, 0.0, CENTER_Z_REF], atol=1e-10)
        assert np.allclose(e.semiaxes, [S1_REF, S1_REF, S3_REF], atol=1e-10)
        assert np.allclose(e.orientation, np.eye(3), atol=1e-12)

    def test_pure_marginal_rejected(self):
        rho = np.outer(basis_ket(0), basis_ket(0).conj())
        with pytest.raises(SingularMarginalError):
            steering_ellipsoid(bloch_decompose(rho), "B")

    def test_orientation_orthogonal_and_contained(self, rng):
        # Containment means every surface point stays inside the Bloch
        # ball; |center| + s_max can exceed 1 when the major axis is not
        # radial, so it is only checked as an upper bound on the surface.
        for _ in range(100):
            rep = bloch_decompose(random_density(rng))
            e = steering_ellipsoid(rep, "B")
            assert np.max(np.abs(e.orientation @ e.orientation.T - np.eye(3))) < 1e-10
            pts = ellipsoid_surface_points(e, 8, 16)
            norms = np.linalg.norm(pts, axis=1)
            assert np.max(norms) <= 1.0 + 1e-6
            assert np.max(norms) <= np.linalg.norm(e.center) + np.max(e.semiaxes) + 1e-9

    def test_surface_containment_many_states(self, rng):
        for _ in range(1000):
            rep = bloch_decompose(random_density(rng), validate=False)
            e = steering_ellipsoid(rep, "B")
            pts = ellipsoid_surface_points(e, 8, 16)
            assert np.max(np.linalg.norm(pts, axis=1)) <= 1.0 + 1e-6

    def test_party_swap_symmetry(self, rng):
        for _ in range(20):
            rep = bloch_decompose(random_density(rng))
            swapped = BlochRep(a=rep.b, b=rep.a, T=rep.T.T)
            ea = steering_ellipsoid(rep, "A")
            eb = steering_ellipsoid(swapped, "B")
            assert np.allclose(ea.center, eb.center, atol=1e-12)
            assert np.allclose(ea.semiaxes, eb.semiaxes, atol=1e-12)


class TestCanonicalState:
    def test_singlet_fixed_point(self):
        assert np.allclose(canonical_state(singlet()), singlet(), atol=1e-12)

    def test_pure_marginal_rejected(self):
        with pytest.raises(SingularMarginalError):
            canonical_state(np.outer(basis_ket(0), basis_ket(0).conj()))

    def test_marginal_and_ellipsoid_preserved(self):
        rho = initial_state(InitialStateParams(q=0.8, theta=np.pi / 3))
        canon = canonical_state(rho)
        assert np.allclose(partial_trace(canon, "A"), np.eye(2) / 2, atol=1e-10)
        before = steering_ellipsoid(bloch_decompose(rho), "B")
        after = steering_ellipsoid(bloch_decompose(canon), "B")
        assert np.allclose(before.semiaxes, after.semiaxes, atol=1e-8)

    def test_filter_invariance_on_random_states(self, rng):
        for _ in range(30):
            rho = random_density(rng)
            before = steering_ellipsoid(bloch_decompose(rho), "B")
            after = steering_ellipsoid(bloch_decompose(canonical_state(rho), validate=False), "B")
            assert np.allclose(
                np.sort(before.semiaxes), np.sort(after.semiaxes), atol=1e-8
            )
            if np.min(before.semiaxes) > 1e-6:
                # same point set: the after-surface satisfies the before-form
                pts = ellipsoid_surface_points(after, 6, 12)
                assert np.max(np.abs(quadratic_form(before, pts) - 1.0)) < 1e-6


class TestSurfacePoints:
    def test_unit_sphere(self):
        e = Ellipsoid(center=np.zeros(3), semiaxes=np.ones(3), orientation=np.eye(3))
        pts = ellipsoid_surface_points(e, 16, 32)
        assert pts.shape == (16 * 32, 3)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)

    def test_point_ellipsoid(self):
        center = np.array([0.1, -0.2, 0.3])
        e = Ellipsoid(center=center, semiaxes=np.zeros(3), orientation=np.eye(3))
        assert np.allclose(ellipsoid_surface_points(e, 4, 4), center, atol=1e-15)

    def test_quadratic_form_is_one(self):
        e = Ellipsoid(
            center=np.array([0.0, 0.0, 0.5]),
            semiaxes=np.array([0.5, 0.5, 0.25]),
            orientation=np.eye(3),
        )
        pts = ellipsoid_surface_points(e, 12, 24)
        assert np.max(np.abs(quadratic_form(e, pts) - 1.0)) < 1e-12

    def test_rejects_degenerate_grid(self):
        e = Ellipsoid(center=np.zeros(3), semiaxes=np.ones(3), orientation=np.eye(3))
        with pytest.raises(ValueError):
            ellipsoid_surface_points(e, 1, 8)
