import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmsurf import poisson
from harmsurf.boundary import BoundaryMap, circle_boundary, polygon_boundary, random_fourier_boundary
from harmsurf.errors import DomainError
from harmsurf.poisson import DiskPoint
from harmsurf.quadrature import QuadratureConfig

from conftest import disk_points

SQUARE = polygon_boundary([0, np.pi / 2, np.pi, 3 * np.pi / 2])
MIXED = SQUARE + BoundaryMap.trigonometric([[0.2, 0.0, 0.3, 0.1, 0.0], [0.0, 0.5, 0.0, 0.0, -0.2]])


def test_kernel_has_unit_mass_and_rejects_boundary():
    t = 2 * np.pi * np.arange(512) / 512
    for r in (0.0, 0.5, 0.9):
        assert np.mean(poisson.kernel(r, t)) * 2 * np.pi == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        poisson.kernel(1.0, 0.3)


def test_disk_point():
    p = DiskPoint(0.5, -np.pi / 2)
    assert p.theta == pytest.approx(1.5 * np.pi)
    assert p.z == pytest.approx(-0.5j)
    with pytest.raises(DomainError):
        DiskPoint(1.0, 0.0)
    with pytest.raises(DomainError):
        poisson.extend(SQUARE, 1.2)


def test_identity_extension():
    z = np.array([0.0, 0.3 + 0.4j, -0.7j])
    np.testing.assert_allclose(poisson.extend(circle_boundary(), z),
                               np.column_stack([z.real, z.imag]), atol=1e-15)


def test_single_arc_at_centre_is_arc_fraction():
    phi = BoundaryMap.piecewise_constant([0.5, 2.0], [[1.0], [0.0]])
    assert poisson.extend(phi, 0.0)[0] == pytest.approx(1.5 / (2 * np.pi), abs=1e-15)


def test_square_centre_and_symmetry():
    assert np.allclose(poisson.extend(SQUARE, 0.0), 0.0, atol=1e-15)
    # t -> pi - t swaps the first two arcs and the two coordinates
    v = poisson.extend(SQUARE, 0.5j)
    assert v[0] == pytest.approx(v[1], abs=1e-14)


def test_exact_matches_quadrature(rng):
    z = disk_points(rng, 12, 0.95)
    q = QuadratureConfig(angular_nodes=512)
    exact = poisson.extend(MIXED, z)
    quad = poisson.extend(MIXED, z, q, method="quadrature")
    np.testing.assert_allclose(exact, quad, atol=1e-9)
    no_split = poisson.extend(SQUARE, z[:3] * 0.5, q.replace(jump_split=False, abs_tol=1e-3),
                              method="quadrature")
    np.testing.assert_allclose(poisson.extend(SQUARE, z[:3] * 0.5), no_split, atol=1e-3)


def test_partials_match_finite_differences(rng):
    z = disk_points(rng, 20, 0.85)
    h = 1e-5
    fx, fy = poisson.cartesian_partials(MIXED, z)
    ex = lambda w: poisson.extend(MIXED, w)
    np.testing.assert_allclose(fx, (ex(z + h) - ex(z - h)) / (2 * h), atol=1e-7)
    np.testing.assert_allclose(fy, (ex(z + 1j * h) - ex(z - 1j * h)) / (2 * h), atol=1e-7)
    fxx, fxy, fyy = poisson.second_partials(MIXED, z)
    np.testing.assert_allclose(fxx + fyy, 0.0, atol=1e-10)
    gx = lambda w: poisson.cartesian_partials(MIXED, w)[0]
    np.testing.assert_allclose(fxy, (gx(z + 1j * h) - gx(z - 1j * h)) / (2 * h), atol=1e-6)
    fxxx, fxxy, fxyy, fyyy = poisson.third_partials(MIXED, z)
    np.testing.assert_allclose(fxxx + fxyy, 0.0, atol=1e-9)
    np.testing.assert_allclose(fxxy + fyyy, 0.0, atol=1e-9)


def test_angular_derivative_three_ways(rng):
    z = disk_points(rng, 8, 0.9)
    q = QuadratureConfig(angular_nodes=512)
    exact = poisson.angular_derivative(MIXED, z)
    quad = poisson.angular_derivative(MIXED, z, q, method="quadrature")
    np.testing.assert_allclose(exact, quad, atol=1e-8)
    h = 1e-6
    rot = lambda c: poisson.extend(MIXED, z * np.exp(1j * c))
    np.testing.assert_allclose(exact, (rot(h) - rot(-h)) / (2 * h), atol=1e-6)


def test_radial_derivative_by_conjugate_path(rng):
    z = disk_points(rng, 8, 0.9)
    kernel_path = poisson.radial_derivative(MIXED, z)
    conj_path = poisson.radial_derivative(MIXED, z, method="conjugate")
    np.testing.assert_allclose(kernel_path, conj_path, atol=1e-8)
    with pytest.raises(DomainError):
        poisson.radial_derivative(MIXED, 0.0, method="conjugate")


@pytest.mark.parametrize("t", [0.01, np.pi / 4, np.pi / 2, 3 * np.pi / 4, -2.0, 3.1])
def test_conjugate_kernel_mass_is_pi(t):
    assert poisson.conjugate_kernel_mass(t) == pytest.approx(np.pi, abs=1e-9)


def test_conjugate_kernel_mass_closed_form():
    # the r-integral of 2|sin t| / ((r - cos t)^2 + sin^2 t) is an arctan difference
    t = 1.1
    s, c = np.sin(t), np.cos(t)
    closed = 2 * (np.arctan((1 - c) / s) - np.arctan((-1 - c) / s))
    assert closed == pytest.approx(np.pi, abs=1e-14)
    with pytest.raises(DomainError):
        poisson.conjugate_kernel_mass(0.0)


def test_closed_disk_only_for_continuous_data():
    z = np.exp(0.7j)
    np.testing.assert_allclose(poisson.extend(circle_boundary(), z), [z.real, z.imag], atol=1e-15)
    with pytest.raises(DomainError):
        poisson.extend(SQUARE, 1j)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_maximum_principle(seed):
    rng = np.random.default_rng(seed)
    phi = random_fourier_boundary(rng, dimension=2, degree=3) + SQUARE
    t = np.linspace(0, 2 * np.pi, 4001)
    bvals = phi(t)
    v = poisson.extend(phi, disk_points(rng, 16, 0.99))
    assert np.all(v <= bvals.max(axis=0) + 1e-9)
    assert np.all(v >= bvals.min(axis=0) - 1e-9)
