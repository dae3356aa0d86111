import numpy as np
import pytest

from harmsurf.boundary import circle_boundary, polygon_boundary
from harmsurf.errors import DomainError, InvalidInputError
from harmsurf.surfaces import (
    ClosedFormSurface,
    WeierstrassData,
    boundary_trace,
    enneper,
    from_boundary,
    harmonic_saddle,
    mean_value_residual,
    minimal_from_weierstrass,
    perturb_lift,
    random_weierstrass,
    tilted_disk,
)

from conftest import disk_points


def fd_first(s, z, h=1e-6):
    return ((s.value(z + h) - s.value(z - h)) / (2 * h),
            (s.value(z + 1j * h) - s.value(z - 1j * h)) / (2 * h))


def fd_second(s, z, h=1e-5):
    fx = lambda w: s.first(w)[0]
    fy = lambda w: s.first(w)[1]
    return ((fx(z + h) - fx(z - h)) / (2 * h),
            (fx(z + 1j * h) - fx(z - 1j * h)) / (2 * h),
            (fy(z + 1j * h) - fy(z - 1j * h)) / (2 * h))


SURFACES = {
    "tilted": lambda: tilted_disk(3.0),
    "saddle": harmonic_saddle,
    "enneper": enneper,
    "weierstrass": lambda: random_weierstrass(np.random.default_rng(5)),
    "square": lambda: from_boundary(polygon_boundary([0, np.pi / 2, np.pi, 3 * np.pi / 2])),
    "lift": lambda: perturb_lift(enneper(), 0.1, 0.8),
}


@pytest.mark.parametrize("name", SURFACES)
def test_partials_match_finite_differences(name, rng):
    s = SURFACES[name]()
    z = disk_points(rng, 10, 0.85)
    for exact, fd in zip(s.first(z), fd_first(s, z)):
        np.testing.assert_allclose(exact, fd, atol=1e-6 * max(1, np.abs(exact).max()))
    for exact, fd in zip(s.second(z), fd_second(s, z)):
        np.testing.assert_allclose(exact, fd, atol=2e-5 * max(1, np.abs(exact).max()))
    fxx, _, fyy = s.second(z)
    np.testing.assert_allclose(fxx + fyy, 0.0, atol=1e-8 * max(1, np.abs(fxx).max()))


@pytest.mark.parametrize("name", SURFACES)
def test_mean_value_property(name, rng):
    s = SURFACES[name]()
    for z in disk_points(rng, 5, 0.5):
        assert mean_value_residual(s, z, 0.3) <= 1e-8


def test_mean_value_rejects_circle_leaving_disk():
    with pytest.raises(DomainError):
        mean_value_residual(harmonic_saddle(), 0.8, 0.5)


def test_tilted_disk_closed_form():
    s = tilted_disk(2.0)
    np.testing.assert_allclose(s.value(0.3 + 0.4j), [0.3, 0.4, 1.4])
    with pytest.raises(InvalidInputError):
        tilted_disk(-1.0)


def test_flat_weierstrass_and_rejection():
    flat = WeierstrassData(((0, 1), (0, -1j), (0,)))
    assert flat.conformality_residual() == 0.0
    s = minimal_from_weierstrass(flat)
    np.testing.assert_allclose(s.value(0.2 + 0.5j), [0.2, 0.5, 0.0], atol=1e-15)
    bad = WeierstrassData(((0, 1), (0, 1), (0,)))
    assert bad.conformality_residual() == pytest.approx(2.0)
    with pytest.raises(InvalidInputError, match="not conformal"):
        minimal_from_weierstrass(bad)
    with pytest.raises(InvalidInputError):
        minimal_from_weierstrass(WeierstrassData(((0, 1), (0, -1j))))


def test_enneper_is_conformal_and_minimal(rng):
    s = enneper()
    z = disk_points(rng, 10, 0.9)
    fx, fy = s.first(z)
    E, F, G = (np.sum(a * b, -1) for a, b in ((fx, fx), (fx, fy), (fy, fy)))
    np.testing.assert_allclose(E, G, rtol=1e-13)
    np.testing.assert_allclose(F, 0.0, atol=1e-13)
    np.testing.assert_allclose(E, (1 + np.abs(z) ** 2) ** 2, rtol=1e-13)


@pytest.mark.parametrize("seed", range(5))
def test_random_weierstrass_is_conformal(seed):
    s = random_weierstrass(np.random.default_rng(seed))
    assert s.dimension == 3
    z = disk_points(np.random.default_rng(seed + 100), 10, 1.0)
    d = s.analytic(z, 1)
    assert np.max(np.abs(np.sum(d * d, -1))) < 1e-10


def test_lift_shape_and_regularity():
    s = perturb_lift(from_boundary(circle_boundary()), 0.5, 0.9)
    assert s.dimension == 4
    z = 0.2 - 0.1j
    np.testing.assert_allclose(s.value(z), [0.9 * 0.2, -0.9 * 0.1, 0.1, -0.05], atol=1e-15)
    with pytest.raises(InvalidInputError):
        perturb_lift(enneper(), 0.0, 0.5)
    with pytest.raises(InvalidInputError):
        perturb_lift(enneper(), 0.1, 1.0)


def test_boundary_trace_reproduces_polynomial_surface(rng):
    s = enneper()
    phi = boundary_trace(s, degree=4)
    ext = from_boundary(phi)
    z = disk_points(rng, 10, 0.95)
    np.testing.assert_allclose(ext.value(z), s.value(z), atol=1e-13)
    with pytest.raises(DomainError):
        boundary_trace(from_boundary(polygon_boundary([0, 2, 4])))


def test_closure_flags():
    assert from_boundary(circle_boundary()).extends_to_closure
    assert not from_boundary(polygon_boundary([0, 2, 4])).extends_to_closure
    assert enneper().extends_to_closure


def test_directional_and_angular_are_consistent():
    s = enneper()
    z = 0.4 * np.exp(0.9j)
    ang = s.angular(z)
    tangent = s.directional(z, 0.9 + np.pi / 2) * 0.4
    np.testing.assert_allclose(ang, tangent, atol=1e-14)
    np.testing.assert_allclose(s.radial(z), s.directional(z, 0.9), atol=1e-14)


def test_closed_form_surface_requires_callables():
    s = ClosedFormSurface(2, lambda x, y: np.stack([x, -y], -1),
                          lambda x, y: (np.stack([np.ones_like(x), 0 * x], -1),
                                        np.stack([0 * x, -np.ones_like(x)], -1)),
                          lambda x, y: tuple(np.zeros(np.shape(x) + (2,)) for _ in range(3)),
                          name="mirror")
    assert not s.has_third
    np.testing.assert_allclose(s.value(0.1 + 0.2j), [0.1, -0.2])
