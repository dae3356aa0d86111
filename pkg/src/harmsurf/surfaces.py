"""Harmonic surfaces over the unit disk.

Every surface exposes vectorized evaluators on complex arrays ``z``: the
value, first, second and (where available) third Cartesian partials, each of
shape ``z.shape + (n,)``.  Three sources are supported:

* :class:`BoundarySurface` - Poisson extension of boundary data;
* :class:`ClosedFormSurface` - explicit components with exact partials;
* :class:`WeierstrassSurface` - real parts of polynomial maps with
  sum (a_j')^2 = 0, i.e. minimal surfaces in Enneper-Weierstrass form.

:class:`LiftSurface` wraps any of them as (tau(r z), eps z) in R^{n+2}.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from . import poisson
from .boundary import BoundaryMap, FourierSmooth
from .errors import DomainError, InvalidInputError
from .poisson import as_complex, partials_from_analytic
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, periodic_trapezoid


class HarmonicSurface(ABC):
    """Parametrized surface tau: U -> R^n with C^2 (often C^3) evaluators.

    ``extends_to_closure`` marks surfaces whose evaluators remain valid on the
    closed disk, so boundary quantities can be computed at r = 1 directly.
    """

    dimension: int
    quadrature: QuadratureConfig
    extends_to_closure: bool = True
    name: str = "surface"

    def points(self, z) -> np.ndarray:
        return as_complex(z, closed=self.extends_to_closure)

    @abstractmethod
    def value(self, z) -> np.ndarray: ...

    @abstractmethod
    def first(self, z) -> tuple: ...

    @abstractmethod
    def second(self, z) -> tuple: ...

    def third(self, z) -> tuple:
        raise NotImplementedError(f"{self.name} has no exact third partials")

    @property
    def has_third(self) -> bool:
        return type(self).third is not HarmonicSurface.third

    def angular(self, z) -> np.ndarray:
        """d/dtheta tau at z = r e^{i theta}: -y tau_x + x tau_y."""
        z = self.points(z)
        fx, fy = self.first(z)
        return -z.imag[..., None] * fx + z.real[..., None] * fy

    def directional(self, z, angle) -> np.ndarray:
        """Derivative along the fixed direction e^{i angle}."""
        fx, fy = self.first(self.points(z))
        angle = np.asarray(angle, dtype=float)[..., None]
        return np.cos(angle) * fx + np.sin(angle) * fy

    def radial(self, z) -> np.ndarray:
        z = self.points(z)
        return self.directional(z, np.angle(z))


class BoundarySurface(HarmonicSurface):
    """f = P[phi]; evaluators delegate to :mod:`harmsurf.poisson`."""

    def __init__(self, phi: BoundaryMap, q: QuadratureConfig = DEFAULT_QUADRATURE,
                 name: str = "boundary"):
        self.boundary = phi
        self.dimension = phi.dimension
        self.quadrature = q
        self.extends_to_closure = not phi.has_jumps
        self.name = name

    def value(self, z):
        return poisson.extend(self.boundary, z, self.quadrature)

    def first(self, z):
        return poisson.cartesian_partials(self.boundary, z, self.quadrature)

    def second(self, z):
        return poisson.second_partials(self.boundary, z, self.quadrature)

    def third(self, z):
        return poisson.third_partials(self.boundary, z, self.quadrature)

    def angular(self, z):
        return poisson.angular_derivative(self.boundary, z, self.quadrature)


class ClosedFormSurface(HarmonicSurface):
    """Surface given by explicit callbacks of (x, y).

    ``first``, ``second`` and ``third`` return tuples of partials ordered by the
    number of y-derivatives.  Harmonicity is not enforced here; see
    :func:`mean_value_residual`.
    """

    def __init__(self, dimension, value, first, second, third=None, *, name="closed-form",
                 q: QuadratureConfig = DEFAULT_QUADRATURE, extends_to_closure=True):
        self.dimension = dimension
        self.quadrature = q
        self.extends_to_closure = extends_to_closure
        self.name = name
        self._value, self._first, self._second, self._third = value, first, second, third

    def _xy(self, z):
        z = self.points(z)
        return z.real, z.imag

    def value(self, z):
        return self._value(*self._xy(z))

    def first(self, z):
        return self._first(*self._xy(z))

    def second(self, z):
        return self._second(*self._xy(z))

    @property
    def has_third(self):
        return self._third is not None

    def third(self, z):
        if self._third is None:
            return super().third(z)
        return self._third(*self._xy(z))


def _const(vec, x):
    return np.broadcast_to(np.asarray(vec, dtype=float), np.shape(x) + (len(vec),)).copy()


def tilted_disk(m: float, q: QuadratureConfig = DEFAULT_QUADRATURE) -> ClosedFormSurface:
    """tau(x, y) = (x, y, m (x + y)), the planar family showing the 1/2 constant is sharp."""
    m = float(m)
    if not m >= 0:
        raise InvalidInputError("tilted disk needs m >= 0")
    zero = (0.0, 0.0, 0.0)
    return ClosedFormSurface(
        3,
        lambda x, y: np.stack([x, y, m * (x + y)], axis=-1),
        lambda x, y: (_const((1.0, 0.0, m), x), _const((0.0, 1.0, m), x)),
        lambda x, y: tuple(_const(zero, x) for _ in range(3)),
        lambda x, y: tuple(_const(zero, x) for _ in range(4)),
        name=f"tilted:{m:g}", q=q)


def harmonic_saddle(q: QuadratureConfig = DEFAULT_QUADRATURE) -> ClosedFormSurface:
    """The harmonic graph (x, y, xy); K = -1 / (1 + x^2 + y^2)^2."""
    zero = (0.0, 0.0, 0.0)

    def first(x, y):
        o, z = np.ones_like(x), np.zeros_like(x)
        return np.stack([o, z, y], -1), np.stack([z, o, x], -1)

    return ClosedFormSurface(
        3,
        lambda x, y: np.stack([x, y, x * y], axis=-1),
        first,
        lambda x, y: (_const(zero, x), _const((0.0, 0.0, 1.0), x), _const(zero, x)),
        lambda x, y: tuple(_const(zero, x) for _ in range(4)),
        name="saddle", q=q)


class PolynomialSurface(HarmonicSurface):
    """tau = Re a(z) for a vector of polynomials; coefficients shape (K+1, n)."""

    def __init__(self, coefficients, q: QuadratureConfig = DEFAULT_QUADRATURE,
                 name: str = "polynomial"):
        c = np.atleast_2d(np.asarray(coefficients, dtype=complex))
        self.coefficients = c
        self.dimension = c.shape[1]
        self.quadrature = q
        self.extends_to_closure = True
        self.name = name

    def analytic(self, z, order=0):
        """a^{(order)}(z), complex array of shape z.shape + (n,)."""
        c = self.coefficients
        for _ in range(order):
            c = P.polyder(c, axis=0) if c.shape[0] > 1 else np.zeros((1, c.shape[1]))
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (self.dimension,), dtype=complex)
        for ck in c[::-1]:
            out = out * z[..., None] + ck
        return out

    def value(self, z):
        return np.real(self.analytic(self.points(z)))

    def first(self, z):
        return partials_from_analytic(self.analytic(self.points(z), 1), 1)

    def second(self, z):
        return partials_from_analytic(self.analytic(self.points(z), 2), 2)

    def third(self, z):
        return partials_from_analytic(self.analytic(self.points(z), 3), 3)


def _conformality_samples():
    r = np.linspace(0.1, 0.95, 8)
    t = np.linspace(0.0, 2 * np.pi, 8, endpoint=False) + 0.3
    return (r[:, None] * np.exp(1j * t[None, :])).ravel()


@dataclass(frozen=True, eq=False)
class WeierstrassData:
    """Polynomials a_1 ... a_n (power-series coefficients, lowest degree first)."""

    coefficients: tuple

    def array(self) -> np.ndarray:
        rows = [np.atleast_1d(np.asarray(c, dtype=complex)) for c in self.coefficients]
        k = max(len(r) for r in rows)
        return np.stack([np.pad(r, (0, k - len(r))) for r in rows], axis=1)

    def conformality_residual(self, z=None) -> float:
        """max |sum_j a_j'(z)^2| over the sample points."""
        surf = PolynomialSurface(self.array())
        z = _conformality_samples() if z is None else np.asarray(z, dtype=complex)
        d = surf.analytic(z, 1)
        return float(np.max(np.abs(np.sum(d * d, axis=-1))))

    @classmethod
    def from_gauss_map(cls, f, g) -> "WeierstrassData":
        """Data from the Weierstrass pair (f, g): a' = (f(1-g^2)/2, i f(1+g^2)/2, f g)."""
        f = np.asarray(f, dtype=complex)
        g = np.asarray(g, dtype=complex)
        g2 = P.polymul(g, g)
        d1 = P.polymul(f, P.polysub([1.0], g2)) / 2
        d2 = 1j * P.polymul(f, P.polyadd([1.0], g2)) / 2
        d3 = P.polymul(f, g)
        return cls(tuple(tuple(P.polyint(d)) for d in (d1, d2, d3)))


class WeierstrassSurface(PolynomialSurface):
    pass


def minimal_from_weierstrass(w: WeierstrassData, q: QuadratureConfig = DEFAULT_QUADRATURE,
                             tol: float = 1e-10, name: str = "weierstrass") -> WeierstrassSurface:
    """Minimal surface p_j = Re a_j; rejects data with sum (a_j')^2 != 0."""
    coeffs = w.array()
    if coeffs.shape[1] < 3:
        raise InvalidInputError("Weierstrass data needs n >= 3 components")
    residual = w.conformality_residual()
    if residual > tol:
        raise InvalidInputError(
            f"Weierstrass data is not conformal: max |sum a_j'^2| = {residual:.3g}")
    return WeierstrassSurface(coeffs, q, name=name)


def enneper(q: QuadratureConfig = DEFAULT_QUADRATURE) -> WeierstrassSurface:
    """Enneper's surface a = (z - z^3/3, i(z + z^3/3), z^2)."""
    w = WeierstrassData(((0, 1, 0, -1 / 3), (0, 1j, 0, 1j / 3), (0, 0, 1)))
    return minimal_from_weierstrass(w, q, name="enneper")


def random_weierstrass(rng: np.random.Generator, degree: int = 2,
                       q: QuadratureConfig = DEFAULT_QUADRATURE) -> WeierstrassSurface:
    """Random regular minimal surface from a Weierstrass pair (f, g).

    f = 1 + small terms has no zeros in the closed disk, so the
    parametrization has no branch points.
    """
    f = np.zeros(degree + 1, dtype=complex)
    f[0] = 1.0
    tail = rng.normal(size=degree) + 1j * rng.normal(size=degree)
    f[1:] = 0.5 * tail / max(np.sum(np.abs(tail)), 1e-300) * rng.uniform(0.2, 0.9)
    g = 0.6 * (rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1))
    return minimal_from_weierstrass(WeierstrassData.from_gauss_map(f, g), q, name="random-weierstrass")


class LiftSurface(HarmonicSurface):
    """tau^eps_r(z) = (tau(r z), eps z) in R^{n+2}, a regular harmonic surface."""

    def __init__(self, inner: HarmonicSurface, eps: float, r: float):
        if not eps > 0:
            raise InvalidInputError("lift needs eps > 0")
        if not 0 < r < 1:
            raise InvalidInputError("lift needs 0 < r < 1")
        self.inner, self.eps, self.r = inner, float(eps), float(r)
        self.dimension = inner.dimension + 2
        self.quadrature = inner.quadrature
        self.extends_to_closure = True
        self.name = f"lift({inner.name}, eps={eps:g}, r={r:g})"

    def _append(self, parts, plane):
        return tuple(np.concatenate([p, c], axis=-1) for p, c in zip(parts, plane))

    def value(self, z):
        z = self.points(z)
        inner = self.inner.value(self.r * z)
        return np.concatenate([inner, self.eps * np.stack([z.real, z.imag], -1)], axis=-1)

    def first(self, z):
        z = self.points(z)
        fx, fy = self.inner.first(self.r * z)
        ex = _const((self.eps, 0.0), z.real)
        ey = _const((0.0, self.eps), z.real)
        return self._append((self.r * fx, self.r * fy), (ex, ey))

    def second(self, z):
        z = self.points(z)
        parts = self.inner.second(self.r * z)
        zero = _const((0.0, 0.0), z.real)
        return self._append(tuple(self.r ** 2 * p for p in parts), (zero,) * 3)

    @property
    def has_third(self):
        return self.inner.has_third

    def third(self, z):
        z = self.points(z)
        parts = self.inner.third(self.r * z)
        zero = _const((0.0, 0.0), z.real)
        return self._append(tuple(self.r ** 3 * p for p in parts), (zero,) * 4)


def from_boundary(phi: BoundaryMap, q: QuadratureConfig = DEFAULT_QUADRATURE,
                  name: str = "boundary") -> BoundarySurface:
    return BoundarySurface(phi, q, name=name)


def perturb_lift(s: HarmonicSurface, eps: float, r: float) -> LiftSurface:
    return LiftSurface(s, eps, r)


def boundary_trace(s: HarmonicSurface, degree: int = 16) -> BoundaryMap:
    """Trigonometric boundary data of a surface continuous on the closed disk.

    Sampled by FFT on 4 * degree + 4 points, exact for polynomial surfaces of
    degree at most ``degree``.
    """
    if not s.extends_to_closure:
        raise DomainError(f"{s.name} has no continuous boundary trace")
    n = 4 * degree + 4
    t = 2 * np.pi * np.arange(n) / n
    samples = s.value(np.exp(1j * t))
    coef = np.fft.rfft(samples, axis=0) / n
    cos = 2 * coef.real[: degree + 1].T
    sin = -2 * coef.imag[: degree + 1].T
    cos[:, 0] /= 2
    return BoundaryMap(s.dimension, fourier=FourierSmooth.from_arrays(cos, sin))


def mean_value_residual(s: HarmonicSurface, z: complex, rho: float,
                        q: QuadratureConfig | None = None) -> float:
    """|tau(z) - average of tau over the circle |w - z| = rho|, a harmonicity certificate."""
    q = q or s.quadrature
    z = complex(z.z) if isinstance(z, poisson.DiskPoint) else complex(z)
    if not rho > 0:
        raise DomainError("radius must be positive")
    reach = abs(z) + rho
    if reach >= 1.0 and not (s.extends_to_closure and reach <= 1.0):
        raise DomainError("averaging circle leaves the disk")
    avg, _ = periodic_trapezoid(lambda t: s.value(z + rho * np.exp(1j * t)), q)
    return float(np.linalg.norm(s.value(z) - avg / (2 * np.pi)))
