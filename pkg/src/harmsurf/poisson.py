"""Poisson kernel, harmonic extension and its derivatives.

The extension f = P[phi] of boundary data is evaluated through closed forms:

* the piecewise-constant part is a combination of harmonic measures of arcs,
  and its derivatives are sums of ``1 / (zeta_k - z)^d`` over the jump points;
* the trigonometric part ``Re sum c_k e^{ikt}`` extends to ``Re sum c_k z^k``.

Both parts are written as f = Re A(z) for a vector of analytic functions A, so
Cartesian partials follow from A', A'', A''' via d/dx = d/dz and d/dy = i d/dz.
Quadrature evaluations of the same integrals (``method="quadrature"``) are kept
as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .boundary import BoundaryMap
from .errors import DomainError
from .quadrature import (
    DEFAULT_QUADRATURE,
    TWO_PI,
    QuadratureConfig,
    adaptive_gauss_legendre,
    nodes_for_radius,
    periodic_trapezoid,
)

__all__ = [
    "DiskPoint", "QuadratureConfig", "kernel", "conjugate_kernel", "extend",
    "angular_derivative", "radial_derivative", "conjugate_kernel_mass",
    "cartesian_partials", "second_partials", "third_partials", "analytic_derivative",
    "partials_from_analytic",
]


@dataclass(frozen=True)
class DiskPoint:
    """z = r e^{i theta} in the open unit disk; theta is reduced mod 2*pi."""

    r: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.r < 1.0):
            raise DomainError(f"disk point needs 0 <= r < 1, got r={self.r}")
        object.__setattr__(self, "theta", float(np.mod(self.theta, TWO_PI)))

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(float(abs(z)), float(np.angle(z)))

    @property
    def z(self) -> complex:
        return self.r * np.exp(1j * self.theta)


def as_complex(z, closed: bool = False) -> np.ndarray:
    """Coerce a DiskPoint, a sequence of them, or complex numbers to an array.

    With ``closed`` the boundary circle is admitted (for data whose extension
    is continuous up to the boundary).
    """
    if isinstance(z, DiskPoint):
        arr = np.asarray(z.z)
    elif isinstance(z, (list, tuple)) and z and isinstance(z[0], DiskPoint):
        arr = np.array([p.z for p in z])
    else:
        arr = np.asarray(z, dtype=complex)
    mod = np.abs(arr)
    outside = mod > 1.0 + 1e-12 if closed else mod >= 1.0
    if np.any(outside):
        raise DomainError("evaluation point outside the admissible disk")
    return arr


def kernel(r, t):
    """Poisson kernel (1 - r^2) / (2 pi (1 - 2 r cos t + r^2))."""
    r = np.asarray(r, dtype=float)
    if np.any(r >= 1) or np.any(r < 0):
        raise DomainError("Poisson kernel needs 0 <= r < 1")
    return (1.0 - r * r) / (TWO_PI * (1.0 - 2.0 * r * np.cos(t) + r * r))


def conjugate_kernel(r, t):
    """Im F(r e^{it}) with F(z) = 2z / (1 - z), i.e. 2 r sin t / |1 - r e^{it}|^2."""
    r = np.asarray(r, dtype=float)
    return 2.0 * r * np.sin(t) / (1.0 - 2.0 * r * np.cos(t) + r * r)


# closed-form pieces -------------------------------------------------------

def _arc_measures(z, a, b):
    """Harmonic measure at z of the arcs (a_l, b_l); shape z.shape + (m,)."""
    z = z[..., None]
    ratio = (np.exp(1j * b) - z) / (np.exp(1j * a) - z)
    return np.mod(np.angle(ratio), TWO_PI) / np.pi - (b - a) / TWO_PI


def _pwc_value(pwc, z):
    if pwc.values.shape[0] == 1:
        return np.broadcast_to(pwc.values[0], z.shape + (pwc.dimension,)).copy()
    a = pwc.breakpoints
    b = np.append(a[1:], a[0] + TWO_PI)
    return _arc_measures(z, a, b) @ pwc.values


def _pwc_analytic(pwc, z, order):
    # f_pwc = Re A with A' = -(i/pi) sum_k jump_k / (zeta_k - z)
    jumps = pwc.jump_vectors
    if jumps.shape[0] == 0:
        return np.zeros(z.shape + (pwc.dimension,), dtype=complex)
    zeta = np.exp(1j * pwc.jump_locations)
    inv = 1.0 / (zeta - z[..., None]) ** order
    return (-1j / np.pi) * factorial(order - 1) * (inv @ jumps)


def _fourier_analytic(fourier, z, order):
    c = fourier.complex_coefficients
    k = np.arange(fourier.degree + 1)
    falling = np.ones_like(k, dtype=float)
    for j in range(order):
        falling = falling * (k - j)
    powers = np.where(k >= order, k - order, 0)
    terms = np.where(k >= order, falling, 0.0) * z[..., None] ** powers
    return terms @ c


def analytic_derivative(phi: BoundaryMap, z, order: int):
    """The order-th complex derivative of A, where P[phi] = Re A; order >= 1."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (phi.dimension,), dtype=complex)
    if phi.pwc is not None:
        out = out + _pwc_analytic(phi.pwc, z, order)
    if phi.fourier is not None:
        out = out + _fourier_analytic(phi.fourier, z, order)
    return out


def partials_from_analytic(deriv, order: int):
    """Cartesian partials of Re A from A^{(order)}, ordered by number of y's.

    Uses d^a/dx^a d^b/dy^b Re A = Re(i^b A^{(a+b)}).
    """
    return tuple(np.real((1j) ** b * deriv) for b in range(order + 1))


# public operations ------------------------------------------------------

def _closed(phi):
    return not phi.has_jumps


def extend(phi: BoundaryMap, z, q: QuadratureConfig = DEFAULT_QUADRATURE,
           method: str = "exact"):
    """Harmonic extension P[phi](z), shape z.shape + (n,).

    ``method="quadrature"`` integrates the Poisson integral numerically: the
    smooth part with the periodic trapezoid rule and the step part arc by arc
    (split at the breakpoints when ``q.jump_split``).
    """
    z = as_complex(z, closed=_closed(phi))
    if method == "exact":
        out = np.zeros(z.shape + (phi.dimension,))
        if phi.pwc is not None:
            out += _pwc_value(phi.pwc, z)
        if phi.fourier is not None:
            out += np.real(_fourier_analytic(phi.fourier, z, 0))
        return out
    if method == "quadrature":
        return _extend_quadrature(phi, z, q)
    raise ValueError(f"unknown method {method!r}")


def _extend_quadrature(phi, z, q):
    flat = z.ravel()
    out = np.zeros((flat.size, phi.dimension))
    for i, zi in enumerate(flat):
        r, theta = abs(zi), float(np.angle(zi))
        n0 = nodes_for_radius(q, r)
        if phi.fourier is not None and not (phi.pwc is not None and not q.jump_split):
            def smooth(t, r=r, theta=theta):
                return kernel(r, t - theta)[:, None] * phi.fourier(t)
            out[i] += periodic_trapezoid(smooth, q, n0)[0]
        if phi.pwc is None:
            continue
        if not q.jump_split:
            # integrate the discontinuous integrand as if it were smooth
            def whole(t, r=r, theta=theta):
                return kernel(r, t - theta)[:, None] * phi(t)
            out[i] += periodic_trapezoid(whole, q, n0)[0]
            continue
        pwc = phi.pwc
        if pwc.values.shape[0] == 1:
            out[i] += pwc.values[0]
            continue
        a = pwc.breakpoints
        b = np.append(a[1:], a[0] + TWO_PI)
        peak = theta + TWO_PI * np.round((np.add(a, b) / 2 - theta) / TWO_PI)
        for l in range(a.size):
            mass, _ = adaptive_gauss_legendre(
                lambda t, r=r, theta=theta: kernel(r, t - theta),
                a[l], b[l], q.abs_tol, q.node_budget, breakpoints=(peak[l],))
            out[i] += mass * pwc.values[l]
    return out.reshape(z.shape + (phi.dimension,))


def angular_derivative(phi: BoundaryMap, z, q: QuadratureConfig = DEFAULT_QUADRATURE,
                       method: str = "exact"):
    """d/dtheta of P[phi] at z = r e^{i theta}: the Poisson-Stieltjes integral of d phi.

    The step part contributes the atomic sum ``sum_k P(r, theta - t_k) jump_k``
    in both methods.  The smooth part is either closed form or the
    trapezoid-rule integral of ``P(r, theta - t) g'(t)``.
    """
    z = as_complex(z, closed=_closed(phi))
    r, theta = np.abs(z), np.angle(z)
    out = np.zeros(z.shape + (phi.dimension,))
    if phi.pwc is not None and phi.pwc.jump_locations.size:
        weights = kernel(r[..., None], theta[..., None] - phi.pwc.jump_locations)
        out += weights @ phi.pwc.jump_vectors
    if phi.fourier is None:
        return out
    if method == "exact":
        out += np.real(1j * z[..., None] * _fourier_analytic(phi.fourier, z, 1))
    elif method == "quadrature":
        flat_r, flat_t = r.ravel(), theta.ravel()

        def integrand(t):
            w = kernel(flat_r[None, :], flat_t[None, :] - t[:, None])
            return w[..., None] * phi.fourier.derivative(t)[:, None, :]

        val, _ = periodic_trapezoid(integrand, q, nodes_for_radius(q, float(np.max(flat_r))))
        out += val.reshape(out.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out


def radial_derivative(phi: BoundaryMap, z, q: QuadratureConfig = DEFAULT_QUADRATURE,
                      method: str = "kernel"):
    """d/dr of P[phi] at z = r e^{i theta}.

    ``method="kernel"`` differentiates the kernel in closed form.
    ``method="conjugate"`` uses that r d/dr f is the harmonic conjugate of
    d/dtheta f, i.e. ``(1/2pi) int Im F(r e^{it}) d_t phi(e^{i(theta - t)}) dt``;
    it needs r > 0.
    """
    z = as_complex(z, closed=_closed(phi))
    r, theta = np.abs(z), np.angle(z)
    if method == "kernel":
        direction = np.exp(1j * theta)[..., None]
        return np.real(direction * analytic_derivative(phi, z, 1))
    if method != "conjugate":
        raise ValueError(f"unknown method {method!r}")
    if np.any(r == 0):
        raise DomainError("conjugate representation divides by r; use method='kernel' at r = 0")
    out = np.zeros(z.shape + (phi.dimension,))
    if phi.pwc is not None and phi.pwc.jump_locations.size:
        weights = conjugate_kernel(r[..., None], theta[..., None] - phi.pwc.jump_locations)
        out += weights @ phi.pwc.jump_vectors / TWO_PI
    if phi.fourier is not None:
        flat_r, flat_t = r.ravel(), theta.ravel()

        def integrand(t):
            w = conjugate_kernel(flat_r[None, :], t[:, None])
            g = phi.fourier.derivative(flat_t[None, :] - t[:, None])
            return w[..., None] * g

        val, _ = periodic_trapezoid(integrand, q, nodes_for_radius(q, float(np.max(flat_r))))
        out += val.reshape(out.shape) / TWO_PI
    return out / r[..., None]


def conjugate_kernel_mass(t: float, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """int_{-1}^{1} |Im F(r e^{it}) / r| dr for F(z) = 2z/(1-z), defined for 0 < |t| < pi.

    The integrand ``2 |sin t| / (1 - 2 r cos t + r^2)`` peaks at r = cos t with
    width |sin t|, so the adaptive rule is split there.
    """
    t = float(t)
    s = abs(np.sin(t))
    if not (0.0 < abs(t) < np.pi) or s == 0.0:
        raise DomainError("kernel identity holds only for 0 < |t| < pi")
    c = np.cos(t)

    def integrand(r):
        return 2.0 * s / ((r - c) ** 2 + s * s)

    value, err = adaptive_gauss_legendre(
        integrand, -1.0, 1.0, min(q.abs_tol, 1e-10), q.node_budget,
        breakpoints=(c - s, c, c + s))
    return float(value)


def cartesian_partials(phi: BoundaryMap, z, q: QuadratureConfig = DEFAULT_QUADRATURE):
    """(f_x, f_y) of P[phi] at z."""
    z = as_complex(z, closed=_closed(phi))
    return partials_from_analytic(analytic_derivative(phi, z, 1), 1)


def second_partials(phi: BoundaryMap, z, q: QuadratureConfig = DEFAULT_QUADRATURE):
    """(f_xx, f_xy, f_yy) of P[phi] at z."""
    z = as_complex(z, closed=_closed(phi))
    return partials_from_analytic(analytic_derivative(phi, z, 2), 2)


def third_partials(phi: BoundaryMap, z, q: QuadratureConfig = DEFAULT_QUADRATURE):
    """(f_xxx, f_xxy, f_xyy, f_yyy) of P[phi] at z."""
    z = as_complex(z, closed=_closed(phi))
    return partials_from_analytic(analytic_derivative(phi, z, 3), 3)
