"""Geometric functionals of harmonic surfaces and the inequalities between them.

Boundary length |Gamma| is total variation of the boundary data for Poisson
extensions, and the length of the image of the unit circle for surfaces whose
evaluators extend continuously to the closed disk.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .boundary import total_variation
from .errors import DomainError, InvalidInputError, NumericalConsistencyError
from .diffgeo import PolarGrid, _checked_jacobian, form_arrays
from .quadrature import (
    QuadratureConfig,
    adaptive_gauss_legendre,
    nodes_for_radius,
    periodic_trapezoid,
)
from .surfaces import BoundarySurface, HarmonicSurface

#: radii used when a boundary quantity has to be reached as a limit r -> 1
LIMIT_SCHEDULE = (0.9, 0.99, 0.999)


def _q(s, q):
    return q if q is not None else s.quadrature


def _check_radius(s, r):
    if not (0 < r < 1 or (r == 1 and s.extends_to_closure)):
        raise DomainError(f"radius {r} not admissible for {s.name}")


def circle_image_length(s: HarmonicSurface, r: float, q: QuadratureConfig | None = None,
                        with_error: bool = False):
    """|Gamma_r| = int_0^{2pi} |d_t f(r e^{it})| dt."""
    q = _q(s, q)
    _check_radius(s, r)
    n0 = nodes_for_radius(q, r) if r < 1 else q.angular_nodes
    value, err = periodic_trapezoid(
        lambda t: np.linalg.norm(s.angular(r * np.exp(1j * t)), axis=-1), q, n0)
    return (float(value), err) if with_error else float(value)


@dataclass
class LengthSweep:
    radii: list
    lengths: list
    limit_estimate: float
    tv_reference: float | None = None
    errors: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("r", "length", "tv_reference"))
        ref = "" if self.tv_reference is None else repr(float(self.tv_reference))
        for r, length in zip(self.radii, self.lengths):
            w.writerow((repr(float(r)), repr(float(length)), ref))
        return buf.getvalue()


def length_sweep(s: HarmonicSurface, radii, q: QuadratureConfig | None = None) -> LengthSweep:
    """|Gamma_r| over increasing radii; the lengths must be nondecreasing.

    A decrease beyond tolerance means the quadrature failed, since the
    lengths are monotone in r for every harmonic map.
    """
    q = _q(s, q)
    radii = [float(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise InvalidInputError("radii must be a nonempty increasing list")
    lengths, errors = [], []
    for r in radii:
        value, err = circle_image_length(s, r, q, with_error=True)
        lengths.append(value)
        errors.append(err)
    for a, b, r in zip(lengths, lengths[1:], radii[1:]):
        if b < a - 10 * q.tolerance(b):
            raise NumericalConsistencyError(
                f"|Gamma_r| decreased from {a!r} to {b!r} at r={r}")
    tv = total_variation(s.boundary, q) if isinstance(s, BoundarySurface) else None
    return LengthSweep(radii, lengths, lengths[-1], tv, errors)


def boundary_length(s: HarmonicSurface, q: QuadratureConfig | None = None) -> float:
    """|Gamma|: TV of the boundary data, or the length of the image of |z| = 1."""
    q = _q(s, q)
    if isinstance(s, BoundarySurface):
        return total_variation(s.boundary, q)
    if s.extends_to_closure:
        return circle_image_length(s, 1.0, q)
    return length_sweep(s, LIMIT_SCHEDULE, q).limit_estimate


def h1_seminorm(s: HarmonicSurface, q: QuadratureConfig | None = None,
                radii=LIMIT_SCHEDULE) -> float:
    """sup_r int |d_t f(r e^{it})| dt, attained as r -> 1 by monotonicity.

    Evaluated at r = 1 when the surface extends to the closed disk, otherwise
    as the last value of a length sweep over ``radii``.
    """
    q = _q(s, q)
    if s.extends_to_closure:
        return circle_image_length(s, 1.0, q)
    return length_sweep(s, radii, q).limit_estimate


def _ring_jacobian_integrals(s, rho, q):
    """int_0^{2pi} J(rho e^{it}) dt for each rho (vectorized)."""
    rho = np.asarray(rho, dtype=float)

    def integrand(t):
        z = rho[None, :] * np.exp(1j * t[:, None])
        E, F, G = form_arrays(s, z)
        return _checked_jacobian(E * G - F * F)

    n0 = nodes_for_radius(q, float(np.max(rho))) if not s.extends_to_closure else q.angular_nodes
    value, _ = periodic_trapezoid(integrand, q, n0)
    return value


def area_estimate(s: HarmonicSurface, r: float = 1.0, q: QuadratureConfig | None = None):
    """(area over |z| < r, error estimate).

    For r = 1 on surfaces without a continuous boundary extension, the value at
    the last radius of ``LIMIT_SCHEDULE`` is reported with the last increment
    as its error bar.
    """
    q = _q(s, q)
    if not 0 < r <= 1:
        raise DomainError("area radius must lie in (0, 1]")
    if r == 1 and not s.extends_to_closure:
        values = [area_estimate(s, rr, q) for rr in LIMIT_SCHEDULE]
        last, err = values[-1]
        return last, err + abs(last - values[-2][0])

    def radial(rho):
        return rho * _ring_jacobian_integrals(s, rho, q)

    value, err = adaptive_gauss_legendre(radial, 0.0, r, q.abs_tol, q.node_budget,
                                         relative=True)
    return float(value), float(err)


def area(s: HarmonicSurface, r: float = 1.0, q: QuadratureConfig | None = None) -> float:
    """Surface area |Sigma| = int_{|z|<r} J dA."""
    return area_estimate(s, r, q)[0]


@dataclass
class InequalityReport:
    """lhs <= rhs claim checked numerically; satisfied iff deficit >= -error_estimate."""

    name: str
    lhs: float
    rhs: float
    error_estimate: float
    details: dict = field(default_factory=dict)

    @property
    def deficit(self) -> float:
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> bool:
        return self.deficit >= -self.error_estimate

    def to_dict(self) -> dict:
        out = asdict(self)
        out["deficit"] = self.deficit
        out["satisfied"] = self.satisfied
        return out


def isoperimetric_report(s: HarmonicSurface, q: QuadratureConfig | None = None,
                         r: float | None = None) -> InequalityReport:
    """4 pi |Sigma| <= |Gamma|^2, over the whole disk or the sub-disk |z| < r."""
    q = _q(s, q)
    if r is None or r == 1:
        length = boundary_length(s, q)
        a, a_err = area_estimate(s, 1.0, q)
    else:
        length = circle_image_length(s, r, q)
        a, a_err = area_estimate(s, r, q)
    err = 4 * np.pi * a_err + 2 * length * q.tolerance(length) + 1e-12 * length ** 2
    return InequalityReport("isoperimetric", 4 * np.pi * a, length ** 2, float(err),
                            {"area": a, "length": length, "radius": 1.0 if r is None else r})


def diameter_image_length(s: HarmonicSurface, s0: float, q: QuadratureConfig | None = None,
                          with_error: bool = False):
    """Length of the image of the diameter through e^{i s0}, int_{-1}^{1} |d_r tau(r e^{i s0})| dr."""
    q = _q(s, q)
    direction = np.exp(1j * s0)

    def speed(r):
        return np.linalg.norm(s.directional(r * direction, s0), axis=-1)

    total, err = 0.0, 0.0
    # the two radii meet at the centre; integrate each half separately
    for a, b in ((-1.0, 0.0), (0.0, 1.0)):
        v, e = adaptive_gauss_legendre(speed, a, b, q.abs_tol, q.node_budget, relative=True)
        total += v
        err += e
    return (float(total), float(err)) if with_error else float(total)


def riesz_zygmund_report(s: HarmonicSurface, s0: float, q: QuadratureConfig | None = None,
                         h1: float | None = None) -> InequalityReport:
    """int_{-1}^{1} |d_r tau(r e^{i s0})| dr <= (1/2) sup_r int |d_t tau(r e^{it})| dt."""
    q = _q(s, q)
    lhs, err = diameter_image_length(s, s0, q, with_error=True)
    if h1 is None:
        h1 = h1_seminorm(s, q)
    err = err + q.tolerance(lhs) + 0.5 * q.tolerance(h1)
    return InequalityReport("riesz-zygmund", lhs, 0.5 * h1, float(err),
                            {"direction": float(s0), "h1": h1,
                             "ratio": lhs / h1 if h1 > 0 else None})


def riesz_zygmund_sweep(s: HarmonicSurface, n_directions: int = 32,
                        q: QuadratureConfig | None = None) -> list[InequalityReport]:
    q = _q(s, q)
    h1 = h1_seminorm(s, q)
    return [riesz_zygmund_report(s, 2 * np.pi * k / n_directions, q, h1)
            for k in range(n_directions)]


def ellipe_incomplete(phi: float, m_param: float, q: QuadratureConfig | None = None) -> float:
    """E(phi | m) = int_0^phi sqrt(1 - m sin^2 theta) d theta.

    Parameter convention: m enters linearly (not as a modulus k^2 = m written
    as k).  For m > 1 the integrand turns imaginary past arcsin(1/sqrt m), which
    raises DomainError.
    """
    phi, m = float(phi), float(m_param)
    tol = 1e-12 if q is None else min(q.abs_tol, 1e-12)
    budget = 1 << 20 if q is None else q.node_budget * 8
    lo, hi = min(0.0, phi), max(0.0, phi)
    if m > 1:
        reach = np.arcsin(1 / np.sqrt(m))
        k = np.floor(lo / np.pi)
        # sin^2 exceeds 1/m on (reach, pi - reach) modulo pi
        for c in np.arange(k, np.ceil(hi / np.pi) + 1):
            if c * np.pi + reach < hi and c * np.pi + np.pi - reach > lo:
                raise DomainError("1 - m sin^2 becomes negative on the integration range")
    halfpi = np.pi / 2
    kinks = halfpi * np.arange(np.ceil(lo / halfpi), np.floor(hi / halfpi) + 1)
    if m < 0:
        # the integrand bends sharply over a width ~ 1/sqrt(-m) around multiples of pi
        w = 1 / np.sqrt(-m)
        kinks = np.concatenate([kinks, (kinks[:, None] + np.array([-w, w])).ravel()])

    def integrand(theta):
        return np.sqrt(np.clip(1.0 - m * np.sin(theta) ** 2, 0.0, None))

    value, _ = adaptive_gauss_legendre(integrand, 0.0, phi, tol, budget,
                                       breakpoints=tuple(kinks), relative=True)
    return float(value)


def tilted_perimeter(m: float, q: QuadratureConfig | None = None) -> float:
    """Perimeter of tilted_disk(m) as 2 (E(pi/4 | -2m^2) + E(3pi/4 | -2m^2))."""
    k = -2.0 * m * m
    return 2.0 * (ellipe_incomplete(np.pi / 4, k, q) + ellipe_incomplete(3 * np.pi / 4, k, q))


@dataclass
class SharpnessTable:
    m: list
    diameter: list
    perimeter: list
    ratio: list

    @property
    def monotone(self) -> bool:
        return all(b >= a - 1e-12 for a, b in zip(self.ratio, self.ratio[1:]))

    @property
    def bounded(self) -> bool:
        return all(x <= 0.5 + 1e-12 for x in self.ratio)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(monotone=self.monotone, bounded=self.bounded)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("m", "diameter", "perimeter", "ratio"))
        for row in zip(self.m, self.diameter, self.perimeter, self.ratio):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def sharpness_sweep(ms, q: QuadratureConfig | None = None) -> SharpnessTable:
    """Ratio of the longest diameter image to the perimeter for tilted_disk(m)."""
    ms = [float(m) for m in ms]
    if any(m < 0 for m in ms):
        raise InvalidInputError("m must be nonnegative")
    diam = [2.0 * np.sqrt(1.0 + 2.0 * m * m) for m in ms]
    per = [tilted_perimeter(m, q) for m in ms]
    return SharpnessTable(ms, diam, per, [d / p for d, p in zip(diam, per)])


@dataclass
class GeodesicEstimate:
    """Largest graph distance on a polar mesh, compared with |Gamma| / 2.

    Biased both ways; see ``caveats``.
    """

    estimate: float
    bound: float
    tolerance: float
    grid: PolarGrid
    caveats: list = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return self.estimate <= self.bound + self.tolerance

    def to_dict(self) -> dict:
        out = asdict(self)
        out["satisfied"] = self.satisfied
        return out


def mesh_vertices(s: HarmonicSurface, grid: PolarGrid) -> np.ndarray:
    """Centre followed by rings in row-major order, shape (1 + nr * nt, n)."""
    z = np.concatenate([[0j], grid.points().ravel()])
    return s.value(z)


def mesh_edges(grid: PolarGrid) -> np.ndarray:
    """Index pairs: centre spokes, ring arcs, radial edges and both quad diagonals."""
    nr, nt = grid.n_radial, grid.n_angular
    idx = 1 + np.arange(nr * nt).reshape(nr, nt)
    nxt = np.roll(idx, -1, axis=1)
    pairs = [np.column_stack([np.zeros(nt, int), idx[0]]),
             np.column_stack([idx.ravel(), nxt.ravel()])]
    if nr > 1:
        inner, outer = idx[:-1], idx[1:]
        inner_n, outer_n = nxt[:-1], nxt[1:]
        pairs += [np.column_stack([inner.ravel(), outer.ravel()]),
                  np.column_stack([inner.ravel(), outer_n.ravel()]),
                  np.column_stack([inner_n.ravel(), outer.ravel()])]
    return np.concatenate(pairs)


def default_grid_radius(s: HarmonicSurface) -> float:
    return 1.0 if s.extends_to_closure else 0.999


def geodesic_diameter_estimate(s: HarmonicSurface, grid: PolarGrid | None = None,
                               q: QuadratureConfig | None = None,
                               tolerance: float = 1e-3) -> GeodesicEstimate:
    """Approximate intrinsic diameter by shortest paths on the image of a polar mesh.

    Edge weights are chord lengths between images of adjacent mesh vertices.
    Shortest paths start from every outer-ring vertex; the estimate is the
    largest distance reached.
    """
    q = _q(s, q)
    if grid is None:
        grid = PolarGrid(64, 128, default_grid_radius(s))
    verts = mesh_vertices(s, grid)
    edges = mesh_edges(grid)
    weights = np.linalg.norm(verts[edges[:, 0]] - verts[edges[:, 1]], axis=1)
    n = verts.shape[0]
    graph = coo_matrix((weights, (edges[:, 0], edges[:, 1])), shape=(n, n)).tocsr()
    sources = 1 + (grid.n_radial - 1) * grid.n_angular + np.arange(grid.n_angular)
    dist = dijkstra(graph, directed=False, indices=sources)
    if not np.all(np.isfinite(dist)):
        raise NumericalConsistencyError("mesh graph is disconnected")
    caveats = [
        "graph paths are confined to mesh edges and overestimate intrinsic distance",
        "chord edge weights underestimate arc length",
        "the supremum over point pairs is sampled on mesh vertices only",
    ]
    E, F, G = form_arrays(s, np.concatenate([[0j], grid.points().ravel()]))
    if np.min(E * G - F * F) <= 1e-8:
        caveats.append("near-zero Jacobian on the mesh: regularity hypothesis may fail")
    if grid.r_max < 1:
        caveats.append(f"outer ring at r = {grid.r_max}, not the boundary circle")
    return GeodesicEstimate(float(np.max(dist)), 0.5 * boundary_length(s, q), tolerance,
                            grid, caveats)
