"""First fundamental form, Jacobian and Gaussian curvature of parametrized surfaces.

Curvature is computed two ways:

* the determinant formula, from first and second partials only,
  ``K = (det(M1 M2^T) - det(M3 M3^T)) / (EG - F^2)^2`` with the 3 x n row
  matrices M1 = [tau_xx, tau_x, tau_y], M2 = [tau_yy, tau_x, tau_y],
  M3 = [tau_xy, tau_x, tau_y];
* the Brioschi formula, from E, F, G and their partials up to second order.

Neither uses a normal vector, so both work in any R^n with n >= 3.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, NumericalConsistencyError
from .poisson import DiskPoint
from .surfaces import BoundarySurface, HarmonicSurface

DEGENERACY = 1e-8
FD_STEP = 1e-4


@dataclass(frozen=True)
class FirstFundamentalForm:
    E: float
    F: float
    G: float

    @property
    def discriminant(self) -> float:
        return self.E * self.G - self.F * self.F

    @property
    def J(self) -> float:
        return float(np.sqrt(max(self.discriminant, 0.0)))


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def _z(z):
    if isinstance(z, DiskPoint):
        return np.asarray(z.z)
    return np.asarray(z, dtype=complex)


def form_arrays(s: HarmonicSurface, z):
    """(E, F, G) as arrays over z."""
    fx, fy = s.first(_z(z))
    return _dot(fx, fx), _dot(fx, fy), _dot(fy, fy)


def fundamental_form(s: HarmonicSurface, z) -> FirstFundamentalForm:
    E, F, G = form_arrays(s, z)
    return FirstFundamentalForm(float(E), float(F), float(G))


def _checked_jacobian(disc):
    disc = np.asarray(disc, dtype=float)
    if np.any(disc < -1e-14):
        raise NumericalConsistencyError(
            f"EG - F^2 = {float(np.min(disc)):.3g} is negative beyond round-off")
    return np.sqrt(np.clip(disc, 0.0, None))


def jacobian(s: HarmonicSurface, z):
    """sqrt(EG - F^2); tiny negative round-off is clamped to zero."""
    E, F, G = form_arrays(s, z)
    out = _checked_jacobian(E * G - F * F)
    return float(out) if out.ndim == 0 else out


def _rows(a, fx, fy):
    return np.stack([a, fx, fy], axis=-2)


def _gram_det(a, b):
    return np.linalg.det(a @ np.swapaxes(b, -1, -2))


def determinant_terms(s: HarmonicSurface, z):
    """det(M1 M2^T), det(M3 M3^T) and det(M1 M1^T) over z, plus EG - F^2."""
    z = _z(z)
    fx, fy = s.first(z)
    fxx, fxy, fyy = s.second(z)
    m1, m2, m3 = _rows(fxx, fx, fy), _rows(fyy, fx, fy), _rows(fxy, fx, fy)
    disc = _dot(fx, fx) * _dot(fy, fy) - _dot(fx, fy) ** 2
    return _gram_det(m1, m2), _gram_det(m3, m3), _gram_det(m1, m1), disc


def curvature_det_array(s: HarmonicSurface, z, delta=DEGENERACY):
    """Determinant-formula K over z; NaN where EG - F^2 <= delta."""
    if s.dimension < 3:
        raise DomainError("curvature needs n >= 3 (the 3 x n row matrices are rank-deficient)")
    d12, d33, _, disc = determinant_terms(s, z)
    ok = disc > delta
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(ok, (d12 - d33) / disc ** 2, np.nan)
    return K, disc


@dataclass(frozen=True)
class FormField:
    """E, F, G and the partials entering the Brioschi formula at one point."""

    E: float
    F: float
    G: float
    E_x: float
    E_y: float
    F_x: float
    F_y: float
    G_x: float
    G_y: float
    E_yy: float
    F_xy: float
    G_xx: float


def form_field_exact(s: HarmonicSurface, z) -> FormField:
    """FormField from exact partials of tau up to third order."""
    z = _z(z)
    fx, fy = s.first(z)
    fxx, fxy, fyy = s.second(z)
    fxxx, fxxy, fxyy, fyyy = s.third(z)
    d = _dot
    return FormField(
        E=d(fx, fx), F=d(fx, fy), G=d(fy, fy),
        E_x=2 * d(fxx, fx), E_y=2 * d(fxy, fx),
        F_x=d(fxx, fy) + d(fx, fxy), F_y=d(fxy, fy) + d(fx, fyy),
        G_x=2 * d(fxy, fy), G_y=2 * d(fyy, fy),
        E_yy=2 * d(fxyy, fx) + 2 * d(fxy, fxy),
        F_xy=d(fxxy, fy) + d(fxx, fyy) + d(fxy, fxy) + d(fx, fxyy),
        G_xx=2 * d(fxxy, fy) + 2 * d(fxy, fxy),
    )


def form_field_fd(s: HarmonicSurface, z, h: float = FD_STEP) -> FormField:
    """FormField from central finite differences of (E, F, G) with step h."""
    z = _z(z)
    offsets = np.array([0, h, -h, 1j * h, -1j * h, h + 1j * h, h - 1j * h,
                        -h + 1j * h, -h - 1j * h])
    E, F, G = form_arrays(s, z[..., None] + offsets)

    def grads(a):
        ax = (a[..., 1] - a[..., 2]) / (2 * h)
        ay = (a[..., 3] - a[..., 4]) / (2 * h)
        axx = (a[..., 1] - 2 * a[..., 0] + a[..., 2]) / h ** 2
        ayy = (a[..., 3] - 2 * a[..., 0] + a[..., 4]) / h ** 2
        axy = (a[..., 5] - a[..., 6] - a[..., 7] + a[..., 8]) / (4 * h * h)
        return ax, ay, axx, axy, ayy

    Ex, Ey, _, _, Eyy = grads(E)
    Fx, Fy, _, Fxy, _ = grads(F)
    Gx, Gy, Gxx, _, _ = grads(G)
    return FormField(E[..., 0], F[..., 0], G[..., 0], Ex, Ey, Fx, Fy, Gx, Gy, Eyy, Fxy, Gxx)


def curvature_brioschi(ff: FormField, delta=DEGENERACY):
    """Brioschi formula for K from a FormField (scalar or array entries).

    The (1,3) entry of the first determinant is F_x - E_y / 2, which is
    <tau_xx, tau_y>.
    """
    E, F, G = (np.asarray(v, dtype=float) for v in (ff.E, ff.F, ff.G))
    disc = E * G - F * F
    if np.any(disc <= delta):
        raise DomainError("Brioschi formula undefined at a degenerate point")
    a11 = -0.5 * ff.E_yy + ff.F_xy - 0.5 * ff.G_xx
    first = np.stack([
        np.stack([a11, 0.5 * ff.E_x, ff.F_x - 0.5 * ff.E_y], -1),
        np.stack([ff.F_y - 0.5 * ff.G_x, E, F], -1),
        np.stack([0.5 * ff.G_y, F, G], -1),
    ], -2)
    zero = np.zeros_like(E)
    second = np.stack([
        np.stack([zero, 0.5 * ff.E_y, 0.5 * ff.G_x], -1),
        np.stack([0.5 * ff.E_y, E, F], -1),
        np.stack([0.5 * ff.G_x, F, G], -1),
    ], -2)
    K = (np.linalg.det(first) - np.linalg.det(second)) / disc ** 2
    return float(K) if K.ndim == 0 else K


def form_field(s: HarmonicSurface, z) -> FormField:
    """Exact form field where third partials exist (not for Poisson extensions)."""
    if s.has_third and not isinstance(s, BoundarySurface):
        return form_field_exact(s, z)
    return form_field_fd(s, z)


@dataclass(frozen=True)
class CurvatureSample:
    location: DiskPoint
    E: float
    F: float
    G: float
    J: float
    degenerate: bool
    K_det: float | None = None
    K_brioschi: float | None = None


def curvature_det(s: HarmonicSurface, z) -> CurvatureSample:
    """Determinant-formula curvature at one point (K_det only)."""
    point = z if isinstance(z, DiskPoint) else DiskPoint.from_complex(complex(z))
    E, F, G = (float(v) for v in form_arrays(s, point))
    K, disc = curvature_det_array(s, point)
    J = float(_checked_jacobian(disc))
    if not disc > DEGENERACY:
        return CurvatureSample(point, E, F, G, J, True)
    return CurvatureSample(point, E, F, G, J, False, K_det=float(K))


def curvature_sample(s: HarmonicSurface, z) -> CurvatureSample:
    """Both curvature formulas at one point."""
    sample = curvature_det(s, z)
    if sample.degenerate:
        return sample
    kb = curvature_brioschi(form_field(s, sample.location))
    return CurvatureSample(**{**sample.__dict__, "K_brioschi": float(kb)})


@dataclass(frozen=True)
class PolarGrid:
    """Rings r_i = r_max * i / n_radial (i = 1..n_radial) times n_angular angles."""

    n_radial: int
    n_angular: int
    r_max: float = 0.95

    def __post_init__(self):
        if self.n_radial < 1 or self.n_angular < 3:
            raise DomainError("polar grid needs n_radial >= 1 and n_angular >= 3")
        if not 0 < self.r_max <= 1:
            raise DomainError("polar grid needs 0 < r_max <= 1")

    @property
    def radii(self) -> np.ndarray:
        return self.r_max * np.arange(1, self.n_radial + 1) / self.n_radial

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_angular) / self.n_angular

    def points(self) -> np.ndarray:
        """Complex points of shape (n_radial, n_angular)."""
        return self.radii[:, None] * np.exp(1j * self.angles[None, :])


@dataclass
class ScanReport:
    """Result of :func:`nonpositivity_scan`; violations are data, not errors."""

    surface: str
    applicable: bool
    grid: PolarGrid
    tolerance: float
    max_K: float | None = None
    degenerate_count: int = 0
    violations: list = field(default_factory=list)
    max_cross_check: float | None = None
    rows: list = field(default_factory=list, repr=False)

    @property
    def satisfied(self) -> bool:
        return (not self.applicable) or not self.violations

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k != "rows"}
        out["satisfied"] = self.satisfied
        return out

    CSV_COLUMNS = ("r", "theta", "E", "F", "G", "J", "K_det", "K_brioschi", "degenerate")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([_fmt(row[c]) for c in self.CSV_COLUMNS])
        return buf.getvalue()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    return repr(float(v))


def nonpositivity_scan(s: HarmonicSurface, grid: PolarGrid = PolarGrid(32, 32),
                       tolerance: float = 1e-7, brioschi: bool = True) -> ScanReport:
    """Sample K on a polar grid and report its maximum over regular points."""
    report = ScanReport(s.name, s.dimension >= 3, grid, tolerance)
    if not report.applicable:
        return report
    z = grid.points()
    E, F, G = form_arrays(s, z)
    K, disc = curvature_det_array(s, z)
    J = _checked_jacobian(disc)
    ok = disc > DEGENERACY
    Kb = np.full(z.shape, np.nan)
    if brioschi and np.any(ok):
        Kb[ok] = curvature_brioschi(form_field(s, z[ok]))
    report.degenerate_count = int(np.sum(~ok))
    if np.any(ok):
        report.max_K = float(np.max(K[ok]))
        report.max_cross_check = (float(np.max(np.abs(K[ok] - Kb[ok]) / (1 + np.abs(K[ok]))))
                                  if brioschi else None)
    for idx in zip(*np.nonzero(ok & (K > tolerance))):
        report.violations.append({"r": float(abs(z[idx])), "theta": float(np.angle(z[idx]) % (2 * np.pi)),
                                  "K": float(K[idx])})
    for i, r in enumerate(grid.radii):
        for j, t in enumerate(grid.angles):
            report.rows.append({
                "r": r, "theta": t, "E": E[i, j], "F": F[i, j], "G": G[i, j], "J": J[i, j],
                "K_det": K[i, j] if ok[i, j] else None,
                "K_brioschi": Kb[i, j] if ok[i, j] and brioschi else None,
                "degenerate": not ok[i, j]})
    return report


def gram_determinants(s: HarmonicSurface, z):
    """det(M1 M1^T) and det(M3 M3^T); both are Gram determinants, hence >= 0.

    For harmonic tau (tau_yy = -tau_xx) the curvature numerator equals minus
    their sum, which is why K <= 0.
    """
    _, d33, d11, _ = determinant_terms(s, z)
    return d11, d33
