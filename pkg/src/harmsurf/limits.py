"""Boundary behaviour of Poisson extensions at jumps of the boundary data.

Along the path

    z_R = e^{i theta0} (R e^{i lam pi/2} - 1) / (R e^{i lam pi/2} + 1),   R -> infinity,

the extension tends to (1 - lam)/2 * A0 + (1 + lam)/2 * B0, where A0 and B0 are
the one-sided limits of the data at e^{i theta0}.  Sweeping lam over [-1, 1]
fills the segment [A0, B0].
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .boundary import JumpPoint
from .errors import DomainError, InvalidInputError
from .poisson import DiskPoint
from .quadrature import QuadratureConfig
from .surfaces import BoundarySurface

DEFAULT_SCHEDULE = (10.0, 1e2, 1e3, 1e4)
DEFAULT_LAMBDAS = (-1.0, -0.5, 0.0, 0.5, 1.0)


@dataclass(frozen=True)
class ApproachPath:
    """Path tending to e^{i anchor} at angle lam * pi / 2 to the radius."""

    anchor: float
    lam: float

    def __post_init__(self):
        if not -1.0 <= self.lam <= 1.0:
            raise InvalidInputError(f"lambda must lie in [-1, 1], got {self.lam}")

    def point(self, R: float) -> DiskPoint:
        return approach_point(self.anchor, self.lam, R)

    def points(self, schedule) -> list[DiskPoint]:
        return [self.point(R) for R in schedule]


def _path_complex(theta0, lam, R):
    if abs(lam) == 1.0:
        # R e^{+-i pi/2} sits on the imaginary axis, which the Moebius map sends
        # onto the unit circle; shifting by 1 keeps the point inside while
        # preserving the tangential direction of approach
        w = 1.0 + 1j * lam * R
    else:
        w = R * np.exp(0.5j * np.pi * lam)
    return np.exp(1j * theta0) * (w - 1.0) / (w + 1.0)


def approach_point(theta0: float, lam: float, R: float) -> DiskPoint:
    """Point z_R of the approach path.

    Raises
    ------
    DomainError
        If R <= 1 or the point fails to land in the open disk.
    """
    if not R > 1:
        raise DomainError(f"approach parameter must exceed 1, got R={R}")
    if not -1.0 <= lam <= 1.0:
        raise InvalidInputError(f"lambda must lie in [-1, 1], got {lam}")
    z = _path_complex(float(theta0), float(lam), float(R))
    if not abs(z) < 1.0:
        raise DomainError(f"approach point {z} is not inside the disk")
    return DiskPoint.from_complex(z)


@dataclass
class ProbeResult:
    """Values of the extension along one approach path.

    ``limit_estimate`` is the value at the largest R; ``error_estimate`` is its
    distance to the value at the preceding R.
    """

    anchor: float
    lam: float
    schedule: list
    values: np.ndarray
    predicted: np.ndarray
    A0: np.ndarray
    B0: np.ndarray

    @property
    def residuals(self) -> np.ndarray:
        return np.linalg.norm(self.values - self.predicted, axis=1)

    @property
    def residual(self) -> float:
        return float(self.residuals[-1])

    @property
    def limit_estimate(self) -> np.ndarray:
        return self.values[-1]

    @property
    def error_estimate(self) -> float:
        if len(self.schedule) < 2:
            return float("nan")
        return float(np.linalg.norm(self.values[-1] - self.values[-2]))

    @property
    def shrinking(self) -> bool:
        res = self.residuals
        return bool(np.all(np.diff(res) <= 1e-12))

    def to_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "lambda": self.lam,
            "R": list(self.schedule),
            "values": self.values.tolist(),
            "predicted": self.predicted.tolist(),
            "A0": self.A0.tolist(),
            "B0": self.B0.tolist(),
            "residuals": self.residuals.tolist(),
            "residual": self.residual,
            "error_estimate": self.error_estimate,
            "shrinking": self.shrinking,
        }

    def csv_rows(self):
        for R, val, res in zip(self.schedule, self.values, self.residuals):
            yield [self.lam, R, *val, *self.predicted, res]


def _csv_header(n):
    return (["lambda", "R"] + [f"f{i}" for i in range(n)]
            + [f"predicted{i}" for i in range(n)] + ["residual"])


def _fmt(x):
    return repr(float(x))


def cluster_probe(s: BoundarySurface, jump, lam: float, schedule=DEFAULT_SCHEDULE,
                  q: QuadratureConfig | None = None) -> ProbeResult:
    """Evaluate the extension along the approach path to a boundary point.

    Parameters
    ----------
    s : BoundarySurface
    jump : JumpPoint or float
        A jump from :func:`harmsurf.boundary.jump_set`, or a plain angle, in
        which case A0 and B0 are the one-sided limits there (equal away from
        jumps).
    lam : float
        Approach angle parameter in [-1, 1].
    schedule : increasing sequence of R > 1
    """
    if not isinstance(s, BoundarySurface):
        raise InvalidInputError("cluster probes need a surface defined by boundary data")
    schedule = [float(R) for R in schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidInputError("R schedule must be a nonempty increasing list")
    if isinstance(jump, JumpPoint):
        anchor, A0, B0 = jump.location, np.asarray(jump.left_value), np.asarray(jump.right_value)
    else:
        anchor = float(jump)
        eps = 1e-12
        A0 = s.boundary(np.array([anchor - eps]))[0]
        B0 = s.boundary(np.array([anchor]))[0]
    path = ApproachPath(anchor, float(lam))
    z = np.array([p.z for p in path.points(schedule)])
    # the quadrature config only matters for quadrature-based evaluation
    values = s.value(z) if q is None else BoundarySurface(s.boundary, q).value(z)
    predicted = 0.5 * (1 - lam) * A0 + 0.5 * (1 + lam) * B0
    return ProbeResult(anchor, float(lam), schedule, np.atleast_2d(values), predicted, A0, B0)


def _segment_distance(p, a, b):
    d = b - a
    L2 = float(d @ d)
    if L2 == 0.0:
        return float(np.linalg.norm(p - a))
    t = np.clip(float((p - a) @ d) / L2, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * d)))


@dataclass
class SegmentSweep:
    """Probes at several lambdas for one jump, with segment checks."""

    probes: list = field(default_factory=list)

    @property
    def limits(self) -> np.ndarray:
        return np.array([p.limit_estimate for p in self.probes])

    @property
    def collinearity(self) -> float:
        """Largest distance of a limit to the segment [A0, B0]."""
        p0 = self.probes[0]
        return max(_segment_distance(x, p0.A0, p0.B0) for x in self.limits)

    @property
    def affinity(self) -> float:
        """Largest deviation of lambda -> limit from the affine interpolant of the end probes."""
        lams = np.array([p.lam for p in self.probes])
        lo, hi = int(np.argmin(lams)), int(np.argmax(lams))
        if lams[hi] == lams[lo]:
            return 0.0
        lim = self.limits
        w = ((lams - lams[lo]) / (lams[hi] - lams[lo]))[:, None]
        interp = (1 - w) * lim[lo] + w * lim[hi]
        return float(np.max(np.linalg.norm(lim - interp, axis=1)))

    @property
    def max_residual(self) -> float:
        return max(p.residual for p in self.probes)

    def satisfied(self, tol: float = 1e-3) -> bool:
        return self.max_residual <= tol and self.collinearity <= tol and self.affinity <= tol

    def to_dict(self) -> dict:
        return {
            "probes": [p.to_dict() for p in self.probes],
            "collinearity": self.collinearity,
            "affinity": self.affinity,
            "max_residual": self.max_residual,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_csv_header(len(self.probes[0].predicted)))
        for p in self.probes:
            for row in p.csv_rows():
                w.writerow([_fmt(x) for x in row])
        return buf.getvalue()


def segment_sweep(s: BoundarySurface, jump, lambdas=DEFAULT_LAMBDAS,
                  schedule=DEFAULT_SCHEDULE, q: QuadratureConfig | None = None) -> SegmentSweep:
    if len(lambdas) == 0:
        raise InvalidInputError("need at least one lambda")
    return SegmentSweep([cluster_probe(s, jump, lam, schedule, q) for lam in lambdas])
