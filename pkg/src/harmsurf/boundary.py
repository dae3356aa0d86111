"""Bounded-variation boundary data on the unit circle.

A :class:`BoundaryMap` is the sum of an optional piecewise-constant part and an
optional band-limited trigonometric part.  Both pieces are exact
representations, so jumps are read off the structure instead of being detected
from samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .quadrature import DEFAULT_QUADRATURE, TWO_PI, QuadratureConfig, periodic_trapezoid


def _finite_array(values, name):
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be finite")
    return arr


def _readonly(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PiecewiseConstant:
    """Value ``values[l]`` on the arc ``[breakpoints[l], breakpoints[l+1])``.

    The last arc wraps around to ``breakpoints[0] + 2*pi``.  Consecutive arcs
    with equal values are merged at construction, so every remaining
    breakpoint is a genuine jump.  A single remaining value means constant data.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = _finite_array(self.breakpoints, "breakpoints").ravel()
        v = _finite_array(self.values, "values")
        if v.ndim == 1:
            v = v[:, None]
        if t.size == 0 or v.shape[0] != t.size:
            raise InvalidInputError("need one value per breakpoint")
        if np.any(t < 0) or np.any(t >= TWO_PI):
            raise InvalidInputError("breakpoints must lie in [0, 2*pi)")
        if np.any(np.diff(t) <= 0):
            raise InvalidInputError("breakpoints must be strictly increasing")
        t, v = _merge_flat(t, v)
        object.__setattr__(self, "breakpoints", _readonly(t))
        object.__setattr__(self, "values", _readonly(v))

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    @property
    def jump_vectors(self) -> np.ndarray:
        """Right value minus left value at each breakpoint, shape (m, n)."""
        if self.values.shape[0] == 1:
            return np.zeros((0, self.dimension))
        return self.values - np.roll(self.values, 1, axis=0)

    @property
    def jump_locations(self) -> np.ndarray:
        if self.values.shape[0] == 1:
            return np.zeros(0)
        return self.breakpoints

    def __call__(self, t):
        t = np.mod(np.asarray(t, dtype=float), TWO_PI)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        # idx == -1 lands on the wrapped last arc
        return self.values[idx]


def _merge_flat(t, v):
    if t.size == 1:
        return t, v
    same = np.all(v == np.roll(v, 1, axis=0), axis=1)
    if np.all(same):
        return t[:1], v[:1]
    # one pass suffices: equal values are transitive along a run
    return t[~same], v[~same]


@dataclass(frozen=True, eq=False)
class FourierSmooth:
    """Per-component trigonometric polynomial ``a0 + sum a_k cos kt + b_k sin kt``.

    ``coefficients[j]`` is the flat list ``[a0, a1, b1, a2, b2, ...]`` for
    component j.  Lists are zero-padded to a common degree.
    """

    coefficients: tuple
    cos: np.ndarray = field(init=False, repr=False)
    sin: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        rows = [_finite_array(c, "Fourier coefficients").ravel() for c in self.coefficients]
        if not rows:
            raise InvalidInputError("Fourier data needs at least one component")
        degree = max(len(c) // 2 for c in rows)
        cos = np.zeros((len(rows), degree + 1))
        sin = np.zeros((len(rows), degree + 1))
        for j, c in enumerate(rows):
            if c.size == 0:
                continue
            cos[j, 0] = c[0]
            rest = c[1:]
            cos[j, 1:1 + (rest.size + 1) // 2] = rest[0::2]
            sin[j, 1:1 + rest.size // 2] = rest[1::2]
        object.__setattr__(self, "coefficients", tuple(tuple(map(float, c)) for c in rows))
        object.__setattr__(self, "cos", _readonly(cos))
        object.__setattr__(self, "sin", _readonly(sin))

    @classmethod
    def from_arrays(cls, cos, sin):
        cos = np.atleast_2d(np.asarray(cos, dtype=float))
        sin = np.atleast_2d(np.asarray(sin, dtype=float))
        rows = []
        for a, b in zip(cos, sin):
            flat = [a[0]]
            for k in range(1, a.size):
                flat += [a[k], b[k]]
            rows.append(flat)
        return cls(tuple(rows))

    @property
    def dimension(self) -> int:
        return self.cos.shape[0]

    @property
    def degree(self) -> int:
        return self.cos.shape[1] - 1

    @property
    def complex_coefficients(self) -> np.ndarray:
        """c_k = a_k - i b_k, so the component equals Re(sum c_k e^{ikt}); shape (K+1, n)."""
        return (self.cos - 1j * self.sin).T

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = np.arange(self.degree + 1)
        phase = np.exp(1j * t[..., None] * k)
        return np.real(phase @ self.complex_coefficients)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        k = np.arange(self.degree + 1)
        phase = 1j * k * np.exp(1j * t[..., None] * k)
        return np.real(phase @ self.complex_coefficients)


@dataclass(frozen=True, eq=False)
class JumpPoint:
    """Discontinuity of the boundary data at angle ``location``.

    ``left_value`` is the limit from below (A0), ``right_value`` the limit from
    above (B0).
    """

    location: float
    left_value: np.ndarray
    right_value: np.ndarray

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.right_value - self.left_value))


@dataclass(frozen=True, eq=False)
class BoundaryMap:
    """BV map from the unit circle to R^n: piecewise-constant plus smooth part.

    Either part may be ``None``; with both present the map is their sum
    (a composite representation).
    """

    dimension: int
    pwc: PiecewiseConstant | None = None
    fourier: FourierSmooth | None = None

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise InvalidInputError("dimension must be a positive integer")
        if self.pwc is None and self.fourier is None:
            raise InvalidInputError("boundary data needs at least one piece")
        for part in (self.pwc, self.fourier):
            if part is not None and part.dimension != self.dimension:
                raise InvalidInputError(
                    f"piece has dimension {part.dimension}, expected {self.dimension}")

    @classmethod
    def piecewise_constant(cls, breakpoints, values) -> "BoundaryMap":
        pwc = PiecewiseConstant(breakpoints, values)
        return cls(pwc.dimension, pwc=pwc)

    @classmethod
    def trigonometric(cls, coefficients) -> "BoundaryMap":
        fourier = FourierSmooth(tuple(coefficients))
        return cls(fourier.dimension, fourier=fourier)

    @classmethod
    def constant(cls, value) -> "BoundaryMap":
        value = np.atleast_1d(np.asarray(value, dtype=float))
        return cls.piecewise_constant([0.0], [value])

    def __add__(self, other: "BoundaryMap") -> "BoundaryMap":
        if not isinstance(other, BoundaryMap):
            return NotImplemented
        if other.dimension != self.dimension:
            raise InvalidInputError("cannot add boundary maps of different dimension")
        return BoundaryMap(self.dimension,
                           pwc=_add_pwc(self.pwc, other.pwc),
                           fourier=_add_fourier(self.fourier, other.fourier))

    @property
    def has_jumps(self) -> bool:
        return self.pwc is not None and self.pwc.jump_locations.size > 0

    def __call__(self, t):
        """Evaluate phi(e^{it}); at a breakpoint the right value is returned."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dimension,))
        if self.pwc is not None:
            out = out + self.pwc(t)
        if self.fourier is not None:
            out = out + self.fourier(t)
        return out

    def smooth_part(self, t):
        if self.fourier is None:
            return np.zeros(np.shape(t) + (self.dimension,))
        return self.fourier(t)

    def rotated(self, c: float) -> "BoundaryMap":
        """The map t -> phi(t + c)."""
        pwc = fourier = None
        if self.pwc is not None:
            t = np.mod(self.pwc.breakpoints - c, TWO_PI)
            # mod can round up to exactly 2*pi
            t[t >= TWO_PI] = 0.0
            order = np.argsort(t, kind="stable")
            pwc = PiecewiseConstant(t[order], self.pwc.values[order])
        if self.fourier is not None:
            k = np.arange(self.fourier.degree + 1)
            a, b = self.fourier.cos, self.fourier.sin
            cc, sc = np.cos(k * c), np.sin(k * c)
            fourier = FourierSmooth.from_arrays(a * cc + b * sc, -a * sc + b * cc)
        return BoundaryMap(self.dimension, pwc=pwc, fourier=fourier)


def _add_pwc(p, q):
    if p is None or q is None:
        return p if q is None else q
    t = np.union1d(p.breakpoints, q.breakpoints)
    return PiecewiseConstant(t, p(t) + q(t))


def _add_fourier(p, q):
    if p is None or q is None:
        return p if q is None else q
    k = max(p.degree, q.degree) + 1

    def pad(a):
        return np.pad(a, ((0, 0), (0, k - a.shape[1])))

    return FourierSmooth.from_arrays(pad(p.cos) + pad(q.cos), pad(p.sin) + pad(q.sin))


def jump_set(phi: BoundaryMap) -> list[JumpPoint]:
    """Discontinuities of phi sorted by location; empty for smooth data."""
    if not phi.has_jumps:
        return []
    t = phi.pwc.jump_locations
    right = phi.pwc.values
    left = np.roll(right, 1, axis=0)
    smooth = phi.smooth_part(t)
    return [JumpPoint(float(tk), left[k] + smooth[k], right[k] + smooth[k])
            for k, tk in enumerate(t)]


def total_variation(phi: BoundaryMap, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """TV(phi): jump magnitudes plus the arc length of the smooth part.

    This is the boundary length |Gamma| used throughout the package.  The
    piecewise-constant part has zero derivative between breakpoints, so the
    smooth contribution is a single periodic integral of |g'(t)|.
    """
    tv = 0.0
    if phi.pwc is not None:
        tv += float(np.sum(np.linalg.norm(phi.pwc.jump_vectors, axis=1)))
    if phi.fourier is not None and phi.fourier.degree > 0:
        deriv = phi.fourier.derivative
        value, _ = periodic_trapezoid(lambda t: np.linalg.norm(deriv(t), axis=-1), q)
        tv += float(value)
    return tv


def polygon_boundary(vertex_angles) -> BoundaryMap:
    """Step data taking the value e^{i theta_l} on [theta_l, theta_{l+1}).

    Its Poisson extension maps the disk onto the interior of the polygon with
    vertices on the unit circle at the given angles.
    """
    theta = _finite_array(vertex_angles, "vertex angles").ravel()
    if theta.size < 3:
        raise InvalidInputError("a polygon needs at least 3 vertices")
    values = np.column_stack([np.cos(theta), np.sin(theta)])
    return BoundaryMap.piecewise_constant(theta, values)


def circle_boundary() -> BoundaryMap:
    """phi(e^{it}) = (cos t, sin t); its extension is the identity of the disk."""
    return BoundaryMap.trigonometric([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


def random_fourier_boundary(rng: np.random.Generator, dimension: int = 3,
                            degree: int = 4) -> BoundaryMap:
    """Band-limited random data with coefficients decaying like 1/k."""
    k = np.arange(1, degree + 1)
    cos = np.zeros((dimension, degree + 1))
    sin = np.zeros((dimension, degree + 1))
    cos[:, 0] = rng.normal(size=dimension)
    cos[:, 1:] = rng.normal(size=(dimension, degree)) / k
    sin[:, 1:] = rng.normal(size=(dimension, degree)) / k
    fourier = FourierSmooth.from_arrays(cos, sin)
    return BoundaryMap(dimension, fourier=fourier)
