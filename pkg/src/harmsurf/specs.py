"""Surface specifications: builtin names, JSON documents and report serialization.

JSON surface documents
----------------------
Boundary data::

    {"dimension": 2,
     "pieces": [{"type": "pwc", "breakpoints": [...], "values": [[...], ...]},
                {"type": "fourier", "coefficients": [[a0, a1, b1, ...], ...]}]}

Other surfaces carry a ``type`` key::

    {"type": "weierstrass", "coefficients": [[c0, c1, ...], ...]}
    {"type": "weierstrass", "f": [...], "g": [...]}
    {"type": "tilted", "m": 10}
    {"type": "enneper"} / {"type": "saddle"}
    {"type": "lift", "eps": 0.1, "r": 0.9, "inner": {...}}

Complex numbers are written as ``[re, im]`` pairs or plain reals.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .boundary import (
    BoundaryMap,
    FourierSmooth,
    PiecewiseConstant,
    circle_boundary,
    polygon_boundary,
    random_fourier_boundary,
)
from .errors import InvalidInputError
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .surfaces import (
    HarmonicSurface,
    WeierstrassData,
    enneper,
    from_boundary,
    harmonic_saddle,
    minimal_from_weierstrass,
    perturb_lift,
    random_weierstrass,
    tilted_disk,
)

SQUARE = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)
TRIANGLE = (0.0, 2 * math.pi / 3, 4 * math.pi / 3)

#: builtins that need no seed; ``tilted`` takes its slope as ``tilted:m``
BUILTINS = ("identity", "square", "triangle", "tilted:10", "enneper", "saddle")
RANDOM_BUILTINS = ("random-fourier", "random-weierstrass")


def builtin_surface(name: str, q: QuadratureConfig = DEFAULT_QUADRATURE,
                    seed: int | None = None) -> HarmonicSurface:
    """Resolve a builtin surface name.

    identity, square, triangle, tilted:m, enneper, saddle, and the seeded
    random-fourier and random-weierstrass generators.
    """
    key, _, arg = name.partition(":")
    if key == "identity":
        return from_boundary(circle_boundary(), q, name="identity")
    if key == "square":
        return from_boundary(polygon_boundary(SQUARE), q, name="square")
    if key == "triangle":
        return from_boundary(polygon_boundary(TRIANGLE), q, name="triangle")
    if key == "tilted":
        try:
            m = float(arg) if arg else 1.0
        except ValueError:
            raise InvalidInputError(f"bad slope in builtin {name!r}") from None
        return tilted_disk(m, q)
    if key == "enneper":
        return enneper(q)
    if key == "saddle":
        return harmonic_saddle(q)
    if key in RANDOM_BUILTINS:
        if seed is None:
            raise InvalidInputError(f"builtin {key!r} needs --seed")
        rng = np.random.default_rng(seed)
        if key == "random-fourier":
            return from_boundary(random_fourier_boundary(rng), q, name=f"random-fourier:{seed}")
        return random_weierstrass(rng, q=q)
    raise InvalidInputError(f"unknown builtin surface {name!r}")


def _complex_list(values, what):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)) and len(v) == 2:
            out.append(complex(float(v[0]), float(v[1])))
        elif isinstance(v, (int, float)):
            out.append(complex(v))
        else:
            raise InvalidInputError(f"{what}: expected number or [re, im], got {v!r}")
    return out


def boundary_from_dict(doc: dict) -> BoundaryMap:
    try:
        n = int(doc["dimension"])
        pieces = doc["pieces"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"boundary document needs 'dimension' and 'pieces' ({exc})") from None
    total = None
    for piece in pieces:
        kind = piece.get("type")
        try:
            if kind == "pwc":
                part = BoundaryMap(n, pwc=PiecewiseConstant(piece["breakpoints"], piece["values"]))
            elif kind == "fourier":
                part = BoundaryMap(n, fourier=FourierSmooth(piece["coefficients"]))
            else:
                raise InvalidInputError(f"unknown boundary piece type {kind!r}")
        except KeyError as exc:
            raise InvalidInputError(f"{kind} piece misses key {exc}") from None
        total = part if total is None else total + part
    if total is None:
        raise InvalidInputError("boundary document has no pieces")
    return total


def surface_from_dict(doc: dict, q: QuadratureConfig = DEFAULT_QUADRATURE) -> HarmonicSurface:
    if not isinstance(doc, dict):
        raise InvalidInputError("surface document must be a JSON object")
    kind = doc.get("type", "boundary")
    try:
        if kind == "boundary":
            return from_boundary(boundary_from_dict(doc), q, name=doc.get("name", "boundary"))
        if kind == "weierstrass":
            if "coefficients" in doc:
                w = WeierstrassData(tuple(tuple(_complex_list(c, "coefficients"))
                                          for c in doc["coefficients"]))
            else:
                w = WeierstrassData.from_gauss_map(np.array(_complex_list(doc["f"], "f")),
                                                   np.array(_complex_list(doc["g"], "g")))
            return minimal_from_weierstrass(w, q, name=doc.get("name", "weierstrass"))
        if kind == "tilted":
            return tilted_disk(float(doc["m"]), q)
        if kind == "enneper":
            return enneper(q)
        if kind == "saddle":
            return harmonic_saddle(q)
        if kind == "lift":
            return perturb_lift(surface_from_dict(doc["inner"], q), float(doc["eps"]),
                                float(doc["r"]))
    except KeyError as exc:
        raise InvalidInputError(f"surface document of type {kind!r} misses key {exc}") from None
    raise InvalidInputError(f"unknown surface type {kind!r}")


def load_surface(source: str, q: QuadratureConfig = DEFAULT_QUADRATURE,
                 seed: int | None = None) -> HarmonicSurface:
    """``builtin:NAME`` or a path to a JSON surface document."""
    if source.startswith("builtin:"):
        return builtin_surface(source[len("builtin:"):], q, seed)
    try:
        doc = json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed JSON in {source}: {exc}") from None
    return surface_from_dict(doc, q)


def to_jsonable(obj):
    """Plain Python structure with numpy scalars/arrays and complex values converted."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, NaN as null."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"
