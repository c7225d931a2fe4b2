"""CST airfoil geometry: parameter vectors to surface coordinates and exports.

The vertical coordinate of each surface is the product of the class function
``C(x) = x^0.5 * (1 - x)`` (round leading edge, sharp trailing edge) and a
Bernstein-weighted shape function, plus a linear trailing-edge offset.  Both
surfaces use degree-4 shape functions; the first lower weight is tied to the
first upper weight so the leading-edge radius matches across the nose.

Sign convention: lower-surface weights are stored positive (matching the
design-space bounds) and the lower surface is evaluated with ``sign=-1``, so
positive weights place the surface below the chord line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

N1 = 0.5
N2 = 1.0


@dataclass(frozen=True)
class CstParams:
    """Nine-parameter CST description of an airfoil section.

    ``w_u`` holds the five upper-surface Bernstein weights.  ``w_l`` holds the
    four free lower-surface weights (indices 2..5); the effective first lower
    weight always equals ``w_u[0]`` and is never stored separately.
    """

    w_u: tuple[float, ...]
    w_l: tuple[float, ...]
    y_te: float = 0.0

    def __post_init__(self):
        if len(self.w_u) != 5 or len(self.w_l) != 4:
            raise ValueError("expected 5 upper and 4 lower weights")
        object.__setattr__(self, "w_u", tuple(float(w) for w in self.w_u))
        object.__setattr__(self, "w_l", tuple(float(w) for w in self.w_l))
        if not all(np.isfinite(self.as_vector())) or not np.isfinite(self.y_te):
            raise ValueError("non-finite CST weight")

    @property
    def lower_full(self) -> tuple[float, ...]:
        """All five lower weights, with the tied leading-edge weight prepended."""
        return (self.w_u[0],) + self.w_l

    def as_vector(self) -> np.ndarray:
        """CST1..CST9 ordering: five upper weights then the four free lower ones."""
        return np.array(self.w_u + self.w_l, dtype=float)

    @classmethod
    def from_vector(cls, v, y_te: float = 0.0) -> "CstParams":
        v = np.asarray(v, dtype=float)
        if v.shape != (9,):
            raise ValueError(f"expected 9 parameters, got shape {v.shape}")
        return cls(w_u=tuple(v[:5]), w_l=tuple(v[5:]), y_te=y_te)


@dataclass(frozen=True)
class FlowConditions:
    """Freestream operating point: Mach number, angle of attack (deg), Reynolds number."""

    ma: float = 0.6
    aoa_deg: float = 2.5
    re: float = 6.3e6

    # Operating ranges the surrogate contracts are valid for.
    MA_RANGE = (0.2, 0.7)
    AOA_RANGE = (-3.0, 5.0)
    RE_RANGE = (1.0e6, 6.5e6)

    def in_range(self) -> bool:
        return (
            self.MA_RANGE[0] <= self.ma <= self.MA_RANGE[1]
            and self.AOA_RANGE[0] <= self.aoa_deg <= self.AOA_RANGE[1]
            and self.RE_RANGE[0] <= self.re <= self.RE_RANGE[1]
        )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.ma, self.aoa_deg, self.re)


@dataclass(frozen=True)
class AirfoilGeometry:
    """Sampled airfoil surfaces plus the closed TE->upper->LE->lower->TE loop."""

    upper: np.ndarray  # (n, 2), x ascending LE->TE
    lower: np.ndarray  # (n, 2), x ascending LE->TE
    loop: np.ndarray = field(default=None)  # (2n-1, 2)

    def __post_init__(self):
        if self.loop is None:
            object.__setattr__(self, "loop", _close_loop(self.upper, self.lower))


def bernstein(i: int, n: int, x):
    """Bernstein basis polynomial B_{i,n}(x) = C(n,i) * x^i * (1-x)^(n-i).

    ``x`` may be a scalar or array in [0, 1].
    """
    if not 0 <= i <= n:
        raise ValueError(f"index {i} outside 0..{n}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("x outside [0, 1]")
    val = comb(n, i) * x**i * (1.0 - x) ** (n - i)
    return float(val) if val.ndim == 0 else val


def shape_function(weights, x):
    """Bernstein-weighted shape function S(x) for one surface."""
    weights = np.asarray(weights, dtype=float)
    n = weights.size - 1
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for i, w in enumerate(weights):
        out = out + w * comb(n, i) * x**i * (1.0 - x) ** (n - i)
    return out


def class_function(x):
    """C(x) = x^N1 * (1-x)^N2 with the round-nose / sharp-tail exponents."""
    x = np.asarray(x, dtype=float)
    return x**N1 * (1.0 - x) ** N2


def surface_y(weights, x, y_te: float = 0.0, sign: float = 1.0):
    """Surface ordinate ``sign * (C(x) * S(x) + x * y_te)`` at chord fraction x.

    ``sign=+1`` evaluates an upper surface, ``sign=-1`` a lower surface (the
    trailing-edge offset flips with it so a blunt TE stays symmetric about the
    chord line).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("x outside [0, 1]")
    y = sign * (class_function(x) * shape_function(weights, x) + x * y_te)
    return float(y) if y.ndim == 0 else y


def chord_stations(n_points: int, spacing: str = "cosine") -> np.ndarray:
    """Chordwise sample stations on [0, 1]; cosine spacing clusters at LE/TE."""
    if spacing == "cosine":
        theta = np.linspace(0.0, np.pi, n_points)
        return 0.5 * (1.0 - np.cos(theta))
    if spacing == "uniform":
        return np.linspace(0.0, 1.0, n_points)
    raise ValueError(f"unknown spacing {spacing!r}")


def generate_airfoil(cst: CstParams, n_points: int = 101, spacing: str = "cosine") -> AirfoilGeometry:
    """Sample both surfaces of a CST airfoil at ``n_points`` stations each.

    The loop has ``2 * n_points - 1`` vertices: upper surface traversed from
    the trailing edge to the leading edge, then the lower surface back to the
    trailing edge, with the shared leading-edge point emitted once.
    """
    if n_points < 11:
        raise ValueError("n_points must be at least 11")
    vec = cst.as_vector()
    if not np.all(np.isfinite(vec)):
        raise ValueError("non-finite CST weights")
    x = chord_stations(n_points, spacing)
    yu = surface_y(cst.w_u, x, cst.y_te, sign=+1.0)
    yl = surface_y(cst.lower_full, x, cst.y_te, sign=-1.0)
    upper = np.column_stack([x, yu])
    lower = np.column_stack([x, yl])
    return AirfoilGeometry(upper=upper, lower=lower)


def _close_loop(upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    # TE -> upper -> LE, then lower from the point after LE back to TE.
    return np.vstack([upper[::-1], lower[1:]])


def export_coordinates(geom: AirfoilGeometry, name: str = "airfoil") -> str:
    """Selig-style .dat text: a name line, then one "x y" pair per loop vertex."""
    lines = [name]
    for x, y in geom.loop:
        lines.append(f"{x:.12f} {y:.12f}")
    return "\n".join(lines) + "\n"


def parse_coordinates(text: str) -> tuple[str, np.ndarray]:
    """Inverse of :func:`export_coordinates`. Returns (name, loop points)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty coordinate document")
    name = lines[0].strip()
    pts = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad coordinate line: {ln!r}")
        pts.append((float(parts[0]), float(parts[1])))
    return name, np.array(pts, dtype=float)


def export_obj(geom: AirfoilGeometry, span: float = 0.1, name: str = "airfoil") -> str:
    """Wavefront OBJ of the section extruded across the span.

    Emits two rings of loop vertices at z=0 and z=span (2 * |loop| vertices),
    quad side-wall faces between them, and the two section polygons as end
    caps.  Intended as a geometry handoff for external meshing tools.
    """
    if span <= 0:
        raise ValueError("span must be positive")
    loop = geom.loop
    n = len(loop)
    lines = [f"o {name}"]
    for z in (0.0, span):
        for x, y in loop:
            lines.append(f"v {x:.9f} {y:.9f} {z:.9f}")
    # Side walls between consecutive loop vertices (1-based OBJ indices).
    for j in range(n - 1):
        a, b = j + 1, j + 2
        lines.append(f"f {a} {b} {b + n} {a + n}")
    if not np.allclose(loop[0], loop[-1]):
        # Blunt trailing edge: close the gap between the loop ends.
        lines.append(f"f {n} 1 {1 + n} {2 * n}")
    # End caps as full-loop polygons.
    lines.append("f " + " ".join(str(j + 1) for j in range(n)))
    lines.append("f " + " ".join(str(j + 1 + n) for j in reversed(range(n))))
    return "\n".join(lines) + "\n"
