"""One-dimensional meshes: construction, validation and serialization.

A mesh is a strictly increasing set of points t_0 < t_1 < ... < t_{m+1}
covering an interval [a, b], together with its derived step sizes
h_k = t_{k+1} - t_k.  Meshes are immutable value objects; every builder
returns a fresh, validated instance.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .functions import AnalyticFunction

__all__ = [
    "Mesh",
    "MeshError",
    "build_uniform",
    "build_geometric",
    "build_equiarclength",
    "refine_insert",
    "smoothness_ratios",
    "read_mesh_csv",
    "write_mesh_csv",
]

# Relative spread below which float construction noise must not flip the
# uniform/nonuniform classification.
UNIFORMITY_RTOL = 1e-12

# 17 significant digits round-trip any IEEE double exactly.
FLOAT_FORMAT = ".17g"


class MeshError(ValueError):
    """Raised for invalid mesh parameters or malformed mesh data."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Mesh:
    """Strictly increasing grid points with derived step sizes.

    ``points`` holds t_0 .. t_{m+1}; ``steps`` is computed once as
    ``points[1:] - points[:-1]`` and shares the mesh's immutability.
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1:
            raise MeshError("mesh points must form a one-dimensional sequence")
        if pts.size < 2:
            raise MeshError(f"a mesh needs at least 2 points, got {pts.size}")
        if not np.all(np.isfinite(pts)):
            raise MeshError("mesh points must all be finite")
        steps = np.diff(pts)
        if np.any(steps <= 0):
            bad = int(np.argmax(steps <= 0))
            raise MeshError(
                f"mesh points must be strictly increasing; "
                f"points[{bad}]={pts[bad]!r} >= points[{bad + 1}]={pts[bad + 1]!r}"
            )
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "_steps", _freeze(steps))

    @property
    def steps(self) -> np.ndarray:
        """Step sizes h_k = t_{k+1} - t_k for k = 0..m."""
        return self._steps  # type: ignore[attr-defined]

    @property
    def n_points(self) -> int:
        return int(self.points.size)

    @property
    def m(self) -> int:
        """Index of the last step; the mesh has m+2 points."""
        return self.n_points - 2

    @property
    def a(self) -> float:
        return float(self.points[0])

    @property
    def b(self) -> float:
        return float(self.points[-1])

    def is_uniform(self) -> bool:
        """True when the relative spread of the steps is below tolerance."""
        h = self.steps
        hmax = float(h.max())
        return (hmax - float(h.min())) / hmax <= UNIFORMITY_RTOL

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mesh):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.all(self.points == other.points)
        )

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def __repr__(self) -> str:
        return (
            f"Mesh({self.n_points} points on [{self.a:g}, {self.b:g}], "
            f"{'uniform' if self.is_uniform() else 'nonuniform'})"
        )


def build_uniform(a: float, b: float, n_points: int) -> Mesh:
    """Mesh of ``n_points`` equally spaced points from ``a`` to ``b``."""
    if not b > a:
        raise MeshError(f"interval endpoints must satisfy b > a, got a={a!r}, b={b!r}")
    if n_points < 2:
        raise MeshError(f"n_points must be at least 2, got {n_points}")
    return Mesh(np.linspace(a, b, int(n_points)))


def build_geometric(t0: float, h0: float, r: float, m: int) -> Mesh:
    """Mesh whose steps follow the geometric progression h_k = r**k * h0.

    Produces m+2 points starting at ``t0``.  With r = 1 the construction
    degenerates to ``build_uniform`` on the same endpoints, bit for bit.
    """
    if not h0 > 0:
        raise MeshError(f"initial step h0 must be positive, got {h0!r}")
    if not r > 0:
        raise MeshError(f"step ratio r must be positive, got {r!r}")
    if m < 0:
        raise MeshError(f"m must be nonnegative, got {m}")
    if r == 1.0:
        return build_uniform(t0, t0 + (m + 1) * h0, m + 2)
    steps = h0 * r ** np.arange(m + 1, dtype=np.float64)
    points = np.concatenate(([t0], t0 + np.cumsum(steps)))
    return Mesh(points)


def build_equiarclength(
    curve: "AnalyticFunction",
    a: float,
    b: float,
    n_points: int,
    quad_resolution: int = 10_000,
) -> Mesh:
    """Mesh whose points split the arclength of ``curve`` into equal pieces.

    The arclength integrand sqrt(1 + curve'(t)**2) is accumulated with the
    composite trapezoidal rule on a uniform grid of ``quad_resolution`` + 1
    samples, and the cumulative table is inverted by monotone linear
    interpolation.
    """
    if not b > a:
        raise MeshError(f"interval endpoints must satisfy b > a, got a={a!r}, b={b!r}")
    if n_points < 2:
        raise MeshError(f"n_points must be at least 2, got {n_points}")
    if quad_resolution < n_points:
        raise MeshError(
            f"quad_resolution ({quad_resolution}) must be at least n_points ({n_points})"
        )
    s = np.linspace(a, b, int(quad_resolution) + 1)
    speed = np.sqrt(1.0 + np.asarray(curve.evaluate(1, s), dtype=np.float64) ** 2)
    panels = 0.5 * (speed[1:] + speed[:-1]) * np.diff(s)
    cumulative = np.concatenate(([0.0], np.cumsum(panels)))
    targets = np.linspace(0.0, cumulative[-1], int(n_points))
    points = np.interp(targets, cumulative, s)
    points[0] = a
    points[-1] = b
    try:
        return Mesh(points)
    except MeshError as exc:
        raise MeshError(
            f"quad_resolution={quad_resolution} is too small to resolve a strictly "
            f"increasing {n_points}-point mesh: {exc}"
        ) from exc


def refine_insert(mesh: Mesh, beta: float) -> Mesh:
    """Insert one point at t_k + beta*h_k into every step of ``mesh``.

    The original points are preserved exactly; the result has
    2*(m+1) + 1 points.
    """
    if not 0.0 < beta < 1.0:
        raise MeshError(f"beta must lie strictly inside (0, 1), got {beta!r}")
    pts = mesh.points
    out = np.empty(2 * pts.size - 1, dtype=np.float64)
    out[0::2] = pts
    out[1::2] = pts[:-1] + beta * mesh.steps
    return Mesh(out)


def smoothness_ratios(mesh: Mesh) -> np.ndarray:
    """Consecutive step ratios h_{k+1} / h_k for k = 0..m-1."""
    if mesh.m < 1:
        raise MeshError("smoothness ratios need a mesh with at least two steps")
    h = mesh.steps
    return h[1:] / h[:-1]


def write_mesh_csv(mesh: Mesh, target: str | Path | io.TextIOBase) -> None:
    """Write ``k,t,h`` rows; the last row leaves h empty."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as fh:
            write_mesh_csv(mesh, fh)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(["k", "t", "h"])
    h = mesh.steps
    for k, t in enumerate(mesh.points):
        last = k == mesh.n_points - 1
        writer.writerow([k, format(t, FLOAT_FORMAT), "" if last else format(h[k], FLOAT_FORMAT)])


def read_mesh_csv(source: str | Path | io.TextIOBase) -> Mesh:
    """Read a mesh written by :func:`write_mesh_csv`."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_mesh_csv(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [c.strip() for c in header[:2]] != ["k", "t"]:
        raise MeshError(f"expected mesh CSV header 'k,t,h', got {header!r}")
    points = []
    for row in reader:
        if not row:
            continue
        try:
            points.append(float(row[1]))
        except (IndexError, ValueError) as exc:
            raise MeshError(f"malformed mesh CSV row {row!r}") from exc
    return Mesh(np.asarray(points))
