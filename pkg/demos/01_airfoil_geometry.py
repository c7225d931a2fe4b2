"""
Parametric airfoil geometry
===========================

A shape is nine numbers: five Bernstein weights for the upper surface and
four for the lower (the first lower weight is tied to the first upper one so
the leading edge stays wedge-free).  This script builds a shape, inspects the
basis, and round-trips the coordinate files.
"""

import tempfile
from pathlib import Path

import numpy as np

from setfoil import CstParams, export_coordinates, export_obj, generate_airfoil, parse_coordinates
from setfoil.geometry import bernstein, class_function, surface_y

out = Path(tempfile.mkdtemp(prefix="setfoil_geom_"))

# -- the basis ---------------------------------------------------------------
# Degree-4 Bernstein polynomials partition unity, so the weights read as a
# local "thickness budget" along the chord.
x = np.linspace(0.0, 1.0, 11)
basis = np.array([bernstein(i, 4, x) for i in range(5)])
print("Bernstein column sums (all 1):", np.round(basis.sum(axis=0), 12))
print("class function peak near x = 1/3:", x[np.argmax(class_function(x))])

# -- a cambered section ------------------------------------------------------
params = CstParams(
    w_u=(0.18, 0.25, 0.22, 0.20, 0.17),
    w_l=(-0.10, -0.06, -0.02, 0.02),
    y_te=0.0015,
)
geom = generate_airfoil(params, n_points=101)
thickness = geom.upper[:, 1] - np.interp(geom.upper[:, 0], geom.lower[:, 0], geom.lower[:, 1])
print(f"max thickness {thickness.max():.4f} at x/c = {geom.upper[np.argmax(thickness), 0]:.3f}")
print(f"trailing edge gap {geom.upper[-1, 1] - geom.lower[-1, 1]:.4f} (2 * y_te)")

# The sign argument mirrors the whole expression, so a symmetric section is
# literally the same weights with the sign flipped.
mirror = surface_y(params.w_u, x, params.y_te, -1.0)
print("mirror check:", np.max(np.abs(mirror + surface_y(params.w_u, x, params.y_te, 1.0))))

# -- file round trips ----------------------------------------------------------
dat = out / "demo.dat"
dat.write_text(export_coordinates(geom, name="demo-foil"))
name, loop = parse_coordinates(dat.read_text())
print(f"wrote {dat} ({loop.shape[0]} points), reparsed as {name!r},",
      "max error", np.max(np.abs(loop - geom.loop)))

obj = out / "demo.obj"
obj.write_text(export_obj(geom, span=0.25, name="demo-foil"))
n_verts = sum(1 for line in obj.read_text().splitlines() if line.startswith("v "))
print(f"wrote {obj}: {n_verts} vertices (two z-planes of the closed loop)")
