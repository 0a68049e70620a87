"""Convex duality through cones and support functions.

Dualizing a convex body is dualizing the cone over it one dimension up.
In the Euclidean flavor that is the polarity with respect to the unit
sphere; in the Minkowski flavor, with respect to the unit hyperboloid,
restricted to future convex sets inside the light cone.
"""

import numpy as np

from modelspace import duality as du
from modelspace import forms
from modelspace import projective as pj

print("== cones: the quadrant and the light cone ==")
quadrant = du.PolyCone(generators=[[1, 0], [0, 1]])
print("  dual of the first quadrant:", np.round(quadrant.dual(forms.bpq(2, 0)).generators, 6).tolist())
light = du.PolyCone(generators=[[1, 1], [-1, 1]])
dual_light = light.dual(forms.bpq(1, 1))
print("  future light cone self-dual under b_{1,1}:",
      du.same_ray_set(dual_light.generators, light.generators))

print("\n== cube and cross-polytope ==")
cube = du.EuclideanBody([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)])
dual = cube.dual()
print("  dual vertices:", np.round(dual.vertices, 9).tolist())
grid = du.sphere_grid(16)
again = dual.dual()
print(f"  double-dual support gap: {np.max(np.abs(again.support(grid) - cube.support(grid))):.2e}")

print("\n== balls and hyperboloids invert their radii ==")
se = du.SupportFunctionE(grid, np.full(len(grid), 2.0), grid_shape=(16, 16))
print(f"  B_2 dualizes to support {du.dual_support(se).values[0]:.6f} (1/2)")
gridm = du.hyperboloid_grid(16)
sm = du.SupportFunctionMin(gridm, np.full(len(gridm), -0.5), grid_shape=(16, 16))
print(f"  H_1/2 dualizes to support {du.dual_support(sm).values[0]:.6f} (-2)")

print("\n== a Minkowski future convex set and its dual ==")
verts = np.array([[0.3, 0.1, 1.2], [-0.2, 0.4, 1.5], [0.0, 0.0, 1.0]])
body = du.MinkowskiBody(verts)
h = du.support_from_body(body, grid=16)
print(f"  support negative on H^2_+: min {h.values.min():.4f}, max {h.values.max():.4f}")
print(f"  convexity violation of the cylinder-model restriction: "
      f"{h.convexity_violation():.2e}")
dd = body.dual().dual()
print(f"  double-dual support gap: "
      f"{np.max(np.abs(dd.support(gridm) - body.support(gridm))):.2e}")

print("\n== truncations and cones are dual fundamental pieces ==")
apex = du.truncation_dual([0, 0, 1.0], 2.0)
print("  dual apex of the truncation at distance 2:", apex.tolist())
cone_body = du.MinkowskiBody(np.array([[0.1, -0.2, 1.1]]))
trunc = cone_body.dual()
plane_vals = trunc.vertices @ forms.bpq(2, 1).matrix @ np.array([0.1, -0.2, 1.1])
print(f"  every dual vertex sits on the plane b(., p) = -1: "
      f"deviation {np.max(np.abs(plane_vals + 1)):.2e}")

print("\n== point/hyperplane duality is the distance-pi/2 correspondence ==")
ell2 = pj.model_space("Ell2")
x = pj.ProjPoint([0, 0, 1])
plane = du.dual_point(ell2, x)
for vec in plane.basis():
    print(f"  d(x, point of x*): {pj.projective_distance(ell2, x, pj.ProjPoint(vec)):.12f}")

print("\n== dihedral angles of Euclidean planes = distances of their duals ==")
rng = np.random.default_rng(1)
coe2 = pj.model_space("coEuc2")
v1, v2 = rng.standard_normal((2, 2))
v1, v2 = v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)
p1 = pj.ProjPoint(np.append(v1, 0.7))
p2 = pj.ProjPoint(np.append(v2, 1.3))
print(f"  distance of duals: {pj.projective_distance(coe2, p1, p2):.10f}")
print(f"  angle of normals:  {np.arccos(abs(float(v1 @ v2))):.10f}")

print("\n== the cylinder model of co-Minkowski space ==")
t = np.linspace(-1, 1, 5)
branch = np.stack([np.sinh(t), np.cosh(t)], axis=1)
image = du.cylinder_map_2d(branch)
print("  the unit hyperbola lands on the unit circle:",
      np.round(np.linalg.norm(image, axis=1), 12).tolist())
s = np.array([-1.0, -0.5, 0.5, 1.0])
through = np.stack([np.sinh(s), 1 - np.cosh(s)], axis=1)
img = du.cylinder_map_2d(through)
print(f"  a hyperbola through the chart origin becomes the parabola "
      f"v = (u^2-1)/2: residual {np.max(np.abs(img[:,1] - (img[:,0]**2 - 1)/2)):.2e}")
