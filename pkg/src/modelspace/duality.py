"""Dual cones, point/hyperplane duality, convex bodies and support functions.

Everything here runs through one exact primitive: facet enumeration of a
pointed full-dimensional polyhedral cone (Qhull).  Convex bodies are
polyhedral, encoded by the cone over them in one dimension up:

* a Euclidean body K (compact, origin interior) lifts to the cone over
  K x {1}, dualized with the ambient positive form;
* a Minkowski body K (future convex, inside the future cone) lifts to the
  cone over {-1} x K, dualized with the ambient Lorentzian form.  Its
  recession cone is stored explicitly as a finite set of future rays, so
  the double dual is an exact polyhedral involution.

Smooth bodies (balls, hyperboloids) live as sampled support functions on
direction grids; their duals come from the one-homogeneous polar formula
evaluated on the grid, which is exact at grid directions for bodies of
revolution about grid points.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from . import forms
from .forms import bpq
from .projective import ProjPoint

__all__ = [
    "PolyCone",
    "cone_facet_normals",
    "same_ray_set",
    "EuclideanBody",
    "MinkowskiBody",
    "lightlike_rays",
    "SupportFunctionE",
    "SupportFunctionMin",
    "sphere_grid",
    "circle_grid",
    "hyperboloid_grid",
    "support_from_body",
    "body_from_support",
    "dual_support",
    "Hyperplane",
    "dual_point",
    "dual_hyperplane",
    "truncation_dual",
    "cylinder_to_chart",
    "cylinder_from_chart",
    "cylinder_map_2d",
    "cylinder_map_2d_inverse",
]


# ---------------------------------------------------------------------------
# polyhedral cones


def _unit_rows(rows):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms < 1e-14):
        raise ValueError("zero ray")
    return rows / norms[:, None]


def cone_facet_normals(rays):
    """Outward facet normals of the cone generated by ``rays``.

    The cone must be pointed and full-dimensional.  Each returned unit
    normal n satisfies n . g <= 0 for every generator g, and the cone is
    exactly the intersection of those halfspaces.  Equivalently this
    enumerates the extreme rays of the polar cone.
    """
    rays = _unit_rows(rays)
    d = rays.shape[1]
    pts = np.vstack([np.zeros(d), rays])
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise ValueError(
            "cone is not full-dimensional (facet enumeration failed)"
        ) from exc
    if 0 not in hull.vertices:
        raise ValueError("cone contains a line (not pointed)")
    eqs = hull.equations  # n . x + c <= 0 inside
    normals = []
    for n_and_c in eqs:
        n, c = n_and_c[:-1], n_and_c[-1]
        if abs(c) <= 1e-9:
            normals.append(n / np.linalg.norm(n))
    normals = np.array(normals)
    return _dedupe_rays(normals)


def _dedupe_rays(rows, tol=1e-9):
    if len(rows) == 0:
        return rows
    kept = []
    for r in rows:
        if not any(np.dot(r, k) > 1.0 - tol for k in kept):
            kept.append(r)
    return np.array(kept)


def same_ray_set(a, b, tol=1e-8):
    """Whether two generator sets agree up to positive scale and order."""
    a = _dedupe_rays(_unit_rows(a))
    b = _dedupe_rays(_unit_rows(b))
    if len(a) != len(b):
        return False
    for r in a:
        if not any(np.dot(r, s) > 1.0 - tol for s in b):
            return False
    return True


class PolyCone:
    """A closed convex polyhedral cone, by generators or by halfspaces.

    Halfspaces are stored as functional rows f meaning {x : f . x <= 0}.
    Conversions between the two representations are exact facet/ray
    enumerations and are cached.
    """

    def __init__(self, generators=None, halfspaces=None):
        if (generators is None) == (halfspaces is None):
            raise ValueError("give exactly one of generators or halfspaces")
        self._generators = None if generators is None else _unit_rows(generators)
        self._halfspaces = None if halfspaces is None else _unit_rows(halfspaces)
        if self._generators is not None and len(self._generators) == 0:
            raise ValueError("empty generator set")

    @property
    def dim(self):
        rows = self._generators if self._generators is not None else self._halfspaces
        return rows.shape[1]

    @property
    def generators(self):
        if self._generators is None:
            self._generators = cone_facet_normals(self._halfspaces)
        return self._generators

    @property
    def halfspaces(self):
        if self._halfspaces is None:
            self._halfspaces = cone_facet_normals(self._generators)
        return self._halfspaces

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        scale = max(1.0, np.linalg.norm(x))
        return bool(np.all(self.halfspaces @ x <= tol * scale))

    def dual(self, form):
        """The cone {y : b(g, y) <= 0 for all generators g}, as generators.

        The b-identification turns each generator into a halfspace
        functional; vertex enumeration converts back to generators.
        """
        funcs = self.generators @ form.matrix
        return PolyCone(generators=cone_facet_normals(funcs))

    def __repr__(self):
        k = "generators" if self._generators is not None else "halfspaces"
        rows = self._generators if self._generators is not None else self._halfspaces
        return f"PolyCone({k}={len(rows)}, dim={self.dim})"


# ---------------------------------------------------------------------------
# bodies


class EuclideanBody:
    """A compact convex polytope in E^n with the origin in its interior."""

    def __init__(self, vertices, check=True):
        self.vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        self.n = self.vertices.shape[1]
        if check:
            hull = ConvexHull(self.vertices)
            offsets = hull.equations[:, -1]
            if np.any(offsets >= -1e-12):
                raise ValueError("body is not admissible: origin not interior")
            # keep only extreme points, in hull order
            self.vertices = self.vertices[hull.vertices]

    def support(self, dirs):
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        return np.max(self.vertices @ dirs.T, axis=0)

    def cone(self):
        v = self.vertices
        return PolyCone(generators=np.hstack([v, np.ones((len(v), 1))]))

    def dual(self):
        """Polar body {y : <x, y> <= 1 for all x in K}, exactly."""
        form = bpq(self.n + 1, 0)
        dual_cone = self.cone().dual(form)
        gens = dual_cone.generators
        last = gens[:, -1]
        if np.any(last > -1e-10):
            raise ValueError("dual body is unbounded (origin not interior?)")
        verts = gens[:, :-1] / (-last)[:, None]
        return EuclideanBody(verts)

    def minkowski_sum(self, other):
        sums = (self.vertices[:, None, :] + other.vertices[None, :, :]).reshape(-1, self.n)
        return EuclideanBody(sums)


def lightlike_rays(n=3, count=64):
    """Future lightlike directions spanning the boundary of the cone F."""
    if n == 2:
        # boundary of the 2d future cone
        return np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2.0)
    phi = 2 * np.pi * np.arange(count) / count
    return np.stack([np.cos(phi), np.sin(phi), np.ones_like(phi)], axis=1) / np.sqrt(2.0)


class MinkowskiBody:
    """A polyhedral future convex set inside the future cone of Min^n.

    Encoded as conv(vertices) + cone(rays): the vertices are strictly
    timelike future points, the recession rays future causal directions
    (by default a polygonal sampling of the light cone, so the set is a
    polyhedral stand-in for an admissible convex set; its support planes
    are space-like away from an O(delta^2) fringe set by the ray count).
    """

    def __init__(self, vertices, rays=None, check=True):
        self.vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        self.n = self.vertices.shape[1]
        self.form = bpq(self.n - 1, 1)
        if rays is None:
            rays = lightlike_rays(self.n)
        self.rays = _unit_rows(rays)
        if check:
            q = self.form.quad(self.vertices)
            if np.any(q >= 0) or np.any(self.vertices[:, -1] <= 0):
                raise ValueError(
                    "body is not admissible: vertices must be future time-like"
                )
            qr = self.form.quad(self.rays)
            if np.any(qr > 1e-9) or np.any(self.rays[:, -1] <= 0):
                raise ValueError(
                    "body is not admissible: recession rays must be future causal"
                )

    def support(self, dirs):
        """sup over the body of b(x, v); finite for strictly future dirs."""
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        ray_vals = self.rays @ self.form.matrix @ dirs.T
        if np.any(ray_vals > 1e-9):
            raise ValueError("support direction not dual to the recession cone")
        return np.max(self.vertices @ self.form.matrix @ dirs.T, axis=0)

    def cone(self):
        v, r = self.vertices, self.rays
        lifted = np.vstack([
            np.hstack([-np.ones((len(v), 1)), v]),
            np.hstack([np.zeros((len(r), 1)), r]),
        ])
        return PolyCone(generators=lifted)

    def recession_dual(self):
        """Generators of {y : b(x, y) <= 0 for x in the body}: the
        recession cone of the dual set, an exact 3-d cone dual."""
        rows = np.vstack([self.vertices, self.rays]) @ self.form.matrix
        return cone_facet_normals(rows)

    def dual(self):
        """The set {y : b(x, y) <= -1 for all x in K}, exactly.

        Extreme points come from the cone over the body; the recession
        rays of the dual (which need not appear among the 4-d extreme
        rays, e.g. when the extreme points are coplanar) come from the
        3-d dual of the recession data.
        """
        ambient = bpq(self.n, 1)
        dual_cone = self.cone().dual(ambient)
        gens = dual_cone.generators
        first = gens[:, 0]
        verts = gens[first < -1e-10]
        if len(verts) == 0:
            raise ValueError("dual has no vertices; body was not admissible")
        verts = verts[:, 1:] / (-verts[:, 0])[:, None]
        return MinkowskiBody(verts, rays=self.recession_dual(), check=False)

    def minkowski_sum(self, other):
        sums = (self.vertices[:, None, :] + other.vertices[None, :, :]).reshape(-1, self.n)
        rays = np.vstack([self.rays, other.rays])
        return MinkowskiBody(sums, rays=_dedupe_rays(rays), check=False)


# ---------------------------------------------------------------------------
# support functions on direction grids


def circle_grid(m=64):
    phi = 2 * np.pi * np.arange(m) / m
    return np.stack([np.cos(phi), np.sin(phi)], axis=1)


def sphere_grid(m=64):
    """Product grid on S^2 avoiding the poles; shape (m*m, 3)."""
    theta = (np.arange(m) + 0.5) * np.pi / m
    phi = 2 * np.pi * np.arange(m) / m
    T, P = np.meshgrid(theta, phi, indexing="ij")
    dirs = np.stack(
        [np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1
    )
    return dirs.reshape(-1, 3)


def hyperboloid_grid(m=64, radius=2.0):
    """Grid on the upper unit hyperboloid H^2_+ out to rapidity ``radius``."""
    rho = (np.arange(m) + 0.5) * radius / m
    phi = 2 * np.pi * np.arange(m) / m
    R, P = np.meshgrid(rho, phi, indexing="ij")
    dirs = np.stack(
        [np.sinh(R) * np.cos(P), np.sinh(R) * np.sin(P), np.cosh(R)], axis=-1
    )
    return dirs.reshape(-1, 3)


def rapidity_grid(m=64, radius=2.0):
    rho = (np.arange(m) - (m - 1) / 2) * (2 * radius / m)
    return np.stack([np.sinh(rho), np.cosh(rho)], axis=1)


class SupportFunctionE:
    """Sampled support function of a Euclidean admissible body.

    ``dirs`` are unit directions, ``values`` the (positive) support values
    h(v); the one-homogeneous extension is H(x) = |x| h(x/|x|).
    """

    flavor = "euclidean"

    def __init__(self, dirs, values, grid_shape=None):
        self.dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        self.values = np.asarray(values, dtype=float)
        self.grid_shape = grid_shape
        if np.any(self.values <= 0):
            raise ValueError("support function of an admissible body is positive")

    @property
    def n(self):
        return self.dirs.shape[1]

    def convexity_violation(self):
        """Max violation of subadditivity H(a) + H(b) >= H(a + b) on grid
        triples taken along meridians (where a + b is again a grid ray)."""
        if self.grid_shape is None:
            return 0.0
        if self.n == 2:
            h = self.values
            m = len(h)
            delta = 2 * np.pi / m
            mid = 2 * np.cos(delta) * h
            return float(np.max(mid - (np.roll(h, 1) + np.roll(h, -1))))
        mth, mph = self.grid_shape
        h = self.values.reshape(mth, mph)
        delta = np.pi / mth
        viol = 2 * np.cos(delta) * h[1:-1, :] - h[:-2, :] - h[2:, :]
        return float(np.max(viol)) if viol.size else 0.0


class SupportFunctionMin:
    """Sampled support function of a Minkowski admissible body.

    Primary storage is the cylinder model: disc points y = x'/x_n of the
    H^2_+ grid directions and the restriction hbar(y) = H((y, 1)) < 0.
    The hyperboloid values h(v) = hbar / sqrt(1 - |y|^2) are kept too.
    """

    flavor = "minkowski"

    def __init__(self, dirs, values, grid_shape=None):
        self.dirs = np.atleast_2d(np.asarray(dirs, dtype=float))  # on H_+
        self.values = np.asarray(values, dtype=float)  # h on H_+
        self.grid_shape = grid_shape
        if np.any(self.values >= 0):
            raise ValueError("support function of an admissible body is negative")
        self.disc = self.dirs[:, :-1] / self.dirs[:, -1:]
        self.hbar = self.values / self.dirs[:, -1]

    @property
    def n(self):
        return self.dirs.shape[1]

    def convexity_violation(self):
        """Max violation of convexity of hbar along radial grid lines."""
        if self.grid_shape is None:
            return 0.0
        if self.n == 2:
            r = self.disc[:, 0]
            h = self.hbar
            order = np.argsort(r)
            r, h = r[order], h[order]
            s = (r[1:-1] - r[:-2]) / (r[2:] - r[:-2])
            mid = (1 - s) * h[:-2] + s * h[2:]
            return float(np.max(h[1:-1] - mid))
        mr, mph = self.grid_shape
        r = np.linalg.norm(self.disc, axis=1).reshape(mr, mph)
        h = self.hbar.reshape(mr, mph)
        s = (r[1:-1, :] - r[:-2, :]) / (r[2:, :] - r[:-2, :])
        mid = (1 - s) * h[:-2, :] + s * h[2:, :]
        viol = h[1:-1, :] - mid
        return float(np.max(viol)) if viol.size else 0.0


def _default_grid(flavor, n, m=64):
    if flavor == "euclidean":
        return circle_grid(m) if n == 2 else sphere_grid(m)
    return rapidity_grid(m) if n == 2 else hyperboloid_grid(m)


def support_from_body(body, flavor=None, dirs=None, grid=64):
    """Sample the support function of a body on a direction grid.

    ``body`` may be a EuclideanBody/MinkowskiBody or a raw vertex array
    (then ``flavor`` picks the meaning).  Euclidean: h(v) = max <x, v>;
    Minkowski: h(v) = max b(x, v) over the vertices, for v on H^{n-1}_+.
    Raises if the body fails its admissibility condition.
    """
    if isinstance(body, EuclideanBody):
        flavor = "euclidean"
    elif isinstance(body, MinkowskiBody):
        flavor = "minkowski"
    elif flavor == "euclidean":
        body = EuclideanBody(body)
    elif flavor == "minkowski":
        body = MinkowskiBody(body)
    else:
        raise ValueError("flavor must be 'euclidean' or 'minkowski'")
    n = body.n
    if dirs is None:
        dirs = _default_grid(flavor, n, grid)
    shape = _grid_shape(flavor, n, dirs)
    values = body.support(dirs)
    cls = SupportFunctionE if flavor == "euclidean" else SupportFunctionMin
    return cls(dirs, values, grid_shape=shape)


def _grid_shape(flavor, n, dirs):
    m = len(dirs)
    if n == 2:
        return (m,)
    root = int(round(np.sqrt(m)))
    return (root, root) if root * root == m else None


def body_from_support(sf):
    """The body cut out by the sampled support halfspaces, exactly.

    Euclidean: {y : <y, v_i> <= h_i}; Minkowski: {y : b(y, v_i) <= h_i}.
    Vertices (and recession rays in the Minkowski case) are enumerated
    through the cone over the body.  Raises if the sampled values are not
    convex-consistent enough to bound a body of the right kind.
    """
    if isinstance(sf, SupportFunctionE):
        rows = np.hstack([sf.dirs, -sf.values[:, None]])
        rows = np.vstack([rows, np.append(np.zeros(sf.n), -1.0)])
        gens = cone_facet_normals(rows)
        last = gens[:, -1]
        if np.any(np.abs(last) <= 1e-10):
            raise ValueError("support samples do not bound a compact body")
        verts = gens[:, :-1] / last[:, None]
        return EuclideanBody(verts)
    if isinstance(sf, SupportFunctionMin):
        g = bpq(sf.n - 1, 1).matrix
        rows = np.hstack([sf.values[:, None], sf.dirs @ g])
        rows = np.vstack([rows, np.append(1.0, np.zeros(sf.n))])
        gens = cone_facet_normals(rows)
        first = gens[:, 0]
        verts = gens[first < -1e-10]
        if len(verts) == 0:
            raise ValueError("support samples do not bound an admissible body")
        verts = verts[:, 1:] / (-verts[:, 0])[:, None]
        # recession: the b-dual of the sampled directions
        rays = cone_facet_normals(sf.dirs @ g)
        return MinkowskiBody(verts, rays=rays, check=False)
    raise TypeError("expected a sampled support function")


def dual_support(sf, block=512):
    """Support function of the dual body, from the grid polar formula.

    Euclidean: h*(w) = max_v <v, w> / h(v); Minkowski:
    h*(w) = max_v b(v, w) / (-h(v)), both over the sample grid.  Exact at
    grid directions whenever the maximizing direction lies on the grid
    (e.g. any body of revolution sampled on its own axis grid: balls and
    hyperboloids give B_r -> B_{1/r} and H_r -> H_{1/r} exactly).
    """
    dirs = sf.dirs
    out = np.empty(len(dirs))
    if isinstance(sf, SupportFunctionE):
        for i in range(0, len(dirs), block):
            chunk = dirs[i:i + block] @ dirs.T
            out[i:i + block] = np.max(chunk / sf.values[None, :], axis=1)
        return SupportFunctionE(dirs, out, grid_shape=sf.grid_shape)
    g = bpq(sf.n - 1, 1).matrix
    for i in range(0, len(dirs), block):
        chunk = dirs[i:i + block] @ g @ dirs.T
        out[i:i + block] = np.max(chunk / (-sf.values[None, :]), axis=1)
    return SupportFunctionMin(dirs, out, grid_shape=sf.grid_shape)


# ---------------------------------------------------------------------------
# point / hyperplane duality


class Hyperplane:
    """A projective hyperplane, carried by its b-orthogonal direction."""

    def __init__(self, normal, form):
        self.normal = np.asarray(normal, dtype=float)
        if np.linalg.norm(self.normal) == 0:
            raise ValueError("hyperplane normal must be nonzero")
        self.normal = self.normal / np.linalg.norm(self.normal)
        self.form = form

    def contains(self, point, tol=1e-9):
        return abs(float(forms.evaluate(self.form, self.normal, point.rep))) <= tol

    def basis(self):
        """An orthonormal basis (Euclidean) of the b-orthogonal complement."""
        a = self.form.matrix @ self.normal
        _, _, vt = np.linalg.svd(a[None, :])
        return vt[1:]


def dual_point(space, x):
    """The hyperplane dual to a point: b-orthogonal complement of x.

    In the elliptic and anti-de Sitter cases this is the set of points at
    distance pi/2 from x; a hyperbolic point gives a de Sitter hyperplane
    and vice versa.
    """
    if not space.contains(x):
        raise ValueError(f"point is not in {space.name}")
    return Hyperplane(x.rep, space.form)


def dual_hyperplane(space, plane):
    """Inverse of dual_point: the point b-orthogonal to the hyperplane."""
    return ProjPoint(plane.normal)


def truncation_dual(v, r, form=None):
    """Apex of the cone dual to the admissible truncation at distance r.

    The truncation is the part of the future cone F on the future side of
    the space-like plane with unit normal v at Lorentzian distance r from
    the origin; its dual is the future cone with apex v / r.
    """
    v = np.asarray(v, dtype=float)
    if form is None:
        form = bpq(len(v) - 1, 1)
    q = float(form.quad(v))
    if q >= 0 or v[-1] <= 0:
        raise ValueError("truncation normal must be future time-like")
    v = v / np.sqrt(-q)
    if r <= 0:
        raise ValueError("truncation distance must be positive")
    return v / r


# ---------------------------------------------------------------------------
# cylinder model of co-Minkowski space


def cylinder_to_chart(points):
    """Renormalize co-Minkowski points (v, t), v on H^2_+, to the affine
    chart where the hyperboloid becomes the unit disc: (v'/v3, t/v3)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    v3 = points[:, -2]
    if np.any(np.abs(v3) < 1e-12):
        raise ValueError("sample on the chart boundary (vanishing slice coordinate)")
    disc = points[:, :-2] / v3[:, None]
    height = points[:, -1] / v3
    return np.hstack([disc, height[:, None]])


def cylinder_from_chart(chart_points):
    """Inverse of cylinder_to_chart, back to (v, t) with v on H^2_+."""
    chart_points = np.atleast_2d(np.asarray(chart_points, dtype=float))
    disc = chart_points[:, :-1]
    r2 = np.sum(disc * disc, axis=1)
    if np.any(r2 >= 1.0):
        raise ValueError("chart point outside the unit disc")
    scale = 1.0 / np.sqrt(1.0 - r2)
    v = np.hstack([disc * scale[:, None], scale[:, None]])
    t = chart_points[:, -1] * scale
    return np.hstack([v, t[:, None]])


def cylinder_map_2d(points):
    """The planar projective normalization (x, y) -> (x/y, -1/y)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x, y = points[:, 0], points[:, 1]
    if np.any(np.abs(y) < 1e-12):
        raise ValueError("sample with y = 0")
    return np.stack([x / y, -1.0 / y], axis=1)


def cylinder_map_2d_inverse(points):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    u, s = points[:, 0], points[:, 1]
    if np.any(np.abs(s) < 1e-12):
        raise ValueError("sample with vanishing second coordinate")
    return np.stack([-u / s, -1.0 / s], axis=1)
