import numpy as np
import pytest

from modelspace import duality as du
from modelspace import forms
from modelspace import projective as pj


def test_dual_cone_quadrant():
    cone = du.PolyCone(generators=[[1, 0], [0, 1]])
    dual = cone.dual(forms.bpq(2, 0))
    assert du.same_ray_set(dual.generators, [[-1, 0], [0, -1]])


def test_light_cone_self_dual():
    lc = du.PolyCone(generators=[[1, 1], [-1, 1]])
    dual = lc.dual(forms.bpq(1, 1))
    assert du.same_ray_set(dual.generators, lc.generators)


def test_double_dual_is_identity():
    rng = np.random.default_rng(0)
    b = forms.bpq(3, 0)
    for _ in range(10):
        rays = rng.standard_normal((6, 3)) + np.array([0, 0, 2.0])
        cone = du.PolyCone(generators=rays)
        dd = cone.dual(b).dual(b)
        assert du.same_ray_set(dd.generators, du.cone_facet_normals(cone.halfspaces))


def test_cone_representation_round_trip():
    cone = du.PolyCone(generators=[[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]])
    half = cone.halfspaces
    back = du.PolyCone(halfspaces=half)
    assert du.same_ray_set(back.generators, cone.generators)


def test_cone_errors():
    with pytest.raises(ValueError):
        du.PolyCone(generators=[[1, 0], [-1, 0]]).halfspaces  # contains a line
    with pytest.raises(ValueError):
        du.PolyCone(generators=[[1, 0, 0], [0, 1, 0]]).halfspaces  # not full dim
    with pytest.raises(ValueError):
        du.PolyCone()


def test_euclidean_cube_cross_polytope():
    cube = du.EuclideanBody(
        [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    )
    dirs = du.sphere_grid(8)
    assert np.max(np.abs(cube.support(dirs) - np.abs(dirs).sum(axis=1))) < 1e-12
    dual = cube.dual()
    expected = np.vstack([np.eye(3), -np.eye(3)])
    assert du.same_ray_set(
        dual.vertices / np.linalg.norm(dual.vertices, axis=1, keepdims=True),
        expected,
    )
    assert np.max(np.abs(np.linalg.norm(dual.vertices, axis=1) - 1.0)) < 1e-12
    # double dual
    dd = dual.dual()
    assert np.max(np.abs(dd.support(dirs) - cube.support(dirs))) < 1e-12


def test_euclidean_admissibility():
    with pytest.raises(ValueError):
        du.EuclideanBody([[1, 0, 0], [2, 0, 0], [1, 1, 0], [1, 0, 1]])


def test_minkowski_body_and_dual():
    verts = np.array([[0.3, 0.1, 1.2], [-0.2, 0.4, 1.5], [0.0, 0.0, 1.0]])
    body = du.MinkowskiBody(verts)
    dirs = du.hyperboloid_grid(16)
    h = body.support(dirs)
    assert np.all(h < 0)
    dd = body.dual().dual()
    assert np.max(np.abs(dd.support(dirs) - h)) < 1e-10
    with pytest.raises(ValueError):
        du.MinkowskiBody([[1.0, 0.0, 0.5]])  # spacelike vertex


def test_minkowski_dual_admissible():
    # dual vertices are future causal up to the polygonal-recession fringe
    rng = np.random.default_rng(1)
    rho = rng.uniform(0, 1, 6)
    phi = rng.uniform(0, 7, 6)
    verts = np.stack([
        np.sinh(rho) * np.cos(phi),
        np.sinh(rho) * np.sin(phi),
        np.cosh(rho),
    ], axis=1)
    body = du.MinkowskiBody(verts)
    dual = body.dual()
    b21 = forms.bpq(2, 1)
    q = b21.quad(dual.vertices) / np.sum(dual.vertices**2, axis=1)
    assert np.all(dual.vertices[:, 2] > 0)
    assert np.max(q) < 1e-2  # inside F up to the 64-gon fringe
    # and the dual support is negative on strictly future directions
    assert np.all(dual.support(du.hyperboloid_grid(8)) < 0)


def test_order_reversal_and_sum_additivity():
    rng = np.random.default_rng(2)
    v = rng.standard_normal((12, 3))
    v = v / np.linalg.norm(v, axis=1, keepdims=True) * rng.uniform(1, 2, (12, 1))
    a = du.EuclideanBody(v)
    b = du.EuclideanBody(1.5 * v)
    g = du.sphere_grid(8)
    assert np.all(b.dual().support(g) <= a.dual().support(g) + 1e-12)
    s = a.minkowski_sum(b)
    assert np.max(np.abs(s.support(g) - a.support(g) - b.support(g))) < 1e-10
    # the Lorentzian flavor is additive too
    rho = rng.uniform(0, 0.8, 5)
    phi = rng.uniform(0, 7, 5)
    verts = np.stack(
        [np.sinh(rho) * np.cos(phi), np.sinh(rho) * np.sin(phi), np.cosh(rho)], axis=1)
    am = du.MinkowskiBody(verts)
    bm = du.MinkowskiBody(verts * 1.4)
    gm = du.hyperboloid_grid(8)
    sm = am.minkowski_sum(bm)
    assert np.max(np.abs(sm.support(gm) - am.support(gm) - bm.support(gm))) < 1e-10


def test_support_from_body_validation():
    with pytest.raises(ValueError):
        du.support_from_body(np.array([[1.0, 0, 0], [1.1, 0, 0], [1, 1, 0], [1, 0, 1]]),
                             flavor="euclidean")
    sfn = du.support_from_body(
        np.array([[0.0, 0.0, 1.0], [0.1, 0.0, 1.1]]), flavor="minkowski", grid=8
    )
    assert np.all(sfn.values < 0)


def test_ball_and_hyperboloid_duals_exact():
    grid = du.sphere_grid(16)
    se = du.SupportFunctionE(grid, np.full(len(grid), 2.0), grid_shape=(16, 16))
    assert np.max(np.abs(du.dual_support(se).values - 0.5)) < 1e-12
    gridm = du.hyperboloid_grid(16)
    sm = du.SupportFunctionMin(gridm, np.full(len(gridm), -2.0), grid_shape=(16, 16))
    assert np.max(np.abs(du.dual_support(sm).values + 0.5)) < 1e-12


def test_body_from_support_round_trips():
    dirs = du.sphere_grid(12)
    A = np.diag([1.0, 2.0, 1.5])
    h = np.sqrt(np.einsum("ni,ij,nj->n", dirs, A, dirs))
    sfn = du.SupportFunctionE(dirs, h, grid_shape=(12, 12))
    body = du.body_from_support(sfn)
    again = du.support_from_body(body, dirs=dirs)
    assert np.max(np.abs(again.values - h)) < 1e-10
    gridm = du.hyperboloid_grid(12)
    sm = du.SupportFunctionMin(gridm, np.full(len(gridm), -2.0), grid_shape=(12, 12))
    mb = du.body_from_support(sm)
    back = du.support_from_body(mb, dirs=gridm)
    assert np.max(np.abs(back.values + 2.0)) < 1e-10


def test_convexity_violation_detects():
    dirs = du.sphere_grid(12)
    good = du.SupportFunctionE(dirs, np.full(len(dirs), 1.0), grid_shape=(12, 12))
    assert good.convexity_violation() <= 1e-12
    bad_vals = 1.0 + 0.5 * np.cos(5 * np.arange(len(dirs)))
    bad = du.SupportFunctionE(dirs, bad_vals, grid_shape=(12, 12))
    assert bad.convexity_violation() > 1e-3


def test_dual_point_round_trip_and_distance():
    ell2 = pj.model_space("Ell2")
    x = pj.ProjPoint([0, 0, 1])
    plane = du.dual_point(ell2, x)
    assert du.dual_hyperplane(ell2, plane) == x
    for vec in plane.basis():
        assert pj.projective_distance(ell2, x, pj.ProjPoint(vec)) == pytest.approx(
            np.pi / 2, abs=1e-10
        )
    hyp3 = pj.model_space("Hyp3")
    with pytest.raises(ValueError):
        du.dual_point(hyp3, pj.ProjPoint([1, 0, 0, 0]))  # not in Hyp3


def test_hyp_plane_ds_point_duality():
    # the normal of a hyperbolic plane is a de Sitter point and vice versa
    hyp3 = pj.model_space("Hyp3")
    ds3 = pj.model_space("dS3")
    x = pj.ProjPoint([0.2, 0.1, 0.0, 1.0])
    plane = du.dual_point(hyp3, x)
    assert not ds3.contains(pj.ProjPoint(plane.normal))  # normal is the Hyp point itself
    # a spacelike direction dualizes to a plane meeting Hyp3
    v = pj.ProjPoint([1.0, 0.2, 0.0, 0.3])
    assert ds3.contains(v)
    plane_v = du.dual_point(ds3, v)
    basis = plane_v.basis()
    sols = [b for b in basis if hyp3.sign * float(hyp3.form.quad(b)) > 0]
    assert sols  # the dual plane meets hyperbolic space


def test_ads_dual_plane_distance():
    ads = pj.model_space("AdS3")
    x = pj.ProjPoint([0, 0, 0, 1.0])
    plane = du.dual_point(ads, x)
    rng = np.random.default_rng(3)
    found = 0
    for _ in range(20):
        v = plane.basis().T @ rng.standard_normal(3)
        if ads.sign * float(ads.form.quad(v)) > 1e-9:
            found += 1
            assert pj.projective_distance(ads, x, pj.ProjPoint(v)) == pytest.approx(
                np.pi / 2, abs=1e-10
            )
    assert found > 0


def test_angle_distance_correspondence():
    # distance between duals of Euclidean planes equals the dihedral angle
    rng = np.random.default_rng(4)
    coe2 = pj.model_space("coEuc2")
    for _ in range(20):
        v1, v2 = rng.standard_normal((2, 2))
        v1 /= np.linalg.norm(v1)
        v2 /= np.linalg.norm(v2)
        h1, h2 = rng.uniform(0.2, 2.0, 2)
        p1 = pj.ProjPoint(np.append(v1, h1))
        p2 = pj.ProjPoint(np.append(v2, h2))
        d = pj.projective_distance(coe2, p1, p2)
        angle = np.arccos(np.clip(abs(float(v1 @ v2)), 0, 1))
        assert d == pytest.approx(angle, abs=1e-9)


def test_truncation_dual():
    apex = du.truncation_dual([0, 0, 1.0], 2.0)
    assert np.allclose(apex, [0, 0, 0.5])
    v = np.array([0.3, -0.1, 1.4])
    apex = du.truncation_dual(v, 1.0)
    assert np.allclose(apex, v / np.sqrt(-forms.bpq(2, 1).quad(v)))
    with pytest.raises(ValueError):
        du.truncation_dual([1.0, 0, 0.5], 1.0)
    with pytest.raises(ValueError):
        du.truncation_dual([0, 0, 1.0], -1.0)


def test_truncation_cone_duality_via_cones():
    # the dual of the future cone with apex p is cut by the plane b(., p) = -1
    p = np.array([0.1, -0.2, 1.1])
    body = du.MinkowskiBody(p[None, :])
    dual = body.dual()
    b21 = forms.bpq(2, 1).matrix
    vals = dual.vertices @ b21 @ p
    assert np.max(np.abs(vals + 1.0)) < 1e-9  # every dual vertex on the plane
    # and double duality recovers the cone
    dd = dual.dual()
    dirs = du.hyperboloid_grid(8)
    assert np.max(np.abs(dd.support(dirs) - body.support(dirs))) < 1e-10


def test_cylinder_maps():
    t = np.linspace(-1, 1, 9)
    hyper = np.stack([np.sinh(t), np.cosh(t)], axis=1)
    image = du.cylinder_map_2d(hyper)
    # the unit hyperbola lands on the unit circle in this chart
    assert np.max(np.abs(np.linalg.norm(image, axis=1) - 1.0)) < 1e-12
    # a hyperbola through the chart origin maps onto a parabola
    s = np.concatenate([np.linspace(-1.2, -0.3, 5), np.linspace(0.3, 1.2, 5)])
    through = np.stack([np.sinh(s), 1 - np.cosh(s)], axis=1)
    img = du.cylinder_map_2d(through)
    assert np.max(np.abs(img[:, 1] - (img[:, 0] ** 2 - 1) / 2)) < 1e-12
    back = du.cylinder_map_2d_inverse(img)
    assert np.max(np.abs(back - through)) < 1e-12
    with pytest.raises(ValueError):
        du.cylinder_map_2d([[1.0, 0.0]])


def test_cylinder_chart_round_trip_and_convexity():
    pts = np.array([[0.3, -0.2, 1.3, 0.7], [0.0, 0.0, 1.0, -0.5]])
    for p in pts:
        p[:3] /= np.sqrt(-(p[0] ** 2 + p[1] ** 2 - p[2] ** 2))
    chart = du.cylinder_to_chart(pts)
    assert np.max(np.abs(du.cylinder_from_chart(chart) - pts)) < 1e-12
    # convexity is preserved: a sampled admissible support stays convex
    rng = np.random.default_rng(5)
    verts = np.stack([
        np.sinh(rng.uniform(0, 0.8, 8)) * np.cos(rng.uniform(0, 7, 8)),
        np.sinh(rng.uniform(0, 0.8, 8)) * np.sin(rng.uniform(0, 7, 8)),
        np.cosh(rng.uniform(0, 0.8, 8)),
    ], axis=1)
    sfn = du.support_from_body(du.MinkowskiBody(verts), grid=16)
    assert sfn.convexity_violation() < 1e-8
