import numpy as np
import pytest

from modelspace import connections as cn
from modelspace import transition as tr
from modelspace.projective import model_space


def test_ambient_derivative_examples():
    sp = model_space("Ell3")
    const = cn.VectorField(sp, lambda x: np.array([1.0, 2.0, 3.0, 4.0]), project=False)
    x0 = np.array([1.0, 0, 0, 0])
    assert np.max(np.abs(cn.ambient_derivative(const, np.array([0, 1.0, 0, 0]), x0))) < 1e-9
    ident = cn.VectorField(sp, lambda x: x, project=False)
    v = np.array([0.3, -0.1, 0.0, 0.7])
    assert np.max(np.abs(cn.ambient_derivative(ident, v, x0) - v)) < 1e-9
    rot = cn.VectorField(sp, lambda x: np.array([x[1], -x[0], 0.0, 0.0]), project=False)
    out = cn.ambient_derivative(rot, np.array([1.0, 0, 0, 0]), np.array([0.5, 0.5, 0.5, 0.5]))
    assert np.max(np.abs(out - np.array([0.0, -1.0, 0, 0]))) < 1e-9


def test_connection_constructor_guards():
    with pytest.raises(ValueError):
        cn.levi_civita(model_space("coEuc3"))
    with pytest.raises(ValueError):
        cn.co_connection(model_space("Ell3"))


def test_geodesics_nondegenerate():
    ell3 = model_space("Ell3")
    conn = cn.levi_civita(ell3)
    circle = lambda t: np.array([np.cos(t), np.sin(t), 0.0, 0.0])
    assert cn.geodesic_residual(conn, circle) < 1e-6
    hyp3 = model_space("Hyp3")
    connh = cn.levi_civita(hyp3)
    branch = lambda t: np.array([np.sinh(t), 0.0, 0.0, np.cosh(t)])
    assert cn.geodesic_residual(connh, branch) < 1e-6
    latitude = lambda t: np.array(
        [np.cos(t) * np.cos(0.7), np.sin(t) * np.cos(0.7), np.sin(0.7), 0.0])
    assert cn.geodesic_residual(conn, latitude) > 1e-2


def test_nondegenerate_levi_civita_axioms():
    rng = np.random.default_rng(7)
    for name in ("Ell3", "Hyp3", "dS3", "AdS3"):
        sp = model_space(name)
        conn = cn.levi_civita(sp)
        pts = sp.sample_points(rng, 5)
        X = cn.random_tangent_field(sp, rng, 0.5)
        Y = cn.random_tangent_field(sp, rng, 0.5)
        Z = cn.random_tangent_field(sp, rng, 0.5)
        assert cn.symmetry_residual(conn, X, Y, pts) < 1e-8
        assert cn.metric_compatibility_residual(conn, X, Y, Z, pts) < 1e-7


def test_co_connection_axioms():
    rng = np.random.default_rng(0)
    for name in ("coEuc3", "coMin3"):
        sp = model_space(name)
        conn = cn.co_connection(sp)
        pts = sp.sample_points(rng, 6)
        X = cn.random_tangent_field(sp, rng, 0.5)
        Y = cn.random_tangent_field(sp, rng, 0.5)
        Z = cn.random_tangent_field(sp, rng, 0.5)
        assert cn.symmetry_residual(conn, X, Y, pts) < 1e-8
        assert cn.metric_compatibility_residual(conn, X, Y, Z, pts) < 1e-8
        assert cn.t_parallel_residual(conn, pts) < 1e-12
        omega = cn.volume_form(sp)
        frame = [X, Y, cn.random_tangent_field(sp, rng, 0.5)]
        assert cn.parallel_volume_residual(conn, omega, Z, frame, pts) < 1e-8
        normal = rng.standard_normal(4)
        normal[-1] = 1.0 + abs(normal[-1])
        assert cn.plane_preservation_residual(sp, normal, rng) < 1e-8


def test_slice_fields_match_sphere_connection():
    # on the slice S^2 x {0} the co-Euclidean connection restricts to the
    # round Levi-Civita connection
    coe = model_space("coEuc3")
    ell2 = model_space("Ell2")
    conn_co = cn.co_connection(coe)
    conn_s2 = cn.levi_civita(ell2)
    rng = np.random.default_rng(1)
    f3 = cn.random_tangent_field(ell2, rng, 0.5)
    g3 = cn.random_tangent_field(ell2, rng, 0.5)
    lift = lambda h: cn.VectorField(
        coe, lambda x: np.append(h(x[:3] / np.linalg.norm(x[:3])), 0.0), project=False)
    for _ in range(4):
        v = rng.standard_normal(3)
        x3 = v / np.linalg.norm(v)
        x4 = np.append(x3, 0.0)
        out_co = conn_co(lift(f3), lift(g3), x4)
        out_s2 = conn_s2(f3, g3, x3)
        assert abs(out_co[3]) < 1e-8
        assert np.max(np.abs(out_co[:3] - out_s2)) < 1e-7


def test_volume_form_normalization():
    coe = model_space("coEuc3")
    omega = cn.volume_form(coe)
    x0 = np.array([1.0, 0, 0, 0.2])
    e2 = np.array([0, 1.0, 0, 0])
    e3 = np.array([0, 0, 1.0, 0])
    T = np.array([0, 0, 0, 1.0])
    assert omega(x0, e2, e3, T) == pytest.approx(1.0)
    assert omega(x0, e3, e2, T) == pytest.approx(-1.0)


def test_co_geodesics():
    coe = model_space("coEuc3")
    cc = cn.co_connection(coe)
    assert cn.geodesic_residual(cc, lambda t: np.array([np.cos(t), np.sin(t), 0, 0.0])) < 1e-6
    vertical = lambda t: np.array([0.6, 0.8, 0.0, 0.3 + 2.0 * t])
    assert cn.geodesic_residual(cc, vertical) < 1e-6
    p = np.array([0.3, -0.2, 0.5])
    u_vec = np.array([1.0, 0, 0, p[0]])
    v_vec = np.array([0, 1.0, 0, p[1]])
    tilted = lambda t: cn.project_to_locus(coe, np.cos(t) * u_vec + np.sin(t) * v_vec)
    assert cn.geodesic_residual(cc, tilted) < 1e-6
    # a constant-height circle is not a line unless the height is zero
    lifted_circle = lambda t: np.array([np.cos(t), np.sin(t), 0.0, 0.4])
    assert cn.geodesic_residual(cc, lifted_circle) > 1e-2


def test_holonomy_measures_curvature():
    ell2 = model_space("Ell2")
    s = 0.15

    def step(x, d):
        d = d - np.dot(d, x) * x
        d = d / np.linalg.norm(d)
        return np.cos(s) * x + np.sin(s) * d

    def geo(a, b):
        ang = np.arccos(np.clip(np.dot(a, b), -1, 1))
        w = b - np.dot(a, b) * a
        w = w / np.linalg.norm(w)
        return lambda t: np.cos(ang * t) * a + np.sin(ang * t) * w

    A = np.array([1.0, 0, 0])
    B = step(A, np.array([0, 1.0, 0]))
    C = step(B, np.array([0, 0, 1.0]))
    D = step(C, -(B - A))
    loop = [geo(A, B), geo(B, C), geo(C, D), geo(D, A)]
    X0 = np.array([0, 1.0, 0])
    angle = cn.holonomy_angle(ell2, loop, X0)
    assert abs(angle / s**2 - 1.0) < 0.02


def test_transition_of_connection_and_volume():
    rng = np.random.default_rng(2)

    def family(axis):
        c0 = rng.standard_normal(4) * 0.5
        c0[axis] = 0.0
        c1 = rng.standard_normal((4, 4)) * 0.4
        c1[axis, :] = 0.0
        d0 = rng.standard_normal(4) * 0.4
        return lambda t, x: c0 + c1 @ x + t * d0

    for src_name, co_name in [("Ell3", "coEuc3"), ("Hyp3", "coMin3")]:
        src = model_space(src_name)
        cosp = model_space(co_name)
        fam = tr.transition_family(src_name, "plane")
        xi = cosp.sample_points(rng, 1, radius=0.8)[0]
        gap = cn.connection_transition_check(
            src, cosp, fam, family(fam.axis), family(fam.axis), xi)
        assert gap < 1e-6
        vgap = cn.volume_transition_check(
            src, cosp, fam, [family(fam.axis) for _ in range(3)], xi)
        assert vgap < 1e-6
    # zero families give a zero gap
    zero = lambda t, x: np.zeros(4)
    src = model_space("Ell3")
    cosp = model_space("coEuc3")
    fam = tr.transition_family("Ell3", "plane")
    xi = cosp.sample_points(rng, 1, radius=0.8)[0]
    assert cn.volume_transition_check(src, cosp, fam, [zero, zero, zero], xi) < 1e-12


def test_transition_tangency_guard():
    rng = np.random.default_rng(3)
    src = model_space("Ell3")
    cosp = model_space("coEuc3")
    fam = tr.transition_family("Ell3", "plane")
    xi = cosp.sample_points(rng, 1, radius=0.8)[0]
    bad = lambda t, x: np.array([0.0, 0, 0, 1.0])  # transverse at t = 0
    with pytest.raises(ValueError):
        cn.connection_transition_check(src, cosp, fam, bad, bad, xi)
