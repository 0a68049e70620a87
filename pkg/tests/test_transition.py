import numpy as np
import pytest

from modelspace import forms
from modelspace import projective as pj
from modelspace import transition as tr


def test_family_invariants():
    fam = tr.blow_up_point(4)
    assert np.allclose(fam.matrix(1.0), np.eye(4))
    for t in (0.5, 0.1, 0.01):
        assert np.allclose(fam.matrix(t) @ fam.inverse(t), np.eye(4))
    fam2 = tr.blow_up_hyperplane(3)
    assert np.allclose(fam2.matrix(0.25), np.diag([1.0, 1.0, 4.0]))


def test_one_d_toy_model():
    for a in (-2.0, 0.5, 3.0):
        for kind in ("rotation", "boost"):
            lim, err = tr.one_d_limit(kind, a)
            assert np.max(np.abs(lim - tr.translation_1d(a))) < 1e-6
    # the conjugated hyperbolic endpoints drift into the parabolic point
    g = tr.scaling_1d(64.0)
    endpoint = g @ np.array([1.0, 1.0])
    assert abs(endpoint[1] / endpoint[0]) < 0.02


def test_rescaled_point_limit_examples():
    fam = tr.blow_up_point(3)
    a = 0.7
    path = tr.PointPath(lambda t: np.array([np.sin(a * t), 0.0, np.cos(a * t)]))
    limit = tr.rescaled_point_limit(path, fam)
    assert limit == pj.ProjPoint([a, 0.0, 1.0])
    # constant path at the fixed point: the affine origin of the chart
    const = tr.PointPath(lambda t: np.array([0.0, 0.0, 1.0]))
    assert tr.rescaled_point_limit(const, fam) == pj.ProjPoint([0, 0, 1.0])
    bad = tr.PointPath(lambda t: np.array([0.5, 0.0, np.sqrt(0.75)]))
    with pytest.raises(ValueError):
        tr.rescaled_point_limit(bad, fam)


def test_sequence_route_agrees():
    rng = np.random.default_rng(0)
    sp = pj.model_space("Ell3")
    fam = tr.transition_family("Ell3", "point")
    for _ in range(5):
        v = rng.standard_normal(4)
        w = rng.standard_normal(4)

        def x(t):
            y = np.array([0.0, 0, 0, 1.0]) + t * v * np.array([1, 1, 1, 0]) + 0.5 * t * t * w
            return y / np.linalg.norm(y)

        path = tr.PointPath(x)
        lim_a = tr.rescaled_point_limit(path, fam)
        lim_b, err = tr.rescaled_point_limit_sequence(path, fam)
        assert lim_a.same_point(lim_b, tol=1e-7)
        assert err < 1e-6


def test_conjugation_preserves_group_law():
    rng = np.random.default_rng(1)
    sp = pj.model_space("dS3")
    fam = tr.transition_family("dS3", "point")
    h1 = forms.random_isometry(sp.form, rng)
    h2 = forms.random_isometry(sp.form, rng)
    t = 0.125
    lhs = tr.conjugate_isometry(h1 @ h2, fam, t)
    rhs = tr.conjugate_isometry(h1, fam, t) @ tr.conjugate_isometry(h2, fam, t)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("name,kind,target", [
    ("Ell3", "point", "IsomEuc"),
    ("Hyp3", "point", "IsomEuc"),
    ("dS3", "point", "IsomMin"),
    ("AdS3", "point", "IsomMin"),
    ("Ell3", "plane", "IsomCoEuc"),
    ("dS3", "plane", "IsomCoEuc"),
    ("Hyp3", "plane", "IsomCoMin"),
    ("AdS3", "plane", "IsomCoMin"),
])
def test_limit_group_patterns(name, kind, target):
    rng = np.random.default_rng(hash((name, kind)) % 2**32)
    space = pj.model_space(name)
    fam = tr.transition_family(name, kind)
    for _ in range(30):
        h = tr.random_isometry_path(space, fam, rng)
        limit, err = tr.conjugate_limit(h, fam)
        assert err < 1e-7
        assert tr.limit_group_membership(limit, target, tol=1e-6)


def test_membership_rejects():
    # a homothety is an isometry of the degenerate form but not of the
    # co-Euclidean geometry
    assert not tr.limit_group_membership(np.diag([1.0, 1, 1, 2.5]), "IsomCoEuc")
    for target in ("IsomEuc", "IsomMin", "IsomCoEuc", "IsomCoMin"):
        assert tr.limit_group_membership(np.eye(4), target)
    bad = np.eye(4)
    bad[3, 1] = 0.3
    assert not tr.limit_group_membership(bad, "IsomEuc")
    assert tr.limit_group_membership(bad, "IsomCoEuc")


def test_anti_isometric_targets_share_limits():
    # the same family degenerates a space and its anti-isometric copy;
    # both limits satisfy the same block pattern
    rng = np.random.default_rng(3)
    ds = pj.model_space("dS3")
    anti = pj.ModelSpace("anti", forms.BilinearForm(-ds.form.matrix), -1)
    fam = tr.transition_family("dS3", "point")
    h = tr.random_isometry_path(anti, fam, rng)  # O(-b) = O(b)
    limit, _ = tr.conjugate_limit(h, fam)
    assert tr.limit_group_membership(limit, "IsomMin", tol=1e-6)


def test_duality_transition_diagrams():
    rng = np.random.default_rng(4)
    for name, kind in [("Ell3", "point"), ("Ell3", "plane"), ("dS3", "point"),
                       ("Hyp3", "plane")]:
        space = pj.model_space(name)
        fam = tr.transition_family(name, kind)
        for _ in range(10):
            if fam.kind == "blow_up_point":
                x0 = np.zeros(4)
                x0[fam.axis] = 1.0
            else:
                while True:
                    y = rng.standard_normal(4)
                    y[fam.axis] = 0.0
                    if space.sign * float(space.form.quad(y)) > 0.1:
                        x0 = y / np.sqrt(abs(float(space.form.quad(y))))
                        break
            v, w = rng.standard_normal((2, 4))

            def x(t, x0=x0, v=v, w=w):
                y = x0 + t * v + 0.5 * t * t * w
                return y / np.sqrt(abs(float(space.form.quad(y))))

            gap = tr.duality_transition_check(tr.PointPath(x), fam, space.form)
            assert gap < 1e-7


def test_dual_family_structure():
    # the compatible dual family of the point blow-up is the plane blow-up
    fam = tr.transition_family("Ell3", "point")
    gd = tr.dual_family(fam, forms.bpq(4, 0))
    expected = tr.transition_family("Ell3", "plane")
    for t in (0.5, 0.125):
        mask = np.abs(expected.matrix(t)) > 0
        ratio = gd(t)[mask] / expected.matrix(t)[mask]
        assert np.max(np.abs(ratio - ratio[0])) < 1e-12
        assert np.max(np.abs(gd(t)[~mask])) < 1e-12
