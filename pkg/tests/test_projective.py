import numpy as np
import pytest

from modelspace import forms
from modelspace import projective as pj


def test_point_normalization_and_equality():
    p = pj.ProjPoint([2.0, 0.0, -2.0])
    assert abs(np.linalg.norm(p.rep) - 1.0) < 1e-14
    assert p.rep[-1] > 0
    assert p == pj.ProjPoint([-1.0, 0.0, 1.0])
    assert p != pj.ProjPoint([1.0, 0.0, 1.0])


def test_named_spaces():
    assert pj.model_space("Ell2").form.signature == (3, 0, 0)
    assert pj.model_space("Hyp3").sign == -1
    assert pj.model_space("AdS3").form.signature == (2, 2, 0)
    assert pj.model_space("coEuc3").degenerate
    assert not pj.model_space("Euc3").degenerate
    with pytest.raises(ValueError):
        pj.model_space("Sol3")


def test_membership():
    hyp2 = pj.model_space("Hyp2")
    assert hyp2.contains(pj.ProjPoint([0, 0, 1]))
    assert not hyp2.contains(pj.ProjPoint([1, 0, 0]))
    comin = pj.model_space("coMin3")
    assert comin.contains(pj.ProjPoint([0, 0, 1, 0.3]))
    assert not comin.contains(pj.ProjPoint([1, 0, 0, 0.3]))


def test_line_through_and_errors():
    x, y = pj.ProjPoint([1, 0, 0]), pj.ProjPoint([0, 1, 0])
    line = pj.line_through(x, y)
    assert np.allclose(line.span @ np.array([0.0, 0.0, 1.0]), 0.0)
    with pytest.raises(ValueError):
        pj.line_through(x, pj.ProjPoint([2, 0, 0]))


def test_classify_line_examples():
    ds2 = pj.model_space("dS2")
    assert pj.classify_line(ds2, pj.ProjLine([1, 0, 0], [0, 1, 0])) == "elliptic"
    hyp2 = pj.model_space("Hyp2")
    assert pj.classify_line(hyp2, pj.ProjLine([1, 0, 0], [0, 0, 1])) == "hyperbolic"
    coe = pj.model_space("coEuc3")
    vertex_line = pj.ProjLine([1, 0, 0, 0], [0, 0, 0, 1.0])
    assert pj.classify_line(coe, vertex_line) == "parabolic"


def test_absolute_points_cases():
    ell2 = pj.model_space("Ell2")
    line = pj.ProjLine([1, 0, 0], [0, 1, 0])
    absolute = pj.absolute_points(ell2, line)
    # the classical conjugate pair [i:1], [-i:1]
    r = absolute.roots
    ratios = r[:, 0] / r[:, 1]
    assert sorted(np.round(ratios.imag, 9)) == [-np.sqrt(2) / 2 * 0 - 1, 1] or \
        np.allclose(sorted(ratios.imag), [-1, 1])
    assert np.allclose(ratios.real, 0)
    hyp = pj.model_space("dS2")
    line2 = pj.ProjLine([1, 0, 0], [0, 0, 1])
    ab2 = pj.absolute_points(hyp, line2)
    ratios2 = ab2.roots[:, 0] / ab2.roots[:, 1]
    assert np.allclose(np.sort(ratios2.real), [-1, 1]) and np.allclose(ratios2.imag, 0)
    assert not ab2.coincident
    # parabolic: double root
    coe = pj.model_space("coEuc3")
    ab3 = pj.absolute_points(coe, pj.ProjLine([1, 0, 0, 0], [0, 0, 0, 1.0]))
    assert ab3.coincident


def test_cross_ratio_normalization():
    assert pj.cross_ratio(np.inf, 0, 1, 2.5) == pytest.approx(2.5)
    assert pj.cross_ratio(2, 0, 1, 3) == pytest.approx(-3)
    assert pj.cross_ratio(2, 0, 1, 1) == pytest.approx(1)
    assert pj.cross_ratio(2, 0, 1, 0) == pytest.approx(0)
    assert pj.cross_ratio(2, 0, 1, 2) == np.inf
    with pytest.raises(ValueError):
        pj.cross_ratio(1, 1, 2, 3)


def test_projective_distance_examples():
    ell2 = pj.model_space("Ell2")
    assert pj.projective_distance(ell2, pj.ProjPoint([1, 0, 0]), pj.ProjPoint([0, 1, 0])) \
        == pytest.approx(np.pi / 2, abs=1e-12)
    assert pj.projective_distance(ell2, pj.ProjPoint([1, 0, 0]), pj.ProjPoint([1, 1, 0])) \
        == pytest.approx(np.pi / 4, abs=1e-12)
    hyp2 = pj.model_space("Hyp2")
    d = pj.projective_distance(
        hyp2, pj.ProjPoint([0, 0, 1]), pj.ProjPoint([0, np.sinh(1), np.cosh(1)])
    )
    assert d == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        pj.projective_distance(hyp2, pj.ProjPoint([1, 0, 0]), pj.ProjPoint([0, 0, 1]))


def test_distance_symmetric_vanishing_and_invariant():
    rng = np.random.default_rng(3)
    for name in ("Ell2", "Hyp2", "dS2", "AdS3"):
        space = pj.model_space(name)
        X = space.random_points(rng, 64)
        Y = space.random_points(rng, 64)
        d_xy, _ = pj.projective_distance_batch(space, X, Y)
        d_yx, _ = pj.projective_distance_batch(space, Y, X)
        assert np.max(np.abs(d_xy - d_yx)) < 1e-9
        d_xx, _ = pj.projective_distance_batch(space, X, X)
        assert np.max(np.abs(d_xx)) < 1e-9
        g = forms.random_isometry(space.form, rng)
        d_g, _ = pj.projective_distance_batch(space, X @ g.T, Y @ g.T)
        assert np.max(np.abs(d_g - d_xy)) < 1e-9


def test_elliptic_log_purely_imaginary_hyperbolic_positive():
    rng = np.random.default_rng(4)
    ell = pj.model_space("Ell2")
    X = ell.random_points(rng, 200)
    Y = ell.random_points(rng, 200)
    b = ell.form.matrix
    a = np.einsum("ni,ij,nj->n", X, b, X)
    h = np.einsum("ni,ij,nj->n", X, b, Y)
    c = np.einsum("ni,ij,nj->n", Y, b, Y)
    disc = h * h - a * c
    assert np.all(disc < 0)  # all

    # cross-ratio on elliptic lines sits on the unit circle
    d, kinds = pj.projective_distance_batch(ell, X, Y)
    assert set(kinds) == {"elliptic"}
    hyp = pj.model_space("Hyp2")
    Xh = hyp.random_points(rng, 200)
    Yh = hyp.random_points(rng, 200)
    # same-sheet lifts: flip so b(x,y) <= -1
    s = np.sign(np.einsum("ni,ij,nj->n", Xh, hyp.form.matrix, Yh))
    Yh = -Yh * s[:, None]
    dh, kindsh = pj.projective_distance_batch(hyp, Xh, Yh)
    closed = pj.closed_form_distance(hyp, Xh, Yh)
    assert np.max(np.abs(dh - closed)) < 1e-9


def test_log_cross_ratio_imaginary_and_real():
    # on elliptic lines ln[x,y,I,J] is purely imaginary; on hyperbolic
    # lines with same-branch lifts the cross-ratio is real positive
    rng = np.random.default_rng(11)
    ell = pj.model_space("Ell2")
    hyp = pj.model_space("Hyp2")
    for _ in range(50):
        x, y = ell.random_points(rng, 2)
        line = pj.ProjLine(x, y)
        roots = pj.absolute_points(ell, line).roots
        xc = line.coordinates_of(x).astype(complex)
        yc = line.coordinates_of(y).astype(complex)
        r = pj.cross_ratio(xc, yc, roots[0], roots[1])
        assert abs(np.log(r).real) < 1e-9
    for _ in range(50):
        x, y = hyp.random_points(rng, 2)
        if float(hyp.form(x, y)) > 0:
            y = -y
        line = pj.ProjLine(x, y)
        roots = pj.absolute_points(hyp, line).roots
        xc = line.coordinates_of(x).astype(complex)
        yc = line.coordinates_of(y).astype(complex)
        r = pj.cross_ratio(xc, yc, roots[0], roots[1])
        assert abs(r.imag) < 1e-9 * abs(r)
        assert r.real > 0


def test_classification_matches_root_structure():
    rng = np.random.default_rng(5)
    for name in ("Ell2", "Hyp2", "dS2", "AdS3"):
        space = pj.model_space(name)
        X = space.random_points(rng, 10_000)
        Y = space.random_points(rng, 10_000)
        b = space.form.matrix
        a = np.einsum("ni,ij,nj->n", X, b, X)
        h = np.einsum("ni,ij,nj->n", X, b, Y)
        c = np.einsum("ni,ij,nj->n", Y, b, Y)
        disc = h * h - a * c
        _, kinds = pj.projective_distance_batch(space, X, Y)
        assert np.all((kinds == "hyperbolic") == (disc > 1e-12 * np.maximum(1, np.abs(disc))))


def test_anti_isometry_distances_agree():
    rng = np.random.default_rng(6)
    plus = pj.ModelSpace("plus", forms.bpq(2, 1), +1)
    minus = pj.ModelSpace("minus", forms.BilinearForm(-forms.bpq(2, 1).matrix), -1)
    X = plus.random_points(rng, 300)
    Y = plus.random_points(rng, 300)
    d1, _ = pj.projective_distance_batch(plus, X, Y)
    d2, _ = pj.projective_distance_batch(minus, X, Y)
    assert np.max(np.abs(d1 - d2)) < 1e-10


def test_json_records_round_trip():
    p = pj.ProjPoint([0.3, -0.4, 1.0])
    assert pj.ProjPoint.from_dict(p.to_dict()) == p
    line = pj.ProjLine([1, 0, 0], [0, 1, 1])
    again = pj.ProjLine.from_dict(line.to_dict())
    assert np.max(np.abs(again.span - line.span)) < 1e-14


def test_pseudo_distance_lift_cases():
    ell2 = pj.model_space("Ell2")
    # quarter turn on a circle geodesic
    assert pj.pseudo_distance_lift(ell2, [1, 0, 0], [0, 1, 0]) == pytest.approx(np.pi / 2)
    hyp2 = pj.model_space("Hyp2")
    x, y = np.array([0, 0, 1.0]), np.array([0, np.sinh(2), np.cosh(2)])
    assert pj.pseudo_distance_lift(hyp2, x, y) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        pj.pseudo_distance_lift(hyp2, x, -y)  # opposite sheet


def test_quadrature_agrees_with_inversion():
    rng = np.random.default_rng(7)
    for name in ("Ell2", "Hyp2", "dS2"):
        space = pj.model_space(name)
        X = space.random_points(rng, 20)
        Y = space.random_points(rng, 20)
        for x, y in zip(X, Y):
            c = float(space.form(x, y))
            if name == "Hyp2" and c > 0:
                y, c = -y, -c
            if name == "dS2":
                # keep circle-type pairs and same-branch hyperbola pairs
                if abs(c) < 1.0 and forms.restrict(space.form, np.array([x, y])).signature == (1, 1, 0):
                    continue
                if c < -1.0:
                    y = -y
            d1 = pj.pseudo_distance_lift(space, x, y)
            d2 = pj.pseudo_distance_quadrature(space, x, y)
            assert abs(d1 - d2) < 1e-8
