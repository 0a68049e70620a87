import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modelspace import forms


def test_eval_examples():
    b30 = forms.bpq(3, 0)
    b21 = forms.bpq(2, 1)
    b11 = forms.bpq(1, 1)
    assert forms.evaluate(b30, [1, 0, 0], [0, 1, 0]) == 0.0
    assert forms.evaluate(b21, [0, 0, 1], [0, 0, 1]) == -1.0
    # x1 y1 - x2 y2 = 1*1 - 1*(-1)
    assert forms.evaluate(b11, [1, 1], [1, -1]) == 2.0


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        forms.evaluate(forms.bpq(2, 1), [1.0, 0.0], [0.0, 1.0, 0.0])


def test_classify_examples():
    b21 = forms.bpq(2, 1)
    assert forms.classify_vector(b21, [1, 0, 0]) == "spacelike"
    assert forms.classify_vector(b21, [1, 0, 1]) == "lightlike"
    assert forms.classify_vector(b21, [0.1, 0.1, 1]) == "timelike"
    with pytest.raises(ValueError):
        forms.classify_vector(b21, [0, 0, 0])


def test_classify_scale_invariant_near_cone():
    b21 = forms.bpq(2, 1)
    x = 1e6 * np.array([1.0, 0.0, 1.0])
    assert forms.classify_vector(b21, x) == "lightlike"


def test_restrict_examples():
    b21 = forms.bpq(2, 1)
    assert forms.restrict(b21, [[1, 0, 0], [0, 1, 0]]).signature == (2, 0, 0)
    assert forms.restrict(b21, [[1, 0, 0], [0, 0, 1]]).signature == (1, 1, 0)
    # restriction to a light ray is identically zero
    assert forms.restrict(b21, [[1, 0, 1]]).signature == (0, 0, 1)
    with pytest.raises(ValueError):
        forms.restrict(b21, [[1, 0, 0], [2, 0, 0]])


def test_degenerate_forms_signatures():
    assert forms.co_euclidean_form(3).signature == (3, 0, 1)
    assert forms.co_minkowski_form(3).signature == (2, 1, 1)
    assert forms.affine_chart_form(3).signature == (1, 0, 3)
    assert forms.co_euclidean_form(3).degenerate


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2), st.integers(min_value=0, max_value=10**6))
def test_bilinearity(p, q, seed):
    if p + q < 1:
        return
    rng = np.random.default_rng(seed)
    b = forms.bpq(p, q)
    x, y, z = rng.standard_normal((3, p + q))
    alpha, beta = rng.standard_normal(2)
    lhs = forms.evaluate(b, alpha * x + beta * y, z)
    rhs = alpha * forms.evaluate(b, x, z) + beta * forms.evaluate(b, y, z)
    assert abs(lhs - rhs) < 1e-10 * (1 + abs(lhs))


def test_restricted_plane_normal_forms():
    # random rotated 2-planes in Min^3: the restriction is elliptic,
    # hyperbolic or degenerate and nothing else
    rng = np.random.default_rng(0)
    b21 = forms.bpq(2, 1)
    seen = set()
    for _ in range(200):
        basis = rng.standard_normal((2, 3))
        sig = forms.restrict(b21, basis).signature
        seen.add(sig)
        assert sig in {(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)}
    assert (2, 0, 0) in seen and (1, 1, 0) in seen


def test_signature_congruence_invariance():
    rng = np.random.default_rng(1)
    for sig in [(3, 1, 0), (2, 2, 0), (2, 1, 1), (3, 0, 1)]:
        b = forms.bpq(*sig)
        for _ in range(20):
            m = rng.standard_normal((b.dim, b.dim))
            while abs(np.linalg.det(m)) < 1e-3:
                m = rng.standard_normal((b.dim, b.dim))
            assert forms.BilinearForm(m.T @ b.matrix @ m).signature == sig


def test_random_isometry_preserves_form():
    rng = np.random.default_rng(2)
    for b in (forms.bpq(3, 1), forms.bpq(2, 2), forms.co_euclidean_form(3),
              forms.co_minkowski_form(3)):
        for _ in range(5):
            g = forms.random_isometry(b, rng)
            assert np.max(np.abs(g.T @ b.matrix @ g - b.matrix)) < 1e-10


def test_json_round_trip():
    b = forms.bpq(2, 1)
    again = forms.BilinearForm.from_dict(b.to_dict())
    assert again == b
    assert b.to_dict()["dim"] == 3
