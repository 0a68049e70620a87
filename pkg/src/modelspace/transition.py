"""Conjugacy limits: rescaling families, limits of points and isometries.

A rescaling family g_t stretches the directions transverse to a fixed
point (or fixed hyperplane) by 1/t.  As t -> 0 the images g_t M of a model
space converge to a degenerate model space, and conjugates g_t h g_t^{-1}
of isometries converge to isometries of the limit geometry.

The built-in families land each limit in the canonical coordinates of the
target space.  Where that needs a slot permutation (the blown-up point of
dS^3 must be space-like, the blown-up plane of Hyp^3 sits transverse to a
space-like axis) the permutation is part of the family's matrix.
"""

from __future__ import annotations

import numpy as np

from . import forms
from ._numerics import DEFAULT_SCHEDULE, central_difference, richardson
from .projective import ProjPoint

__all__ = [
    "RescalingFamily",
    "blow_up_point",
    "blow_up_hyperplane",
    "transition_family",
    "dual_family",
    "PointPath",
    "rescaled_point_limit",
    "rescaled_point_limit_sequence",
    "conjugate_isometry",
    "conjugate_limit",
    "limit_group_membership",
    "duality_transition_check",
    "random_isometry_path",
    "stabilizer_isometry",
    "rotation_1d",
    "boost_1d",
    "translation_1d",
    "scaling_1d",
    "one_d_limit",
]


class RescalingFamily:
    """t -> P . diag(...) with 1/t entries; g_1 need not include P.

    ``kind`` is 'blow_up_point' (every slot but ``axis`` stretched) or
    'blow_up_hyperplane' (only ``axis`` stretched).  ``perm`` is an
    optional slot permutation, applied after the diagonal so the limit
    lands in the canonical coordinates of the target space.
    """

    def __init__(self, kind, dim, axis=None, perm=None):
        if kind not in ("blow_up_point", "blow_up_hyperplane"):
            raise ValueError("unknown rescaling kind")
        self.kind = kind
        self.dim = dim
        self.axis = (dim - 1) if axis is None else int(axis) % dim
        self.perm = None if perm is None else np.asarray(perm, dtype=float)

    def diag(self, t):
        d = np.full(self.dim, 1.0 / t)
        if self.kind == "blow_up_point":
            d[self.axis] = 1.0
        else:
            d = np.ones(self.dim)
            d[self.axis] = 1.0 / t
        return d

    def matrix(self, t):
        m = np.diag(self.diag(t))
        return m if self.perm is None else self.perm @ m

    def inverse(self, t):
        m = np.diag(1.0 / self.diag(t))
        return m if self.perm is None else m @ self.perm.T

    def base_condition(self, x0, tol=1e-9):
        """Whether g_t x(t) can converge: x(0) on the fixed locus."""
        x0 = np.asarray(x0, dtype=float)
        scale = np.linalg.norm(x0)
        if self.kind == "blow_up_point":
            off = np.delete(x0, self.axis)
            return np.linalg.norm(off) <= tol * scale
        return abs(x0[self.axis]) <= tol * scale

    def assemble_limit(self, x0, dx0):
        """Limit of g_t x(t) from x(0) and x'(0): fixed-slot coordinates
        stay, stretched slots pick up the first derivative."""
        x0 = np.asarray(x0, dtype=float)
        dx0 = np.asarray(dx0, dtype=float)
        out = dx0.copy()
        if self.kind == "blow_up_point":
            out[self.axis] = x0[self.axis]
        else:
            out = x0.copy()
            out[self.axis] = dx0[self.axis]
        return out if self.perm is None else self.perm @ out


def blow_up_point(dim, axis=None, perm=None):
    return RescalingFamily("blow_up_point", dim, axis=axis, perm=perm)


def blow_up_hyperplane(dim, axis=None, perm=None):
    return RescalingFamily("blow_up_hyperplane", dim, axis=axis, perm=perm)


def _perm_matrix(order):
    d = len(order)
    p = np.zeros((d, d))
    for new, old in enumerate(order):
        p[new, old] = 1.0
    return p


def transition_family(space_name, kind):
    """Canonical family degenerating a 3-dimensional model space.

    kind='point' lands Ell3/Hyp3 in Euc3 and dS3/AdS3 in Min3;
    kind='plane' lands Ell3/dS3 in coEuc3 and Hyp3/AdS3 in coMin3.
    """
    if kind == "point":
        table = {
            "Ell3": blow_up_point(4),
            "Hyp3": blow_up_point(4),
            "AdS3": blow_up_point(4),
            # the blown-up point of dS3 must be space-like: fix e1 and
            # cycle slots so the Min3 chart comes out in slots (1,2,3)
            "dS3": blow_up_point(4, axis=0, perm=_perm_matrix([1, 2, 3, 0])),
        }
    elif kind == "plane":
        table = {
            "Ell3": blow_up_hyperplane(4),
            "dS3": blow_up_hyperplane(4),
            "AdS3": blow_up_hyperplane(4),
            # the blown-up plane of Hyp3 is {x3 = 0}; swap slots 3, 4 so
            # the coMin3 fiber is the last coordinate
            "Hyp3": blow_up_hyperplane(4, axis=2, perm=_perm_matrix([0, 1, 3, 2])),
        }
    else:
        raise ValueError("kind must be 'point' or 'plane'")
    if space_name not in table:
        raise ValueError(f"no canonical {kind} transition from {space_name}")
    return table[space_name]


def dual_family(fam, form):
    """The compatible family on the dual side: b(g_t x, g*_t y) ~ b(x, y).

    Returns the matrix-valued callable t -> G^-1 g_t^-T G, projectively
    rescaled so the largest diagonal entry is 1 at t = 1.
    """
    g = form.matrix
    ginv = np.linalg.inv(g)

    def normalized(t):
        m = ginv @ np.linalg.inv(fam.matrix(t)).T @ g
        scale = np.max(np.abs(m))
        smallest = np.min(np.abs(m[np.abs(m) > 1e-14 * scale]))
        return m / smallest

    return normalized


class PointPath:
    """A differentiable path t -> x(t) in a space's ambient cone.

    ``evaluator`` must be defined in a neighborhood of t = 0 (central
    differences probe both sides); ``derivative`` is optional and, when
    given, used instead of numerical differentiation.
    """

    def __init__(self, evaluator, derivative=None):
        self.evaluator = evaluator
        self.derivative = derivative

    def __call__(self, t):
        return np.asarray(self.evaluator(t), dtype=float)


def rescaled_point_limit(path, fam):
    """lim g_t x(t): zeroth order on the fixed locus, first order across.

    Raises when the base condition x(0) on-the-fixed-locus fails (the
    limit diverges in that case).
    """
    x0 = path(0.0)
    if not fam.base_condition(x0):
        raise ValueError("path violates the base condition; limit diverges")
    if path.derivative is not None:
        dx0 = np.asarray(path.derivative(0.0), dtype=float)
    else:
        dx0 = central_difference(path, 0.0, order=1)
    return ProjPoint(fam.assemble_limit(x0, dx0))


def rescaled_point_limit_sequence(path, fam, schedule=DEFAULT_SCHEDULE):
    """Independent route: extrapolate the normalized images g_t x(t)."""
    ref = None
    seq = []
    for t in schedule:
        v = fam.matrix(t) @ path(t)
        v = v / np.linalg.norm(v)
        if ref is None:
            ref = v
        if np.dot(v, ref) < 0:
            v = -v
        seq.append(v)
    limit, err = richardson(seq, return_error=True)
    return ProjPoint(limit), err


def conjugate_isometry(h, fam, t):
    """g_t h g_t^{-1}, exactly."""
    return fam.matrix(t) @ np.asarray(h, dtype=float) @ fam.inverse(t)


def _matrix_normalize(m, ref=None):
    m = np.asarray(m, dtype=float)
    scale = m[-1, -1]
    if abs(scale) < 1e-8 * np.max(np.abs(m)):
        idx = np.unravel_index(np.argmax(np.abs(m)), m.shape)
        scale = m[idx]
    m = m / scale
    if ref is not None and np.sum(m * ref) < 0:
        m = -m
    return m


def conjugate_limit(h_path, fam, schedule=DEFAULT_SCHEDULE):
    """Extrapolated limit of g_t h(t) g_t^{-1} over the t-schedule.

    ``h_path`` maps t to an isometry of the source; the result is the
    normalized limit matrix and the extrapolation error estimate.
    """
    seq = []
    ref = None
    for t in schedule:
        c = _matrix_normalize(conjugate_isometry(h_path(t), fam, t), ref)
        if ref is None:
            ref = c
        seq.append(c)
    return richardson(seq, return_error=True)


_GROUP_FORMS = {
    "IsomEuc": ("affine", lambda n: forms.bpq(n, 0)),
    "IsomMin": ("affine", lambda n: forms.bpq(n - 1, 1)),
    "IsomCoEuc": ("co", lambda n: forms.bpq(n, 0)),
    "IsomCoMin": ("co", lambda n: forms.bpq(n - 1, 1)),
}


def limit_group_membership(m, target, tol=1e-8):
    """Block-pattern test for the limit isometry groups.

    Affine targets look like [[A, t], [0, 1]] with A in O(n) or O(n-1,1);
    co-space targets look like [[A, 0], [t, 1]].  The representative is
    normalized by its corner entry first (so homotheties fail).
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0] - 1
    if target not in _GROUP_FORMS:
        raise ValueError(f"unknown target group {target}")
    layout, formof = _GROUP_FORMS[target]
    corner = m[n, n]
    if abs(corner) < tol * np.max(np.abs(m)):
        return False
    m = m / corner
    a = m[:n, :n]
    g = formof(n).matrix
    if np.max(np.abs(a.T @ g @ a - g)) > tol:
        return False
    if layout == "affine":
        zero_block = m[n, :n]
    else:
        zero_block = m[:n, n]
    return bool(np.max(np.abs(zero_block)) <= tol)


def duality_transition_check(path, fam, form, schedule=DEFAULT_SCHEDULE):
    """Commutation of rescaled limits with the ambient duality.

    Side A assembles the limit of g_t x(t) from derivatives and dualizes
    it (the dual hyperplane's Euclidean normal is G x).  Side B pushes the
    dual hyperplanes x(t)* through the compatible dual family and
    extrapolates their normals.  Returns the angular gap between the two;
    the commuting-diagram property makes it vanish.
    """
    limit_a = rescaled_point_limit(path, fam)
    side_a = form.matrix @ limit_a.rep
    side_a = side_a / np.linalg.norm(side_a)
    gdual = dual_family(fam, form)
    seq = []
    ref = None
    for t in schedule:
        nu = form.matrix @ path(t)
        w = np.linalg.inv(gdual(t)).T @ nu
        w = w / np.linalg.norm(w)
        if ref is None:
            ref = w
        if np.dot(w, ref) < 0:
            w = -w
        seq.append(w)
    side_b, _ = richardson(seq, return_error=True)
    side_b = side_b / np.linalg.norm(side_b)
    return 1.0 - abs(float(np.dot(side_a, side_b)))


def stabilizer_isometry(form, fam, rng, scale=0.5):
    """A random isometry of ``form`` stabilizing the family's fixed locus.

    For the diagonal forms used here the stabilizer of the fixed point
    and of the fixed hyperplane agree: isometries fixing the axis line.
    """
    d = form.dim
    axis = fam.axis
    rest = [i for i in range(d) if i != axis]
    sub = forms.BilinearForm(form.matrix[np.ix_(rest, rest)])
    a_sub = forms.random_antisymmetric(sub, rng, scale=scale)
    a = np.zeros((d, d))
    a[np.ix_(rest, rest)] = a_sub
    from scipy.linalg import expm

    return expm(a)


def random_isometry_path(space, fam, rng, scale=0.5):
    """h(t) in O(form) with h(0) stabilizing the fixed locus, smooth in t."""
    h0 = stabilizer_isometry(space.form, fam, rng, scale=scale)
    gen = forms.random_antisymmetric(space.form, rng, scale=scale)
    from scipy.linalg import expm

    def h(t):
        return expm(t * gen) @ h0

    return h


# ---------------------------------------------------------------------------
# the 1-dimensional toy model


def rotation_1d(theta):
    """Stabilizer of an elliptic line.  Oriented so that conjugation by
    diag(k, 1) sends R_{a/k} to the translation T_a as k grows."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def boost_1d(phi):
    """Stabilizer of a hyperbolic line (an O(1,1) boost)."""
    c, s = np.cosh(phi), np.sinh(phi)
    return np.array([[c, s], [s, c]])


def translation_1d(a):
    """Stabilizer of the parabolic line: the limit shape of both."""
    return np.array([[1.0, a], [0.0, 1.0]])


def scaling_1d(k):
    return np.array([[float(k), 0.0], [0.0, 1.0]])


def one_d_limit(kind, a, ks=None):
    """Extrapolated limit of g_k X_{a/k} g_k^{-1} for X = R or S."""
    if ks is None:
        ks = 2.0 ** np.arange(3, 13)
    make = rotation_1d if kind == "rotation" else boost_1d
    seq = []
    for k in ks:
        g = scaling_1d(k)
        conj = g @ make(a / k) @ np.linalg.inv(g)
        seq.append(conj)
    return richardson(seq, ratio=2.0, return_error=True)
