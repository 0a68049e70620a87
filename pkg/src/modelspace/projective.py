"""Projective points, model spaces, lines, the absolute and distances.

A model space is the projective quotient of a pseudo-sphere b^{-1}(+1) or
b^{-1}(-1).  Distances between points on a common line are computed two
ways: through the cross-ratio with the line's intersection with the
absolute (the projective route), and through arccos/arccosh inversion of
the ambient form evaluated on pseudo-sphere lifts (the closed-form route).
Both are exposed; they must agree and the tests hold them to that.
"""

from __future__ import annotations

import numpy as np

from . import forms
from .forms import BilinearForm, bpq, co_euclidean_form, co_minkowski_form, affine_chart_form

__all__ = [
    "ProjPoint",
    "ModelSpace",
    "ProjLine",
    "AbsolutePair",
    "model_space",
    "line_through",
    "classify_line",
    "absolute_points",
    "cross_ratio",
    "projective_distance",
    "projective_distance_batch",
    "closed_form_distance",
    "pseudo_distance_lift",
    "pseudo_distance_quadrature",
    "geodesic_on_pseudosphere",
]

PARALLEL_ANGLE_TOL = 1e-10
DISC_RTOL = 1e-9


def _normalize_rep(vec):
    vec = np.asarray(vec, dtype=float)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("projective point needs a nonzero representative")
    vec = vec / norm
    nz = np.nonzero(np.abs(vec) > 1e-14)[0]
    if vec[nz[-1]] < 0:
        vec = -vec
    return vec


class ProjPoint:
    """A point of RP^n: a homogeneous representative, normalized.

    The representative has unit Euclidean norm and positive last nonzero
    coordinate.  Equality is projective, up to angular tolerance 1e-10.
    """

    def __init__(self, rep):
        self.rep = _normalize_rep(rep)
        self.dim = self.rep.shape[0]

    def same_point(self, other, tol=PARALLEL_ANGLE_TOL):
        cross = 1.0 - abs(float(np.dot(self.rep, other.rep)))
        return cross <= tol

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.same_point(other)

    def __repr__(self):
        coords = ":".join(f"{c:.6g}" for c in self.rep)
        return f"[{coords}]"

    def to_dict(self):
        return {"rep": self.rep.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["rep"], dtype=float))


class ModelSpace:
    """A bilinear form together with a sign selecting b^{-1}(+1) or b^{-1}(-1)."""

    def __init__(self, name, form, sign, degenerate=None, chart_form=None):
        self.name = name
        self.form = form
        self.sign = int(sign)
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        self.degenerate = form.degenerate if degenerate is None else degenerate
        # For Euc/Min the rank-one defining form carries no metric; the chart
        # metric on {x_{n+1}=1} is recorded separately.
        self.chart_form = chart_form
        self.dim = form.dim  # ambient dimension n+1

    @property
    def n(self):
        return self.dim - 1

    def __repr__(self):
        return f"ModelSpace({self.name}, dim={self.n})"

    def contains(self, point):
        """Membership: some representative x has b(x, x) = sign.

        Rescaling the representative fixes the magnitude, so this amounts
        to sign * b(rep, rep) > 0 (for degenerate forms as well).
        """
        value = float(self.form(point.rep, point.rep))
        return self.sign * value > 0

    def membership_value(self, point):
        return self.sign * float(self.form(point.rep, point.rep))

    def lift(self, point, positive_axis=None):
        """Scale a representative onto the pseudo-sphere b(x,x) = sign.

        ``positive_axis`` optionally picks the lift with positive coordinate
        along that axis (e.g. the future sheet of a hyperboloid).
        """
        x = point.rep if isinstance(point, ProjPoint) else _normalize_rep(point)
        q = float(self.form(x, x))
        if self.sign * q <= 0:
            raise ValueError(f"point {x} is not in {self.name}")
        x = x / np.sqrt(abs(q))
        if positive_axis is not None and x[positive_axis] < 0:
            x = -x
        return x

    def random_points(self, rng, count):
        """Random points of the space, uniform-ish on the pseudo-sphere."""
        pts = []
        while len(pts) < count:
            v = rng.standard_normal(self.dim)
            q = float(self.form(v, v))
            if self.sign * q > 1e-6 * float(np.dot(v, v)):
                pts.append(v / np.sqrt(abs(q)))
        return np.array(pts)

    def sample_points(self, rng, count, radius=1.2):
        """Well-conditioned pseudo-sphere points with bounded coordinates.

        Noncompact directions (hyperboloid sheets, degenerate fibers) are
        sampled within ``radius``, which keeps finite-difference work on
        the locus accurate.
        """
        p, q, z = self.form.signature
        pts = np.empty((count, self.dim))
        for i in range(count):
            if self.degenerate:
                base_dim = self.dim - 1
                sub = ModelSpace("base", BilinearForm(self.form.matrix[:base_dim, :base_dim]), self.sign)
                base = sub.sample_points(rng, 1, radius)[0]
                pts[i] = np.append(base, rng.uniform(-radius, radius))
            elif (self.sign > 0 and q == 0) or (self.sign < 0 and p == 0):
                v = rng.standard_normal(self.dim)
                pts[i] = v / np.sqrt(abs(float(self.form.quad(v))))
            else:
                # split into the positive and negative eigenspaces of the
                # diagonal form and put cosh on the side matching the sign
                diag = np.diag(self.form.matrix)
                pos, neg = diag > 0, diag < 0
                rho = rng.uniform(0, radius)
                u = rng.standard_normal(int(pos.sum()))
                u /= np.linalg.norm(u)
                w = rng.standard_normal(int(neg.sum()))
                w /= np.linalg.norm(w)
                v = np.zeros(self.dim)
                if self.sign > 0:
                    v[pos], v[neg] = np.cosh(rho) * u, np.sinh(rho) * w
                else:
                    v[pos], v[neg] = np.sinh(rho) * u, np.cosh(rho) * w
                pts[i] = v
        return pts


def model_space(name, n=None):
    """Named model spaces.  ``name`` like 'Ell2', 'Hyp3', 'dS2', 'AdS3',
    'coEuc3', 'coMin3', 'Euc3', 'Min3'; or pass the base name plus ``n``."""
    base = name
    digits = ""
    while base and base[-1].isdigit():
        digits = base[-1] + digits
        base = base[:-1]
    if digits:
        n = int(digits)
    if n is None:
        raise ValueError("dimension missing: use e.g. 'Ell2' or model_space('Ell', n=2)")
    table = {
        "Ell": lambda: ModelSpace("Ell%d" % n, bpq(n + 1, 0), +1),
        "Hyp": lambda: ModelSpace("Hyp%d" % n, bpq(n, 1), -1),
        "dS": lambda: ModelSpace("dS%d" % n, bpq(n, 1), +1),
        "AdS": lambda: ModelSpace("AdS%d" % n, bpq(n - 1, 2), -1),
        "coEuc": lambda: ModelSpace("coEuc%d" % n, co_euclidean_form(n), +1),
        "coMin": lambda: ModelSpace("coMin%d" % n, co_minkowski_form(n), -1),
        "Euc": lambda: ModelSpace("Euc%d" % n, affine_chart_form(n), +1,
                                  degenerate=False, chart_form=bpq(n, 0)),
        "Min": lambda: ModelSpace("Min%d" % n, affine_chart_form(n), +1,
                                  degenerate=False, chart_form=bpq(n - 1, 1)),
    }
    if base not in table:
        raise ValueError(f"unknown model space '{base}'")
    return table[base]()


class ProjLine:
    """A projective line: the span of two independent ambient vectors.

    The stored generators are orthonormalized (Euclidean) for determinism.
    """

    def __init__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        basis = _orthonormalize(u, v)
        if basis is None:
            raise ValueError("line generators are dependent")
        self.span = basis

    @property
    def u(self):
        return self.span[0]

    @property
    def v(self):
        return self.span[1]

    def coordinates_of(self, x):
        """Homogeneous coordinates [alpha:beta] of x = alpha*u + beta*v."""
        x = np.asarray(x, dtype=float)
        coeff, res, _, _ = np.linalg.lstsq(self.span.T, x, rcond=None)
        residual = np.linalg.norm(self.span.T @ coeff - x)
        if residual > 1e-8 * max(1.0, np.linalg.norm(x)):
            raise ValueError("point does not lie on the line")
        return coeff

    def to_dict(self):
        return {"span": self.span.tolist()}

    @classmethod
    def from_dict(cls, data):
        span = np.asarray(data["span"], dtype=float)
        return cls(span[0], span[1])


def _orthonormalize(u, v):
    nu = np.linalg.norm(u)
    if nu == 0:
        return None
    e1 = u / nu
    w = v - np.dot(v, e1) * e1
    nw = np.linalg.norm(w)
    if nw <= 1e-12 * max(1.0, np.linalg.norm(v)):
        return None
    e2 = w / nw
    return np.array([_normalize_rep(e1), _sign_fix(e2)])


def _sign_fix(vec):
    nz = np.nonzero(np.abs(vec) > 1e-14)[0]
    return -vec if vec[nz[-1]] < 0 else vec


def line_through(x, y):
    """The projective line through two distinct points."""
    if x.same_point(y):
        raise ValueError("coincident points do not span a line")
    return ProjLine(x.rep, y.rep)


def classify_line(space, line):
    """'elliptic', 'parabolic' or 'hyperbolic' against the space's absolute.

    Equivalently: the restricted form on the span is definite, degenerate,
    or of signature (1,1).
    """
    restriction = forms.restrict(space.form, line.span)
    p, q, z = restriction.signature
    if z >= 1:
        return "parabolic"
    if p == 1 and q == 1:
        return "hyperbolic"
    return "elliptic"


class AbsolutePair:
    """The two intersection points of a line with the absolute.

    Roots are homogeneous pairs [alpha:beta] over C for the basis stored in
    the line; they are complex conjugate for elliptic lines, real distinct
    for hyperbolic ones, and coincident (multiplicity two) for parabolic
    ones.  ``degenerate`` flags a line contained in the absolute.
    """

    def __init__(self, roots, coincident, degenerate=False):
        self.roots = np.asarray(roots, dtype=complex)
        self.coincident = bool(coincident)
        self.degenerate = bool(degenerate)


def absolute_points(space, line):
    """Solve b(alpha*u + beta*v, alpha*u + beta*v) = 0 on the line."""
    b = space.form
    u, v = line.u, line.v
    a = float(b(u, u))
    h = float(b(u, v))
    c = float(b(v, v))
    scale = max(abs(a), abs(h), abs(c))
    if scale == 0.0:
        return AbsolutePair(np.array([[1, 0], [0, 1]]), coincident=False, degenerate=True)
    disc = complex(h * h - a * c)
    tau = DISC_RTOL * scale
    coincident = abs(disc) <= tau * tau
    sq = np.sqrt(disc)
    if max(abs(a), abs(c)) <= 1e-13 * abs(h):
        # both basis vectors isotropic: the roots are the basis directions
        return AbsolutePair(np.array([[1, 0], [0, 1]]), coincident=False)
    if abs(a) >= abs(c):
        # alpha/beta = (-h +- sqrt(disc)) / a
        roots = np.array([[-h + sq, a], [-h - sq, a]], dtype=complex)
    else:
        # beta/alpha = (-h -+ sqrt(disc)) / c
        roots = np.array([[c, -h - sq], [c, -h + sq]], dtype=complex)
    roots = np.array([r / np.linalg.norm(r) for r in roots])
    return AbsolutePair(roots, coincident=coincident)


def _as_hom_pair(z):
    """A point of CP^1 as a homogeneous 2-vector; accepts inf and pairs."""
    if isinstance(z, (list, tuple, np.ndarray)) and np.shape(z) == (2,):
        return np.asarray(z, dtype=complex)
    if z == np.inf:
        return np.array([1.0, 0.0], dtype=complex)
    return np.array([complex(z), 1.0], dtype=complex)


def _det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def cross_ratio(x, y, q, p):
    """Cross-ratio [x, y, q, p] on CP^1.

    Defined by the unique homography sending (x, y, q) to (inf, 0, 1);
    the value is then the image of p.  Accepts complex numbers, ``np.inf``
    or homogeneous 2-vectors.  The patterns p = x, p = y, p = q give
    inf, 0, 1 respectively; coincidences among x, y, q are an error.
    """
    xh, yh, qh, ph = (_as_hom_pair(t) for t in (x, y, q, p))
    for a, b_ in ((xh, yh), (xh, qh), (yh, qh)):
        if abs(_det2(a, b_)) <= 1e-14 * np.linalg.norm(a) * np.linalg.norm(b_):
            raise ValueError("cross-ratio undefined: coincidence among x, y, q")
    num = _det2(xh, qh) * _det2(yh, ph)
    den = _det2(yh, qh) * _det2(xh, ph)
    if den == 0:
        return np.inf
    return num / den


def projective_distance(space, x, y, return_line_type=False):
    """Distance |1/2 ln[x, y, I, J]| along the line through x and y.

    I, J are the line's absolute points and ln is the principal branch.
    Parabolic lines give 0.  On elliptic lines the value lies in
    [0, pi/2]; on hyperbolic lines with both points in one component it
    is the arccosh-type distance of same-branch lifts.
    """
    if not space.contains(x):
        raise ValueError(f"first point is not in {space.name}")
    if not space.contains(y):
        raise ValueError(f"second point is not in {space.name}")
    if x.same_point(y):
        line_type = None
        return (0.0, line_type) if return_line_type else 0.0
    line = line_through(x, y)
    kind = classify_line(space, line)
    if kind == "parabolic":
        return (0.0, kind) if return_line_type else 0.0
    absolute = absolute_points(space, line)
    xc = line.coordinates_of(x.rep).astype(complex)
    yc = line.coordinates_of(y.rep).astype(complex)
    r = cross_ratio(xc, yc, absolute.roots[0], absolute.roots[1])
    if r == np.inf or r == 0:
        raise ValueError("point lies on the absolute")
    d = abs(0.5 * np.log(r))
    return (d, kind) if return_line_type else d


def projective_distance_batch(space, X, Y):
    """Vectorized cross-ratio distance for stacks of lifted representatives.

    X, Y: arrays (N, d) of pseudo-sphere points (not necessarily normalized
    projectively).  Returns (distances, kinds) with kinds in
    {'elliptic', 'parabolic', 'hyperbolic'}.  Straddling pairs on
    hyperbolic lines get the modulus of the complex logarithm, as the
    cross-ratio formula prescribes.
    """
    b = space.form.matrix
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    a = np.einsum("ni,ij,nj->n", X, b, X)
    h = np.einsum("ni,ij,nj->n", X, b, Y)
    c = np.einsum("ni,ij,nj->n", Y, b, Y)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(h)), np.abs(c))
    disc = h * h - a * c
    tau = DISC_RTOL * scale
    parabolic = np.abs(disc) <= tau * tau
    sq = np.sqrt(disc.astype(complex))
    # Roots of a*t^2 + 2h*t + c = 0 in t = alpha/beta for x = alpha*X + beta*Y
    # written in the (X, Y) basis directly: x has coords (1, 0), y has (0, 1).
    with np.errstate(divide="ignore", invalid="ignore"):
        rootI = np.stack([-h + sq, a.astype(complex)], axis=-1)
        rootJ = np.stack([-h - sq, a.astype(complex)], axis=-1)
        swap = np.abs(a) < np.abs(c)
        rootI[swap] = np.stack([c.astype(complex)[swap], (-h - sq)[swap]], axis=-1)
        rootJ[swap] = np.stack([c.astype(complex)[swap], (-h + sq)[swap]], axis=-1)
        xh = np.zeros_like(rootI)
        xh[:, 0] = 1.0
        yh = np.zeros_like(rootI)
        yh[:, 1] = 1.0
        num = _det2_batch(xh, rootI) * _det2_batch(yh, rootJ)
        den = _det2_batch(yh, rootI) * _det2_batch(xh, rootJ)
        r = num / den
        d = np.abs(0.5 * np.log(r))
    d[parabolic] = 0.0
    kinds = np.where(parabolic, "parabolic", np.where(disc > 0, "hyperbolic", "elliptic"))
    return d, kinds


def _det2_batch(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def closed_form_distance(space, X, Y):
    """arccos / arccosh inversion of b on pseudo-sphere lifts (vectorized).

    Case table: definite restriction with sign +1 (or -1) gives
    cos d = |b(x,y)|; signature (1,1) gives cosh d = |b(x,y)| for lift
    pairs on a common branch, which exist iff |b(x,y)| >= 1.  Straddling
    hyperbolic pairs and degenerate (parabolic) lines give NaN and 0.
    """
    b = space.form.matrix
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    a = np.einsum("ni,ij,nj->n", X, b, X)
    h = np.einsum("ni,ij,nj->n", X, b, Y)
    c = np.einsum("ni,ij,nj->n", Y, b, Y)
    disc = h * h - a * c
    scale = np.maximum(np.maximum(np.abs(a), np.abs(h)), np.abs(c))
    out = np.full(X.shape[0], np.nan)
    parabolic = np.abs(disc) <= (DISC_RTOL * scale) ** 2
    elliptic = disc < 0
    hyperbolic = disc > 0
    out[parabolic] = 0.0
    ch = np.abs(h)
    el = elliptic & ~parabolic
    out[el] = np.arccos(np.clip(ch[el], 0.0, 1.0))
    hy = hyperbolic & ~parabolic
    same_branch = hy & (ch >= 1.0 - 1e-12)
    out[same_branch] = np.arccosh(np.maximum(ch[same_branch], 1.0))
    return out


def pseudo_distance_lift(space, x_lift, y_lift, branch_tol=1e-9):
    """Pseudo-distance between two pseudo-sphere lifts (scalar).

    Inverts b(x,y) through the circle/hyperbola case table.  On a
    hyperbola-type geodesic the lifts must sit on a common branch:
    b(x,y) >= 1 for b^{-1}(+1), b(x,y) <= -1 for b^{-1}(-1); otherwise
    this raises, and the caller must flip a lift.
    """
    b = space.form
    x = np.asarray(x_lift, dtype=float)
    y = np.asarray(y_lift, dtype=float)
    for v in (x, y):
        if abs(float(b(v, v)) - space.sign) > 1e-8:
            raise ValueError("lift is not on the pseudo-sphere")
    c = float(b(x, y))
    if np.allclose(x, y):
        return 0.0
    restriction = forms.restrict(b, np.array([x, y]))
    p, q, z = restriction.signature
    if z >= 1:
        # lightlike geodesic
        return 0.0
    if (p, q) == (1, 1):
        # hyperbola: b.3 needs b(x,y) >= 1, b.4 needs b(x,y) <= -1
        if space.sign > 0 and c < 1.0 - branch_tol:
            raise ValueError("lifts lie on different hyperbola branches")
        if space.sign < 0 and c > -1.0 + branch_tol:
            raise ValueError("lifts lie on different hyperbola branches")
        return float(np.arccosh(max(abs(c), 1.0)))
    # circle: b.1 has cos(d) = b(x,y), b.2 has cos(d) = -b(x,y)
    return float(np.arccos(np.clip(space.sign * c, -1.0, 1.0)))


def geodesic_on_pseudosphere(space, x_lift, y_lift):
    """Parametrized geodesic arc from x to y on the pseudo-sphere.

    Returns (gamma, T) with gamma(t) the arc and T the parameter of y, so
    that gamma(0) = x, gamma(T) = y.  Circle case: cos/sin combination;
    hyperbola case: cosh/sinh (same branch required).
    """
    b = space.form
    eps = space.sign
    x = np.asarray(x_lift, dtype=float)
    y = np.asarray(y_lift, dtype=float)
    w = y - (float(b(x, y)) / eps) * x
    q = float(b(w, w))
    if abs(q) < 1e-14 * float(np.dot(w, w)):
        raise ValueError("lightlike or degenerate direction")
    e2 = w / np.sqrt(abs(q))
    eta = 1.0 if q > 0 else -1.0
    cx = float(b(x, y)) / eps
    cy = float(b(e2, y)) / eta
    if eta == eps:
        # definite restriction, circle: y = cos(T) x + sin(T) e2
        T = float(np.arctan2(cy, cx))

        def gamma(t):
            t = np.asarray(t, dtype=float)
            return np.cos(t)[..., None] * x + np.sin(t)[..., None] * e2
    else:
        # signature (1,1), hyperbola: y = cosh(T) x + sinh(T) e2
        if cx < 1.0 - 1e-9:
            raise ValueError("lifts lie on different hyperbola branches")
        T = float(np.arcsinh(cy))

        def gamma(t):
            t = np.asarray(t, dtype=float)
            return np.cosh(t)[..., None] * x + np.sinh(t)[..., None] * e2
    return gamma, T


def pseudo_distance_quadrature(space, x_lift, y_lift, order=64):
    """Arc length of the connecting geodesic by Gauss-Legendre quadrature.

    Independent check of the arccos/arccosh inversion: integrates
    sqrt(|b(gamma', gamma')|) along the parametrized arc.
    """
    gamma, T = geodesic_on_pseudosphere(space, x_lift, y_lift)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    t = 0.5 * T * (nodes + 1.0)
    h = 1e-6
    dgamma = (gamma(t + h) - gamma(t - h)) / (2 * h)
    speeds = np.sqrt(np.abs(np.einsum("ti,ij,tj->t", dgamma, space.form.matrix, dgamma)))
    return float(abs(0.5 * T) * np.dot(weights, speeds))
