"""Connections and volume forms on pseudo-spheres and their degenerate limits.

Every space here is a level set b(x, x) = +-1 in R^4 with the position
vector as transverse direction N_x = x.  One projection formula covers the
nondegenerate Levi-Civita connections and the degenerate co-Euclidean and
co-Minkowski connections alike:

    nabla_v w (x) = Dw(v) - (b(x, Dw(v)) / b(x, x)) x,

where D is componentwise differentiation.  For nondegenerate b this is the
tangential part of the ambient derivative; for the degenerate forms it
removes the N-component in the splitting T_x = T_x(locus) + <N>, which is
exactly the unique symmetric connection compatible with the degenerate
metric that preserves space-like planes and the vertical field T.

Vector fields are ambient callables; tangency is enforced by projection at
evaluation points on the locus.
"""

from __future__ import annotations

import logging

import numpy as np

from ._numerics import DEFAULT_SCHEDULE, directional_derivative, richardson

logger = logging.getLogger(__name__)

__all__ = [
    "tangent_project",
    "project_to_locus",
    "VectorField",
    "random_tangent_field",
    "plane_tangent_field",
    "ambient_derivative",
    "ConnectionEval",
    "levi_civita",
    "co_connection",
    "geodesic_residual",
    "VolumeFormEval",
    "volume_form",
    "symmetry_residual",
    "metric_compatibility_residual",
    "t_parallel_residual",
    "plane_preservation_residual",
    "parallel_volume_residual",
    "parallel_transport",
    "holonomy_angle",
    "connection_transition_check",
    "volume_transition_check",
]

TANGENCY_WARN = 1e-8


def tangent_project(space, x, v):
    """Remove the N_x = x component of v, as measured by the space's form."""
    b = space.form
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    q = float(b.quad(x))
    return v - (float(b(x, v)) / q) * x


def project_to_locus(space, y):
    """Rescale y onto the pseudo-sphere b(y, y) = sign."""
    y = np.asarray(y, dtype=float)
    q = float(space.form.quad(y))
    if space.sign * q <= 0:
        raise ValueError(f"point cannot be scaled onto {space.name}")
    return y / np.sqrt(abs(q))


class VectorField:
    """An ambient callable x -> R^4, tangent to the space's locus.

    Evaluation projects out the transverse component; a warning is stored
    when the correction at an on-locus point exceeds 1e-8 (the raw field
    was not really tangent).
    """

    def __init__(self, space, fn, name=None, project=True, warn=True):
        self.space = space
        self.fn = fn
        self.name = name or "field"
        self.project = project
        self.warn = warn
        self.max_correction = 0.0

    def raw(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def __call__(self, x):
        v = self.raw(x)
        if not self.project:
            return v
        w = tangent_project(self.space, x, v)
        corr = np.linalg.norm(w - v)
        if corr > self.max_correction:
            if self.warn and self.max_correction <= TANGENCY_WARN < corr \
                    and self._on_locus(x):
                logger.warning(
                    "field %s corrected by %.2e towards tangency on %s",
                    self.name, corr, self.space.name,
                )
            self.max_correction = corr
        return w

    def _on_locus(self, x):
        q = float(self.space.form.quad(x))
        return abs(q - self.space.sign) < 1e-6


def _poly_field(rng, dim, scale=1.0):
    c0 = rng.standard_normal(dim) * scale
    c1 = rng.standard_normal((dim, dim)) * scale
    c2 = rng.standard_normal((dim, dim, dim)) * (scale / 2.0)

    def fn(x):
        return c0 + c1 @ x + np.einsum("ijk,j,k->i", c2, x, x)

    return fn


def random_tangent_field(space, rng, scale=1.0):
    """A random polynomial field, tangentialized to the space's locus."""
    return VectorField(space, _poly_field(rng, space.dim, scale), warn=False)


def plane_tangent_field(space, normal, rng, scale=1.0):
    """A random field tangent both to the locus and to the linear-plane
    section {<normal, x> = 0} at points of that section."""
    normal = np.asarray(normal, dtype=float)
    base = _poly_field(rng, space.dim, scale)

    def fn(x):
        v = tangent_project(space, x, base(x))
        n_tan = tangent_project(space, x, normal)
        denom = float(np.dot(normal, n_tan))
        if abs(denom) < 1e-12:
            return v
        return v - (float(np.dot(normal, v)) / denom) * n_tan

    return VectorField(space, fn, project=False)


def ambient_derivative(field, v, x, refine=True):
    """Componentwise directional derivative of a field at x along v.

    For a VectorField this differentiates the projected (tangent)
    extension; the projection is a smooth ambient extension of the
    on-locus field, so the tangential derivative is extension-independent.
    Two Richardson levels keep the truncation error near roundoff.
    """
    if not refine:
        return directional_derivative(field, x, v)
    scale = 1.0 + np.linalg.norm(x)
    vals = [
        directional_derivative(field, x, v, h=1e-3 * scale / 2.0**k)
        for k in range(3)
    ]
    return richardson(vals, ratio=4.0)


class ConnectionEval:
    """A connection as an evaluation rule (V, W, x) -> ambient vector."""

    def __init__(self, space, kind):
        self.space = space
        self.kind = kind

    def __call__(self, V, W, x):
        x = np.asarray(x, dtype=float)
        v = V(x) if callable(V) else np.asarray(V, dtype=float)
        dW = ambient_derivative(W, v, x)
        return tangent_project(self.space, x, dW)

    def along_curve(self, curve, t, h=1e-4):
        """nabla_{gamma'} gamma' at curve(t): the projected acceleration."""
        x = np.asarray(curve(t), dtype=float)
        acc = (np.asarray(curve(t + h)) - 2 * x + np.asarray(curve(t - h))) / h**2
        return tangent_project(self.space, x, acc)


def levi_civita(space):
    """Levi-Civita connection of a nondegenerate model space."""
    if space.degenerate:
        raise ValueError("space is degenerate: use co_connection")
    return ConnectionEval(space, "levi_civita")


def co_connection(space):
    """The canonical connection of co-Euclidean / co-Minkowski space.

    Unique symmetric connection compatible with the degenerate metric
    that preserves space-like planes and has the vertical field parallel;
    its restriction to any space-like plane is that plane's Levi-Civita
    connection and its geodesics are the lines of the space.
    """
    if not space.degenerate:
        raise ValueError("space is nondegenerate: use levi_civita")
    return ConnectionEval(space, "co_connection")


def geodesic_residual(conn, curve, ts=None):
    """sup over parameter samples of |nabla_{gamma'} gamma'|."""
    if ts is None:
        ts = np.linspace(0.05, 0.95, 19)
    return max(float(np.linalg.norm(conn.along_curve(curve, t))) for t in ts)


class VolumeFormEval:
    """The volume form omega(x; v, w, u) = det[N_x, v, w, u]."""

    def __init__(self, space):
        self.space = space

    def __call__(self, x, v, w, u):
        x = np.asarray(x, dtype=float)
        cols = np.stack([x, np.asarray(v, float), np.asarray(w, float), np.asarray(u, float)], axis=1)
        return float(np.linalg.det(cols))


def volume_form(space):
    return VolumeFormEval(space)


def _locus_curve(space, x, direction):
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)

    def curve(s):
        return project_to_locus(space, x + s * d)

    return curve


def _scalar_derivative_along(space, x, z, scalar, base_step=1e-3):
    curve = _locus_curve(space, x, z)
    vals = []
    for k in range(4):
        h = base_step / 2.0**k
        vals.append((scalar(curve(h)) - scalar(curve(-h))) / (2 * h))
    return float(richardson(vals, ratio=4.0))


def symmetry_residual(conn, X, Y, points):
    """sup |nabla_X Y - nabla_Y X - [X, Y]| over sample points."""
    worst = 0.0
    for x in points:
        lhs = conn(X, Y, x) - conn(Y, X, x)
        bracket = ambient_derivative(Y, X(x), x) - ambient_derivative(X, Y(x), x)
        bracket = tangent_project(conn.space, x, bracket)
        worst = max(worst, float(np.linalg.norm(lhs - bracket)))
    return worst


def metric_compatibility_residual(conn, X, Y, Z, points):
    """sup |Z.g(X,Y) - g(nabla_Z X, Y) - g(X, nabla_Z Y)|.

    g is the (possibly degenerate) metric induced by the ambient form.
    """
    b = conn.space.form
    worst = 0.0
    for x in points:
        deriv = _scalar_derivative_along(
            conn.space, x, Z(x), lambda p: float(b(X(p), Y(p)))
        )
        rhs = float(b(conn(Z, X, x), Y(x))) + float(b(X(x), conn(Z, Y, x)))
        worst = max(worst, abs(deriv - rhs))
    return worst


def t_parallel_residual(conn, points):
    """sup |nabla_X T| for the vertical field T = e_last (co-spaces)."""
    space = conn.space
    t_field = VectorField(space, lambda x: _e_last(space.dim), project=False)
    worst = 0.0
    rng = np.random.default_rng(7)
    for x in points:
        v = tangent_project(space, x, rng.standard_normal(space.dim))
        worst = max(worst, float(np.linalg.norm(conn(v, t_field, x))))
    return worst


def _e_last(dim):
    e = np.zeros(dim)
    e[-1] = 1.0
    return e


def plane_preservation_residual(space, normal, rng, samples=6):
    """sup over samples of the off-plane component of nabla_V W.

    V, W are random fields tangent to the plane section {<normal,x> = 0};
    the co-space connection must keep their derivative in the plane.
    """
    conn = co_connection(space) if space.degenerate else levi_civita(space)
    normal = np.asarray(normal, dtype=float) / np.linalg.norm(normal)
    V = plane_tangent_field(space, normal, rng)
    W = plane_tangent_field(space, normal, rng)
    worst = 0.0
    for _ in range(samples):
        raw = rng.standard_normal(space.dim)
        raw -= np.dot(raw, normal) * normal
        x = project_to_locus(space, raw) if space.sign * space.form.quad(raw) > 0 else None
        if x is None:
            continue
        val = conn(V, W, x)
        worst = max(worst, abs(float(np.dot(val, normal))))
    return worst


def parallel_volume_residual(conn, omega, Z, frame, points):
    """sup |Z.omega(X1,X2,X3) - sum omega(..., nabla_Z Xi, ...)|."""
    worst = 0.0
    for x in points:
        def scalar(p):
            return omega(p, frame[0](p), frame[1](p), frame[2](p))

        deriv = _scalar_derivative_along(conn.space, x, Z(x), scalar)
        rhs = 0.0
        vals = [f(x) for f in frame]
        for i in range(3):
            args = list(vals)
            args[i] = conn(Z, frame[i], x)
            rhs += omega(x, *args)
        worst = max(worst, abs(deriv - rhs))
    return worst


def parallel_transport(space, curve, t0, t1, X0, steps=200):
    """Parallel transport along a curve on a nondegenerate pseudo-sphere.

    Integrates X' = -(b(gamma', X) / sign) gamma with RK4; the right-hand
    side keeps b(gamma, X) = 0 and the norm of X constant.
    """
    b = space.form
    eps = float(space.sign)
    h = 1e-6

    def rhs(t, X):
        x = np.asarray(curve(t), dtype=float)
        dx = (np.asarray(curve(t + h)) - np.asarray(curve(t - h))) / (2 * h)
        return -(float(b(dx, X)) / eps) * x

    X = np.asarray(X0, dtype=float)
    ts = np.linspace(t0, t1, steps + 1)
    for i in range(steps):
        t, dt = ts[i], ts[i + 1] - ts[i]
        k1 = rhs(t, X)
        k2 = rhs(t + dt / 2, X + dt / 2 * k1)
        k3 = rhs(t + dt / 2, X + dt / 2 * k2)
        k4 = rhs(t + dt, X + dt * k3)
        X = X + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return X


def holonomy_angle(space, corner_loop, X0):
    """Rotation angle of a frame vector transported around a closed loop.

    ``corner_loop`` is a list of curve callables, each parametrized on
    [0, 1], whose concatenation is a closed loop starting at the corner.
    """
    X = np.asarray(X0, dtype=float)
    for leg in corner_loop:
        X = parallel_transport(space, leg, 0.0, 1.0, X)
    x0 = np.asarray(corner_loop[0](0.0), dtype=float)
    b = space.form
    cosang = float(b(X, X0)) / np.sqrt(float(b(X0, X0)) * float(b(X, X)))
    return float(np.arccos(np.clip(cosang, -1.0, 1.0)))


# ---------------------------------------------------------------------------
# transition of connections and volume forms


def _base_point_path(src_space, fam, xi):
    def x_t(t, eta=None):
        target = xi if eta is None else eta
        return project_to_locus(src_space, fam.inverse(t) @ target)

    return x_t


def _limit_field(src_space, fam, family_fn, xi, schedule):
    """Pushforward limit of a t-family of source fields, as a co-field.

    family_fn(t, x) is an ambient field on the source for each t; the
    returned callable evaluates lim_t g_t family_fn(t, x_t(eta)) by
    Richardson extrapolation at any target point eta.
    """
    x_t = _base_point_path(src_space, fam, xi)

    def hat(eta):
        seq = []
        for t in schedule:
            x = x_t(t, eta)
            v = tangent_project(src_space, x, np.asarray(family_fn(t, x), float))
            seq.append(fam.matrix(t) @ v)
        return richardson(seq)

    return hat


def connection_transition_check(src_space, co_space, fam, X_family, Y_family, xi,
                                schedule=None):
    """Gap between the rescaled source connection and the co-connection.

    X_family, Y_family: (t, x) -> ambient vector, smooth families whose
    t = 0 fields are tangent to the blown-up plane.  Returns
    |lim g_t nabla^src_{X_t} Y_t  -  nabla^co_{hatX} hatY| at xi.
    """
    schedule = DEFAULT_SCHEDULE[:7] if schedule is None else schedule
    xi = np.asarray(xi, dtype=float)
    x_t = _base_point_path(src_space, fam, xi)
    x0 = x_t(1e-14)
    # the t = 0 fields must be tangent to the blown-up plane, otherwise
    # the pushforward limits diverge
    for fx in (X_family, Y_family):
        v0 = tangent_project(src_space, x0, np.asarray(fx(0.0, x0), float))
        if abs(v0[fam.axis]) > 1e-6 * (1.0 + np.linalg.norm(v0)):
            raise ValueError("family is not tangent to the blown-up plane at t=0")
    conn_src = levi_civita(src_space)
    seq = []
    for t in schedule:
        x = x_t(t)
        Xf = VectorField(src_space, lambda p, t=t: X_family(t, p), warn=False)
        Yf = VectorField(src_space, lambda p, t=t: Y_family(t, p), warn=False)
        seq.append(fam.matrix(t) @ conn_src(Xf, Yf, x))
    lhs = richardson(seq)
    hatX = _limit_field(src_space, fam, X_family, xi, schedule)
    hatY = _limit_field(src_space, fam, Y_family, xi, schedule)
    conn_co = co_connection(co_space)
    rhs = conn_co(hatX(xi), hatY, xi)
    return float(np.linalg.norm(lhs - rhs))


def volume_transition_check(src_space, co_space, fam, families, xi, schedule=None):
    """Gap between lim (1/t) omega^src(X_t, Y_t, Z_t) and omega^co of the
    pushforward limits.

    The 1/t factor is the volume-form face of the transverse stretching:
    the family multiplies volumes by det g_t = 1/t, and the limit of the
    rescaled volumes is the degenerate space's parallel volume form.
    """
    schedule = DEFAULT_SCHEDULE[:7] if schedule is None else schedule
    xi = np.asarray(xi, dtype=float)
    x_t = _base_point_path(src_space, fam, xi)
    omega_src = volume_form(src_space)
    seq = []
    for t in schedule:
        x = x_t(t)
        vals = [
            tangent_project(src_space, x, np.asarray(f(t, x), float))
            for f in families
        ]
        # det(g_t) ~ 1/t is the volume face of the transverse stretch:
        # det[g_t N, g_t X, g_t Y, g_t Z] = det(g_t) det[N, X, Y, Z]
        seq.append(np.linalg.det(fam.matrix(t)) * omega_src(x, *vals))
    lhs = richardson(np.array(seq))
    hats = [_limit_field(src_space, fam, f, xi, schedule) for f in families]
    omega_co = volume_form(co_space)
    rhs = omega_co(xi, *[h(xi) for h in hats])
    return abs(float(lhs) - rhs)
