"""Affine-chart metrics, the operator L, and the infinitesimal Pogorelov map.

In the projective (Klein-type) chart the curved metric reads

    g_x(X, Y) = rho(x)^2 b(X, Y) + rho(x)^4 b(x, X) b(x, Y),
    rho(x)   = 1 / sqrt(1 - b(x, x)),

with b the flat Euclidean form (hyperbolic chart) or the flat Minkowski
form (anti-de Sitter chart).  Both share their unparametrized geodesics
(straight chords) with the flat metric, which makes the Weyl machinery
applicable: the connections differ by d(ln lambda^{1/(n+1)}) terms, with
lambda the ratio of the volume densities.

The infinitesimal Pogorelov map P(X) = lambda^{2/(n+1)} L(X), with L the
metric-comparison operator g(X, Y) = g_flat(L X, Y), carries Killing
fields of the curved metric to flat Killing fields, and infinitesimal
isometric deformations of a surface to deformations in the flat metric.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .forms import bpq, random_antisymmetric

__all__ = [
    "ChartMetric",
    "chart_metric",
    "chart_pair",
    "halton_cloud",
    "operator_l",
    "lambda_closed_form",
    "lambda_from_volumes",
    "infinitesimal_pogorelov",
    "chart_killing_field",
    "random_killing_generator",
    "killing_residual",
    "weyl_gap",
    "contraction_gap",
    "SurfaceSamples",
    "sphere_surface_samples",
    "deformation_residual",
    "rigidity_transport",
    "fit_flat_killing",
]

_FLAT = {"HypKlein": False, "AdSChart": False, "EucFlat": True, "MinFlat": True}


class ChartMetric:
    """One of the four chart metrics on a domain of R^n."""

    def __init__(self, kind, n=3):
        if kind not in _FLAT:
            raise ValueError(f"unknown chart metric {kind}")
        self.kind = kind
        self.n = n
        lorentz = kind in ("AdSChart", "MinFlat")
        self.base = bpq(n - 1, 1) if lorentz else bpq(n, 0)
        self.flat = _FLAT[kind]

    def in_domain(self, x):
        if self.flat:
            return True
        return float(self.base.quad(x)) < 1.0

    def rho(self, x):
        q = float(self.base.quad(x))
        if q >= 1.0:
            raise ValueError("point outside the chart domain")
        return 1.0 / np.sqrt(1.0 - q)

    def metric(self, x):
        g0 = self.base.matrix
        if self.flat:
            return g0.copy()
        x = np.asarray(x, dtype=float)
        r = self.rho(x)
        gx = g0 @ x
        return r**2 * g0 + r**4 * np.outer(gx, gx)

    def __call__(self, x, X, Y):
        return float(np.asarray(X) @ self.metric(x) @ np.asarray(Y))

    def christoffel(self, x):
        """Closed-form symbols: zero for the flat charts; for the curved
        ones Gamma^k_ij = psi_i delta^k_j + psi_j delta^k_i with
        psi = d(ln rho), the Weyl shift from the flat connection."""
        n = self.n
        gamma = np.zeros((n, n, n))
        if self.flat:
            return gamma
        x = np.asarray(x, dtype=float)
        psi = self.rho(x) ** 2 * (self.base.matrix @ x)
        eye = np.eye(n)
        gamma = np.einsum("i,kj->kij", psi, eye) + np.einsum("j,ki->kij", psi, eye)
        return gamma

    def christoffel_fd(self, x, h=2e-4):
        """Symbols from finite differences of the metric (independent
        route, used to keep the Weyl-formula check honest)."""
        n = self.n
        x = np.asarray(x, dtype=float)
        dg = np.zeros((n, n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1.0
            coarse = (self.metric(x + h * e) - self.metric(x - h * e)) / (2 * h)
            fine = (self.metric(x + h / 2 * e) - self.metric(x - h / 2 * e)) / h
            dg[i] = (4.0 * fine - coarse) / 3.0
        ginv = np.linalg.inv(self.metric(x))
        # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
        gamma = 0.5 * (
            np.einsum("kl,ijl->kij", ginv, dg)
            + np.einsum("kl,jil->kij", ginv, dg)
            - np.einsum("kl,lij->kij", ginv, dg)
        )
        return gamma

    def covariant(self, field, x, X, use_fd=False, h=1e-6):
        """(nabla_X K)(x) for an ambient-chart field K."""
        x = np.asarray(x, dtype=float)
        X = np.asarray(X, dtype=float)
        jac = _jacobian(field, x, h)
        gamma = self.christoffel_fd(x) if use_fd else self.christoffel(x)
        return jac @ X + np.einsum("kij,i,j->k", gamma, X, field(x))

    def field_gradient(self, field, x, use_fd=False, h=1e-6):
        """The (1,1)-tensor (nabla K)^k_j = d_j K^k + Gamma^k_{jl} K^l."""
        x = np.asarray(x, dtype=float)
        jac = _jacobian(field, x, h)
        gamma = self.christoffel_fd(x) if use_fd else self.christoffel(x)
        return jac + np.einsum("kjl,l->kj", gamma, field(x))


def _jacobian(field, x, h=1e-6):
    n = len(x)
    jac = np.zeros((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        jac[:, j] = (np.asarray(field(x + e)) - np.asarray(field(x - e))) / (2 * h)
    return jac


def chart_metric(kind, n=3):
    return ChartMetric(kind, n)


def chart_pair(name, n=3):
    """The built-in chart pairs: 'hyp-euc' and 'ads-min'."""
    if name == "hyp-euc":
        return ChartMetric("HypKlein", n), ChartMetric("EucFlat", n)
    if name == "ads-min":
        return ChartMetric("AdSChart", n), ChartMetric("MinFlat", n)
    raise ValueError("pair must be 'hyp-euc' or 'ads-min'")


def halton_cloud(n_points=512, n=3, radius=0.9, seed=0):
    """Deterministic quasi-random cloud in the ball of the given radius."""
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    pts = []
    while len(pts) < n_points:
        batch = 2 * radius * (sampler.random(256) - 0.5)
        keep = np.linalg.norm(batch, axis=1) <= radius
        pts.extend(batch[keep])
    return np.array(pts[:n_points])


def operator_l(m_src, m_dst, x, X=None):
    """The comparison operator: g_src(X, Y) = g_dst(L X, Y) for all Y.

    Returns the matrix L_x (or L_x @ X when X is given), from a linear
    solve against the target metric.  Raises if the target metric is
    singular at x.
    """
    g_src = m_src.metric(x)
    g_dst = m_dst.metric(x)
    if abs(np.linalg.det(g_dst)) < 1e-14:
        raise ValueError("target metric degenerate at the sample point")
    L = np.linalg.solve(g_dst, g_src)
    return L if X is None else L @ np.asarray(X, dtype=float)


def lambda_closed_form(m_src, m_dst, x):
    """Volume-density ratio omega_dst = lambda omega_src: rho powers."""
    curved = m_src if not m_src.flat else m_dst
    r = curved.rho(x)
    power = curved.n + 1
    return r**-power if not m_src.flat else r**power


def lambda_from_volumes(m_src, m_dst, x):
    """The same ratio recomputed from metric determinants (cross-check)."""
    det_src = abs(np.linalg.det(m_src.metric(x)))
    det_dst = abs(np.linalg.det(m_dst.metric(x)))
    return float(np.sqrt(det_dst / det_src))


def infinitesimal_pogorelov(K, m_src, m_dst):
    """P(K)(x) = lambda^{2/(n+1)} L_x(K(x)).

    For the built-in pairs this reduces to K + rho^2 b(x, K) x, and it
    sends Killing fields of the source chart metric to Killing fields of
    the target one.
    """
    n = m_src.n

    def mapped(x):
        lam = lambda_closed_form(m_src, m_dst, x)
        if lam <= 0:
            raise ValueError("volume ratio must be positive")
        return lam ** (2.0 / (n + 1)) * operator_l(m_src, m_dst, x, K(x))

    return mapped


def random_killing_generator(pair_name, rng, scale=1.0, n=3):
    """A random generator of the ambient isometry group of the curved chart."""
    form = bpq(n, 1) if pair_name == "hyp-euc" else bpq(n - 1, 2)
    return random_antisymmetric(form, rng, scale=scale)


def chart_killing_field(generator):
    """The chart field of the projective flow exp(sA): for x in the chart,
    K(x) = (A (x,1))_head - x (A (x,1))_tail."""
    a = np.asarray(generator, dtype=float)
    n = a.shape[0] - 1

    def K(x):
        x = np.asarray(x, dtype=float)
        v = a @ np.append(x, 1.0)
        return v[:n] - x * v[n]

    return K


def killing_residual(metric, K, points, use_fd=False):
    """sup |g(nabla_X K, Y) + g(X, nabla_Y K)| over a point cloud.

    Measured as the sup-norm of the symmetrized lowered gradient
    G (nabla K) + (nabla K)^T G, which vanishes exactly for Killing
    fields.
    """
    worst = 0.0
    for x in points:
        grad = metric.field_gradient(K, x, use_fd=use_fd)
        g = metric.metric(x)
        sym = g @ grad + grad.T @ g
        worst = max(worst, float(np.max(np.abs(sym))))
    return worst


def weyl_gap(m_a, m_b, x, X, Y):
    """|(nabla^a - nabla^b)(X,Y) - X.(f) Y - Y.(f) X|, f = ln lambda^{1/(n+1)}.

    Both connections enter through finite differences of their metrics,
    and lambda through the determinant ratio, so the check is independent
    of the closed forms used elsewhere.
    """
    x = np.asarray(x, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n = m_a.n
    d_ab = m_a.christoffel_fd(x) - m_b.christoffel_fd(x)
    diff = np.einsum("kij,i,j->k", d_ab, X, Y)

    def f(p):
        return np.log(lambda_from_volumes(m_b, m_a, p)) / (n + 1)

    h = 1e-5
    df = np.array([
        (f(x + h * e) - f(x - h * e)) / (2 * h) for e in np.eye(n)
    ])
    rhs = float(df @ X) * Y + float(df @ Y) * X
    return float(np.linalg.norm(diff - rhs))


def contraction_gap(m_a, m_b, x):
    """|trace(D) - d ln lambda| at x, both sides numerical."""
    x = np.asarray(x, dtype=float)
    n = m_a.n
    d_ab = m_a.christoffel_fd(x) - m_b.christoffel_fd(x)
    trace = np.einsum("kkj->j", d_ab)

    def lnlam(p):
        return np.log(lambda_from_volumes(m_b, m_a, p))

    h = 1e-5
    dlam = np.array([
        (lnlam(x + h * e) - lnlam(x - h * e)) / (2 * h) for e in np.eye(n)
    ])
    return float(np.max(np.abs(trace - dlam)))


# ---------------------------------------------------------------------------
# infinitesimal rigidity transport


class SurfaceSamples:
    """A sampled surface in a chart: points with tangent-plane bases."""

    def __init__(self, points, tangents):
        self.points = np.asarray(points, dtype=float)
        self.tangents = np.asarray(tangents, dtype=float)  # (N, 2, n)


def sphere_surface_samples(radius=0.55, center=(0.0, 0.0, 0.1), m=8):
    """A sphere patch inside the unit ball, with coordinate tangents."""
    theta = (np.arange(1, m + 1)) * np.pi / (m + 2)
    phi = 2 * np.pi * np.arange(m) / m
    T, P = np.meshgrid(theta, phi, indexing="ij")
    st, ct, sp, cp = np.sin(T), np.cos(T), np.sin(P), np.cos(P)
    pts = radius * np.stack([st * cp, st * sp, ct], axis=-1) + np.asarray(center)
    d_theta = radius * np.stack([ct * cp, ct * sp, -st], axis=-1)
    d_phi = radius * np.stack([-st * sp, st * cp, np.zeros_like(st)], axis=-1)
    pts = pts.reshape(-1, 3)
    tangents = np.stack([d_theta.reshape(-1, 3), d_phi.reshape(-1, 3)], axis=1)
    return SurfaceSamples(pts, tangents)


def deformation_residual(metric, Z, surface):
    """sup |g(nabla_X Z, X)| over surface samples and tangent directions.

    Zero means Z preserves the induced metric to first order (an
    infinitesimal isometric deformation).
    """
    worst = 0.0
    for p, frame in zip(surface.points, surface.tangents):
        grad = metric.field_gradient(Z, p)
        g = metric.metric(p)
        sym = g @ grad + grad.T @ g
        m2 = frame @ sym @ frame.T
        worst = max(worst, float(np.max(np.abs(m2))) / 2.0)
    return worst


def rigidity_transport(Z, m_src, m_dst, surface, tol=1e-7):
    """Map an infinitesimal isometric deformation through P.

    Raises (reporting the worst sample) when Z fails the deformation
    condition in the source metric; returns (P(Z), target residual).
    """
    res_src = deformation_residual(m_src, Z, surface)
    if res_src > tol:
        worst = None
        worst_val = -1.0
        for p, frame in zip(surface.points, surface.tangents):
            grad = m_src.field_gradient(Z, p)
            g = m_src.metric(p)
            sym = frame @ (g @ grad + grad.T @ g) @ frame.T
            v = float(np.max(np.abs(sym))) / 2.0
            if v > worst_val:
                worst_val, worst = v, p
        raise ValueError(
            f"not an isometric deformation: residual {worst_val:.3e} at {worst}"
        )
    PZ = infinitesimal_pogorelov(Z, m_src, m_dst)
    return PZ, deformation_residual(m_dst, PZ, surface)


def fit_flat_killing(metric, field, points):
    """Best-fit flat Killing field K(x) = A x + c, A^T G + G A = 0.

    Returns the sup-norm misfit over the sample points; a tiny value
    certifies the field as trivial (the restriction of a global flat
    Killing field).
    """
    g = metric.base.matrix
    n = metric.n
    # skew parameter basis: A = G^{-1} S with S skew-symmetric
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            s = np.zeros((n, n))
            s[i, j], s[j, i] = 1.0, -1.0
            basis.append(np.linalg.solve(g, s))
    cols = []
    rows = []
    for x in points:
        rows.append(np.asarray(field(x), dtype=float))
        cols.append(
            np.hstack([np.stack([b @ x for b in basis], axis=1), np.eye(n)])
        )
    A = np.vstack(cols)
    b = np.concatenate(rows)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.max(np.abs(A @ sol - b)))
