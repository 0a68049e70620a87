"""The acceptance suite: one property-based check per shipped guarantee.

Each criterion function returns a dict with ``name``, ``passed``,
``detail`` and ``seconds``; run_all executes them in order and prints one
pass/fail line each.  Tolerances are fixed here, not configurable: they
are the package's contract.
"""

from __future__ import annotations

import time

import numpy as np

from . import connections as cn
from . import duality as du
from . import pogorelov as pg
from . import projective as pj
from . import surfaces as sf
from . import transition as tr
from .forms import bpq

__all__ = ["run_all", "CRITERIA"]


def _result(name, passed, detail, t0):
    return {
        "name": name,
        "passed": bool(passed),
        "detail": detail,
        "seconds": time.time() - t0,
    }


def criterion_1_distance_consistency(seed=0):
    """Cross-ratio distance equals the arccos/arccosh inversion, 1e-9."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    counts = []
    for name in ("Ell2", "Hyp2", "dS2", "AdS3"):
        space = pj.model_space(name)
        X = space.random_points(rng, 10_000)
        Y = space.random_points(rng, 10_000)
        d_cross, _ = pj.projective_distance_batch(space, X, Y)
        d_closed = pj.closed_form_distance(space, X, Y)
        mask = ~np.isnan(d_closed)
        counts.append(int(mask.sum()))
        worst = max(worst, float(np.max(np.abs(d_cross[mask] - d_closed[mask]))))
    elapsed = time.time() - t0
    passed = worst < 1e-9 and elapsed < 5.0
    return _result(
        "1 cross-ratio distance vs closed forms",
        passed,
        f"sup |d_cr - d_closed| = {worst:.2e} over {counts} comparable pairs, {elapsed:.2f}s",
        t0,
    )


def criterion_2_duality_round_trips(seed=0):
    """(K*)* = K at grid 64; ball and hyperboloid duals and the
    truncation apex exact to 1e-9."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    grid_e = du.sphere_grid(64)
    grid_m = du.hyperboloid_grid(64)
    worst_rt = 0.0
    octa = 0.4 * np.vstack([np.eye(3), -np.eye(3)])
    for _ in range(50):
        n_v = rng.integers(8, 24)
        verts = rng.standard_normal((n_v, 3))
        verts /= np.linalg.norm(verts, axis=1, keepdims=True)
        verts *= rng.uniform(0.5, 2.0, (n_v, 1))
        # an inscribed octahedron keeps the origin interior
        body = du.EuclideanBody(np.vstack([verts, octa]))
        gap = np.max(np.abs(body.dual().dual().support(grid_e) - body.support(grid_e)))
        worst_rt = max(worst_rt, float(gap))
    for _ in range(50):
        n_v = rng.integers(4, 12)
        rho = rng.uniform(0, 1.0, n_v)
        phi = rng.uniform(0, 2 * np.pi, n_v)
        scale = rng.uniform(0.8, 2.0, n_v)
        verts = np.stack(
            [np.sinh(rho) * np.cos(phi), np.sinh(rho) * np.sin(phi), np.cosh(rho)],
            axis=1,
        ) * scale[:, None]
        body = du.MinkowskiBody(verts)
        gap = np.max(np.abs(body.dual().dual().support(grid_m) - body.support(grid_m)))
        worst_rt = max(worst_rt, float(gap))
    # balls and hyperboloids through the sampled-support polar formula
    worst_smooth = 0.0
    for r in (0.5, 1.0, 2.0, 3.7):
        se = du.SupportFunctionE(grid_e, np.full(len(grid_e), r), grid_shape=(64, 64))
        worst_smooth = max(worst_smooth, float(np.max(np.abs(du.dual_support(se).values - 1.0 / r))))
        sm = du.SupportFunctionMin(grid_m, np.full(len(grid_m), -r), grid_shape=(64, 64))
        worst_smooth = max(worst_smooth, float(np.max(np.abs(du.dual_support(sm).values + 1.0 / r))))
    worst_trunc = 0.0
    for _ in range(10):
        v = np.array([0.3, -0.1, 1.0]) * rng.uniform(0.5, 2.0)
        v[2] = np.sqrt(v[0] ** 2 + v[1] ** 2) + rng.uniform(0.2, 1.0)
        r = rng.uniform(0.3, 3.0)
        vhat = v / np.sqrt(-bpq(2, 1).quad(v))
        apex = du.truncation_dual(v, r)
        worst_trunc = max(worst_trunc, float(np.max(np.abs(apex - vhat / r))))
    passed = worst_rt < 1e-6 and worst_smooth < 1e-9 and worst_trunc < 1e-9
    return _result(
        "2 duality round trips",
        passed,
        f"double-dual gap {worst_rt:.2e}, smooth duals {worst_smooth:.2e}, truncation {worst_trunc:.2e}",
        t0,
    )


def criterion_3_one_d_transition(seed=0):
    """g_k R_{a/k} g_k^{-1} -> T_a and the same for boosts, 1e-6."""
    t0 = time.time()
    worst = 0.0
    for a in (-2.0, 0.5, 3.0):
        for kind in ("rotation", "boost"):
            lim, _ = tr.one_d_limit(kind, a)
            worst = max(worst, float(np.max(np.abs(lim - tr.translation_1d(a)))))
    return _result(
        "3 one-dimensional conjugacy limits",
        worst < 1e-6,
        f"sup gap to the translation {worst:.2e}",
        t0,
    )


_TRANSITIONS = [
    ("Ell3", "point", "IsomEuc"),
    ("Hyp3", "point", "IsomEuc"),
    ("dS3", "point", "IsomMin"),
    ("AdS3", "point", "IsomMin"),
    ("Ell3", "plane", "IsomCoEuc"),
    ("dS3", "plane", "IsomCoEuc"),
    ("Hyp3", "plane", "IsomCoMin"),
    ("AdS3", "plane", "IsomCoMin"),
]


def criterion_4_three_d_transition(seed=0):
    """Conjugated isometry paths land in the limit block patterns
    (1e-6, 1000 paths); the duality/transition diagrams commute (1e-7,
    100 paths)."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    failures = 0
    per = 125  # 8 transitions x 125 paths
    for name, kind, target in _TRANSITIONS:
        space = pj.model_space(name)
        fam = tr.transition_family(name, kind)
        for _ in range(per):
            h = tr.random_isometry_path(space, fam, rng)
            lim, _ = tr.conjugate_limit(h, fam)
            if not tr.limit_group_membership(lim, target, tol=1e-6):
                failures += 1
    worst_gap = 0.0
    cases = [("Ell3", "point"), ("Ell3", "plane"), ("dS3", "point"), ("Hyp3", "plane")]
    for name, kind in cases:
        space = pj.model_space(name)
        fam = tr.transition_family(name, kind)
        for _ in range(25):
            x0 = _fixed_locus_point(space, fam, rng)
            v = rng.standard_normal(4)
            w = rng.standard_normal(4)

            def x_path(t, x0=x0, v=v, w=w, space=space):
                y = x0 + t * v + 0.5 * t * t * w
                return y / np.sqrt(abs(float(space.form.quad(y))))

            gap = tr.duality_transition_check(tr.PointPath(x_path), fam, space.form)
            worst_gap = max(worst_gap, float(gap))
    passed = failures == 0 and worst_gap < 1e-7
    return _result(
        "4 three-dimensional transitions",
        passed,
        f"{failures}/1000 pattern failures, duality diagram gap {worst_gap:.2e}",
        t0,
    )


def _fixed_locus_point(space, fam, rng):
    if fam.kind == "blow_up_point":
        x0 = np.zeros(4)
        x0[fam.axis] = 1.0
        return x0
    while True:
        y = rng.standard_normal(4)
        y[fam.axis] = 0.0
        q = float(space.form.quad(y))
        if space.sign * q > 0.1:
            return y / np.sqrt(abs(q))


def criterion_5_co_connection(seed=0):
    """Characterizing residuals of the co-space connections < 1e-6;
    lines geodesic < 1e-6, non-geodesic control > 1e-2."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for name in ("coEuc3", "coMin3"):
        space = pj.model_space(name)
        conn = cn.co_connection(space)
        pts = space.sample_points(rng, 8)
        for _ in range(3):
            X = cn.random_tangent_field(space, rng, 0.5)
            Y = cn.random_tangent_field(space, rng, 0.5)
            Z = cn.random_tangent_field(space, rng, 0.5)
            worst = max(worst, cn.symmetry_residual(conn, X, Y, pts))
            worst = max(worst, cn.metric_compatibility_residual(conn, X, Y, Z, pts))
            omega = cn.volume_form(space)
            frame = [X, Y, cn.random_tangent_field(space, rng, 0.5)]
            worst = max(worst, cn.parallel_volume_residual(conn, omega, Z, frame, pts))
        worst = max(worst, cn.t_parallel_residual(conn, pts))
        normal = rng.standard_normal(4)
        normal[-1] = 1.0 + abs(normal[-1])
        worst = max(worst, cn.plane_preservation_residual(space, normal, rng))
    # geodesics
    cc = cn.co_connection(pj.model_space("coEuc3"))
    lines = [
        lambda t: np.array([np.cos(t), np.sin(t), 0.0, 0.0]),
        lambda t: np.array([1 / np.sqrt(2), 1 / np.sqrt(2), 0.0, 0.3 + 2 * t]),
    ]
    p = np.array([0.3, -0.2, 0.5])
    u_vec = np.array([1.0, 0, 0, p[0]])
    v_vec = np.array([0, 1.0, 0, p[1]])
    lines.append(lambda t: cn.project_to_locus(
        pj.model_space("coEuc3"), np.cos(t) * u_vec + np.sin(t) * v_vec))
    geo = max(cn.geodesic_residual(cc, line) for line in lines)
    coM = pj.model_space("coMin3")
    ccm = cn.co_connection(coM)
    geo = max(geo, cn.geodesic_residual(
        ccm, lambda t: np.array([np.sinh(t), 0.0, np.cosh(t), 0.0])))
    # a tilted co-Minkowski line: the graph of a Minkowski-linear height
    um = np.array([1.0, 0, 0, 0.3])
    vm = np.array([0, 0, 1.0, -0.5])
    geo = max(geo, cn.geodesic_residual(
        ccm, lambda t: cn.project_to_locus(coM, np.sinh(t) * um + np.cosh(t) * vm)))
    control = cn.geodesic_residual(
        cc, lambda t: np.array([np.cos(t) * np.cos(0.7), np.sin(t) * np.cos(0.7),
                                np.sin(0.7), 0.1]))
    passed = worst < 1e-6 and geo < 1e-6 and control > 1e-2
    return _result(
        "5 co-space connection characterization",
        passed,
        f"axiom residuals {worst:.2e}, line residual {geo:.2e}, control {control:.2e}",
        t0,
    )


def _field_family(rng, axis, dim=4):
    c0 = rng.standard_normal(dim) * 0.5
    c0[axis] = 0.0
    c1 = rng.standard_normal((dim, dim)) * 0.4
    c1[axis, :] = 0.0
    c1[axis, axis] = rng.standard_normal() * 0.4
    d0 = rng.standard_normal(dim) * 0.4

    def fam_fn(t, x):
        return c0 + c1 @ x + t * d0

    return fam_fn


def criterion_6_connection_transition(seed=0):
    """Rescaled connections and volumes of Ell3/dS3/Hyp3/AdS3 converge to
    the co-space ones, extrapolated gap < 1e-6 on 20 families each."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_c, worst_v = 0.0, 0.0
    pairs = [("Ell3", "coEuc3"), ("dS3", "coEuc3"), ("Hyp3", "coMin3"), ("AdS3", "coMin3")]
    for src_name, co_name in pairs:
        src = pj.model_space(src_name)
        cosp = pj.model_space(co_name)
        fam = tr.transition_family(src_name, "plane")
        for _ in range(20):
            xi = cosp.sample_points(rng, 1, radius=0.8)[0]
            Xf = _field_family(rng, fam.axis)
            Yf = _field_family(rng, fam.axis)
            Zf = _field_family(rng, fam.axis)
            worst_c = max(worst_c, cn.connection_transition_check(src, cosp, fam, Xf, Yf, xi))
            worst_v = max(worst_v, cn.volume_transition_check(src, cosp, fam, [Xf, Yf, Zf], xi))
    passed = worst_c < 1e-6 and worst_v < 1e-6
    return _result(
        "6 connection/volume transition",
        passed,
        f"connection gap {worst_c:.2e}, volume gap {worst_v:.2e}",
        t0,
    )


def criterion_7_pogorelov(seed=0):
    """Killing transport, the (rho^2, rho^4) eigenvalue dictionary, and
    the Weyl/contraction identities."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    cloud = pg.halton_cloud(512, seed=seed)
    worst_img, worst_src = 0.0, 0.0
    for pair_name in ("hyp-euc", "ads-min"):
        m_src, m_dst = pg.chart_pair(pair_name)
        for _ in range(20):
            gen = pg.random_killing_generator(pair_name, rng)
            K = pg.chart_killing_field(gen)
            res_src = pg.killing_residual(m_src, K, cloud[:48])
            worst_src = max(worst_src, res_src)
            if res_src < 1e-7:
                PK = pg.infinitesimal_pogorelov(K, m_src, m_dst)
                worst_img = max(worst_img, pg.killing_residual(m_dst, PK, cloud[:48]))
    # eigenvalue dictionary at 1000 points
    pts = pg.halton_cloud(1000, seed=seed + 1)
    worst_eig = 0.0
    for pair_name in ("hyp-euc", "ads-min"):
        m_src, m_dst = pg.chart_pair(pair_name)
        g0 = m_src.base.matrix
        for x in pts[:500]:
            L = pg.operator_l(m_src, m_dst, x)
            rho2 = m_src.rho(x) ** 2
            # lateral directions are b-orthogonal to the radial one
            v = _b_orthogonal(g0, x, rng)
            worst_eig = max(worst_eig, float(np.max(np.abs(L @ v - rho2 * v))))
            worst_eig = max(worst_eig, float(np.max(np.abs(L @ x - rho2**2 * x))))
    # Weyl and contraction identities
    worst_weyl = 0.0
    for pair_name in ("hyp-euc", "ads-min"):
        m_src, m_dst = pg.chart_pair(pair_name)
        for x in cloud[:20]:
            X, Y = rng.standard_normal(3), rng.standard_normal(3)
            worst_weyl = max(worst_weyl, pg.weyl_gap(m_dst, m_src, x, X, Y))
            worst_weyl = max(worst_weyl, pg.contraction_gap(m_dst, m_src, x))
    passed = worst_src < 1e-7 and worst_img < 1e-6 and worst_eig < 1e-9 and worst_weyl < 1e-6
    return _result(
        "7 infinitesimal Pogorelov map",
        passed,
        f"src {worst_src:.2e}, image {worst_img:.2e}, eigen {worst_eig:.2e}, weyl {worst_weyl:.2e}",
        t0,
    )


def _b_orthogonal(g0, x, rng):
    for _ in range(8):
        v = rng.standard_normal(3)
        denom = float(x @ g0 @ x)
        if abs(denom) < 1e-12:
            continue
        v = v - x * (float(v @ g0 @ x) / denom)
        if np.linalg.norm(v) > 1e-8:
            return v
    raise RuntimeError("could not build a lateral direction")


def criterion_8_surfaces(seed=0):
    """Canonical data exact; grid-h^2 residual scaling; support-function
    shape operators; dual involution and curvature dictionary; surface
    transition limits."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    # canonical data exact to 1e-9
    d_s = sf.embedding_data(sf.sphere_patch(), m=33)
    d_h = sf.embedding_data(sf.hyperboloid_patch(), m=33)
    canon = max(
        float(np.max(np.abs(d_s.B - np.eye(2)))),
        float(np.max(np.abs(d_h.B - np.eye(2)))),
        float(np.max(np.abs(d_s.det_B - 1.0))),
        float(np.max(np.abs(d_h.det_B - 1.0))),
    )
    # O(h^2) scaling of the Gauss residual under refinement
    coE = pj.model_space("coEuc3")
    dom = ((0.5, np.pi - 0.5), (0.3, 2 * np.pi - 0.3))
    c8 = 0.05
    f = lambda U, V: 1.0 + c8 * np.sin(2 * U) * np.cos(V)
    df = lambda U, V: np.stack(
        [2 * c8 * np.cos(2 * U) * np.cos(V), -c8 * np.sin(2 * U) * np.sin(V)], axis=-1)

    def d2f(U, V):
        h = np.empty(U.shape + (2, 2))
        h[..., 0, 0] = -4 * c8 * np.sin(2 * U) * np.cos(V)
        h[..., 0, 1] = h[..., 1, 0] = -2 * c8 * np.cos(2 * U) * np.sin(V)
        h[..., 1, 1] = -c8 * np.sin(2 * U) * np.cos(V)
        return h

    patch = sf.graph_patch(coE, f, dom, df=df, d2f=d2f)
    g33, _ = sf.gauss_codazzi_residual(sf.embedding_data_co(patch, m=33))
    g65, _ = sf.gauss_codazzi_residual(sf.embedding_data_co(patch, m=65))
    ratio = g33 / g65
    # shape_from_support vs the connection route at 64^2
    a = rng.standard_normal(3) * 0.1
    ufn = lambda x: 1.0 + x @ a + 0.1 * np.sin(2 * x[..., 0]) * np.cos(x[..., 1])
    up = sf.graph_patch(coE, lambda U, V: ufn(sf.sphere_chart(U, V)), dom)
    dco = sf.embedding_data_co(up, m=64)
    B_sup, _ = sf.shape_from_support(ufn, base="S2", domain=dom, m=64)
    sup_gap = float(np.max(np.abs(B_sup - dco.B)))
    # dual involution and curvature dictionary
    d1 = sf.embedding_data_co(patch, m=65)
    dd = sf.dual_embedding_data(sf.dual_embedding_data(d1))
    invol = max(
        float(np.max(np.abs(dd.I - d1.I))), float(np.max(np.abs(dd.B - d1.B)))
    )
    Ks = {}
    for m in (65, 129, 257):
        dm = sf.embedding_data_co(patch, m=m)
        ddm = sf.dual_embedding_data(dm)
        Ks[m] = sf.gauss_curvature(ddm.I, ddm.du, ddm.dv)
    det65 = np.linalg.det(sf.embedding_data_co(patch, m=65).B)
    k1 = (4 * Ks[129][::2, ::2] - Ks[65]) / 3
    k2 = (4 * Ks[257][::2, ::2] - Ks[129]) / 3
    k_ref = (16 * k2[::2, ::2] - k1) / 15
    kk = 8
    dict_gap = float(np.max(np.abs(k_ref - 1.0 / det65)[kk:-kk, kk:-kk]))
    # surface transition
    w = rng.standard_normal(3) * 0.05

    def fam_ell(t, U, V):
        m_ = sf.sphere_chart(U, V)
        h = t * ufn(m_) + t * t * (0.3 + m_ @ w)
        vec = np.concatenate([m_, h[..., None]], axis=-1)
        return vec / np.sqrt(1 + h**2)[..., None]

    def fam_hyp(t, U, V):
        m_ = sf.hyperboloid_chart(U, V)
        h = t * (-1.0 + 0.05 * m_[..., 0]) + t * t * (0.2 + 0.05 * m_[..., 1])
        vec = np.stack([m_[..., 0], m_[..., 1], h, m_[..., 2]], axis=-1)
        return vec / np.sqrt(1 - h**2)[..., None]

    out_e = sf.surface_transition(fam_ell, "Ell3", m=17, ts=0.5 ** np.arange(3, 10))
    out_h = sf.surface_transition(fam_hyp, "Hyp3", m=17, ts=0.5 ** np.arange(3, 10))
    trans_gap = max(max(out_e["gaps"].values()), max(out_h["gaps"].values()))
    r2 = min(out_e["rate_r2"], out_h["rate_r2"])
    passed = (
        canon < 1e-9
        and 3.5 <= ratio <= 4.5
        and sup_gap < 1e-4
        and invol < 1e-8
        and dict_gap < 1e-6
        and trans_gap < 1e-5
        and r2 > 0.99
    )
    return _result(
        "8 surfaces",
        passed,
        (
            f"canonical {canon:.1e}, h2-ratio {ratio:.2f}, support-gap {sup_gap:.1e}, "
            f"involution {invol:.1e}, K-dictionary {dict_gap:.1e}, "
            f"transition {trans_gap:.1e}, R2 {r2:.4f}"
        ),
        t0,
    )


def criterion_9_rigidity(seed=0):
    """Isometric deformations transport to isometric deformations;
    trivial ones stay trivial, for 10 ambient Killing restrictions."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    surf = pg.sphere_surface_samples()
    worst_src, worst_dst, worst_triv = 0.0, 0.0, 0.0
    for pair_name in ("hyp-euc", "ads-min"):
        m_src, m_dst = pg.chart_pair(pair_name)
        for _ in range(5):
            gen = pg.random_killing_generator(pair_name, rng)
            Z = pg.chart_killing_field(gen)
            res_src = pg.deformation_residual(m_src, Z, surf)
            worst_src = max(worst_src, res_src)
            PZ, res_dst = pg.rigidity_transport(Z, m_src, m_dst, surf)
            worst_dst = max(worst_dst, res_dst)
            worst_triv = max(worst_triv, pg.fit_flat_killing(m_dst, PZ, surf.points[::4]))
    passed = worst_src < 1e-7 and worst_dst < 1e-6 and worst_triv < 1e-6
    return _result(
        "9 rigidity transport",
        passed,
        f"src {worst_src:.2e}, dst {worst_dst:.2e}, triviality fit {worst_triv:.2e}",
        t0,
    )


CRITERIA = [
    criterion_1_distance_consistency,
    criterion_2_duality_round_trips,
    criterion_3_one_d_transition,
    criterion_4_three_d_transition,
    criterion_5_co_connection,
    criterion_6_connection_transition,
    criterion_7_pogorelov,
    criterion_8_surfaces,
    criterion_9_rigidity,
]


def run_all(seed=0, out=print):
    results = []
    for crit in CRITERIA:
        res = crit(seed=seed)
        results.append(res)
        status = "PASS" if res["passed"] else "FAIL"
        out(f"[{status}] {res['name']}: {res['detail']} ({res['seconds']:.1f}s)")
    total = sum(r["seconds"] for r in results)
    n_pass = sum(r["passed"] for r in results)
    out(f"{n_pass}/{len(results)} criteria passed in {total:.1f}s")
    return results
