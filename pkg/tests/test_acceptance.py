"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""

import json

import numpy as np
import pytest

from horosurf import maps
from horosurf.cli import main
from horosurf.envelope import shape_operator
from horosurf.fields import (
    constant,
    eval_jet,
    geodesic_plane,
    horosphere_field,
    k_infinity_from_jet,
)
from horosurf.flow import (
    arccoth,
    decompose_flow,
    flow_k,
    flow_KH,
    focal_bracket,
    focal_times,
)
from horosurf.hyperbolic import STANDARD_CHART, metric_inner
from horosurf.mesh import polar_grid
from horosurf.weingarten import (
    TrajectorySeed,
    critical_alpha,
    curvature_line_trace,
    immersion_threshold,
    ratio,
    regularity_classify,
    rho_of_map,
    univalence_bounds,
    weingarten_curvatures,
)

from conftest import record, unit_vectors

CONSTANTS = (0.5, 1.0, 2.0)


def _sphere_grid():
    g = polar_grid([0.3, -0.2, -0.9], rings=25, sectors=40, max_angle=3.0)
    assert len(g.points) == 1001
    return g.sphere_points()


def _disk(rng, n, r):
    rad = r * np.sqrt(rng.uniform(0, 1, n))
    return rad * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def _map_samples(name, rng, n):
    """Chart points inside the domain of a catalog map."""
    if name in ("identity", "koebe", "disk_automorphism", "mobius"):
        return _disk(rng, n, 0.98)
    if name == "scaling":
        return 2.0 * _disk(rng, n, 0.98)
    if name == "polynomial":
        return _disk(rng, n, 0.88)
    if name == "koebe_inverse":
        z = _disk(rng, n, 0.98)
        return z / (1 - z) ** 2
    if name == "quadratic_inverse":
        z = _disk(rng, n, 0.98)
        return z + 0.45 * z * z
    if name == "power":
        r = np.exp(rng.uniform(-3, 2, n))
        return r * np.exp(1j * 0.98 * rng.uniform(-np.pi / 4, np.pi / 4, n))
    if name == "strip":
        return rng.uniform(-4, 4, n) + 1j * 0.98 * rng.uniform(-np.pi / 2, np.pi / 2, n)
    if name == "annulus":
        return np.exp(rng.uniform(0.02, np.log(3) - 0.02, n) + 2j * np.pi * rng.uniform(0, 1, n))
    raise KeyError(name)


CONFORMAL = {
    "identity": maps.identity(),
    "disk_automorphism": maps.disk_automorphism(0.3 - 0.4j, 0.5),
    "scaling": maps.scaling(2.0),
    "polynomial": maps.polynomial([0, 1, 0.1], 0.9),
    "koebe_inverse": maps.koebe_inverse(),
    "quadratic_inverse": maps.quadratic_inverse(0.45),
    "power": maps.power(2.0),
    "strip": maps.strip(),
    "annulus": maps.annulus(1.0, 3.0),
}

UNIVALENT = {
    "identity": maps.identity(),
    "mobius": maps.mobius(1, 0.2, 0.1, 2),
    "scaling": maps.scaling(2.0),
    "disk_automorphism": maps.disk_automorphism(0.3 - 0.4j, 0.5),
    "koebe": maps.koebe(),
    "koebe_inverse": maps.koebe_inverse(),
    "quadratic_inverse": maps.quadratic_inverse(0.45),
    "power": maps.power(2.0),
    "strip": maps.strip(),
    "polynomial": maps.polynomial([0, 1, 0.1], 0.9),
}


def _conformal_jets(rng, per_map, rho_lim=None):
    for name, m in CONFORMAL.items():
        fld = rho_of_map(m)
        got = 0
        for w in _map_samples(name, rng, 20 * per_map):
            if got == per_map:
                break
            try:
                j = eval_jet(fld, STANDARD_CHART.from_chart(w))
            except ValueError:
                continue
            if rho_lim is not None and abs(j.rho) > rho_lim:
                continue
            got += 1
            yield name, m, w, j
        assert got == per_map, name


def test_criterion_01_sphere_oracle():
    X = _sphere_grid()
    k_err = r_err = 0.0
    for c in CONSTANTS:
        for x in X:
            s = shape_operator(eval_jet(constant(c), x))
            k_err = max(k_err, abs(s.k1 + 1 / np.tanh(c)), abs(s.k2 + 1 / np.tanh(c)))
            r_err = max(r_err, abs(np.linalg.norm(s.position.coords) - np.tanh(c / 2)))
    ok = k_err < 1e-8 and r_err < 1e-10
    record(1, ok, f"sphere oracle: max|k+coth c| = {k_err:.2e}, max||R|-tanh(c/2)| = {r_err:.2e}")
    assert ok


def test_criterion_02_flow_closure():
    X = _sphere_grid()
    err = 0.0
    for c in CONSTANTS:
        for x in X:
            jet = eval_jet(constant(c), x)
            s0 = shape_operator(jet)
            st = decompose_flow(s0.g, s0.Pi_low)
            for t in (-1.0, -0.5, 0.5, 1.0):
                s = shape_operator(jet.shifted(t))
                g, Pi = st.evaluate(t)
                err = max(err, np.abs(g - s.g).max(), np.abs(Pi - s.Pi_low).max())
    ok = err < 1e-8
    record(2, ok, f"flow closure: max entry error {err:.2e} over t in {{+-0.5, +-1}}")
    assert ok


def test_criterion_03_curvature_ode():
    h = 1e-4
    err = 0.0
    for k0 in np.linspace(-0.95, 0.95, 39):
        for t in np.linspace(-3, 3, 61):
            d = (flow_k(k0, t + h) - flow_k(k0, t - h)) / (2 * h)
            k = flow_k(k0, t)
            err = max(err, abs(d - (k * k - 1)))
    ok = err < 1e-6
    record(3, ok, f"curvature ODE: max|dk/dt - (k^2-1)| = {err:.2e} at h = 1e-4")
    assert ok


def test_criterion_04_focal_prediction():
    err = det_at_root = 0.0
    g0 = np.array([[1.2, 0.3], [0.3, 0.8]])
    V = np.array([[1.0, 0.4], [-0.2, 1.0]])
    for k0 in (1.5, 2.0, 5.0):
        # non-diagonal g0 with a g0-self-adjoint shape operator of eigenvalues k0, 0.4
        W = np.linalg.inv(np.linalg.cholesky(g0).T) @ np.linalg.qr(V)[0]
        P0 = W @ np.diag([k0, 0.4]) @ np.linalg.inv(W)
        Pi0 = g0 @ P0
        st = decompose_flow(g0, 0.5 * (Pi0 + Pi0.T))
        t_star = arccoth(k0)
        root = focal_bracket(st, t_star - 0.2, t_star + 0.2)
        err = max(err, abs(root - t_star))
        det_at_root = max(det_at_root, abs(np.linalg.det(st.evaluate(root)[0])))
    for k0 in (1.5, 2.0, 5.0):
        st = decompose_flow(np.eye(2), np.diag([k0, 0.4]))
        lo, hi = arccoth(k0) - 0.2, arccoth(k0) + 0.2
        assert st.signed_sqrt_det_g(lo) * st.signed_sqrt_det_g(hi) < 0
        err = max(err, abs(focal_bracket(st, lo, hi) - arccoth(k0)))
    ok = err < 1e-10 and det_at_root < 1e-12
    record(4, ok, f"focal prediction: max|root - arccoth k0| = {err:.2e}, |det g| at root {det_at_root:.1e}")
    assert ok


def test_criterion_05_invariance(rng):
    ts = np.linspace(-3, 3, 601)
    dev = 0.0
    cases = [(np.eye(2), np.diag([1.5, 0.3])), (np.eye(2), np.diag([-2.0, 5.0])),
             (np.array([[1.3, 0.2], [0.2, 0.9]]), np.array([[1.6, 0.1], [0.1, -0.4]]))]
    for g0, Pi0 in cases:
        st = decompose_flow(g0, Pi0)
        k = np.linalg.eigvals(np.linalg.solve(g0, Pi0)).real
        K0, H0 = k[0] * k[1] - 1, k[0] + k[1]
        ref = K0 * K0 * np.linalg.det(g0)
        foc = [t for t, _ in focal_times(*k)]
        for t in ts:
            if any(abs(t - f) < 1e-2 for f in foc):
                continue
            K, _ = flow_KH(K0, H0, t)
            Ks, _ = st.KH(t)
            dg = np.linalg.det(st.evaluate(t)[0])
            for val in (K * K * dg, Ks * Ks * dg):
                dev = max(dev, abs(val - ref) / max(abs(ref), 1.0))
    # K sqrt g = K_inf e^{2 rho}
    err, n = 0.0, 0
    cat = [constant(0.7), geodesic_plane(), horosphere_field([0, 0, 1], 0.3)]
    while n < 500:
        x = unit_vectors(rng, 1)[0]
        f = cat[n % 3]
        try:
            j = eval_jet(f, x)
        except ValueError:
            continue
        if abs(j.rho) > 3:
            continue
        s = shape_operator(j)
        rhs = s.k_inf * np.exp(2 * j.rho)
        err = max(err, abs(s.K * s.sqrt_det_g - rhs) / max(1.0, abs(rhs)))
        n += 1
    for _, _, _, j in _conformal_jets(rng, 56, rho_lim=3.0):
        s = shape_operator(j)
        if s.focal:
            continue
        rhs = s.k_inf * np.exp(2 * j.rho)
        err = max(err, abs(s.K * s.sqrt_det_g - rhs) / max(1.0, abs(rhs)))
        n += 1
    ok = dev < 1e-9 and err < 1e-8 and n >= 1000
    record(5, ok, f"invariance: K^2 det g rel dev {dev:.2e}; K sqrt g vs K_inf e^2rho {err:.2e} at {n} points")
    assert ok


def test_criterion_06_catalog_curvatures(rng):
    pk = pK = hk = hK = 0.0
    n_p = n_h = 0
    while n_p < 1000 or n_h < 1000:
        x = unit_vectors(rng, 1)[0]
        if n_p < 1000 and x[2] < -0.02:
            s = shape_operator(eval_jet(geodesic_plane(), x))
            pk = max(pk, abs(s.k1), abs(s.k2))
            pK = max(pK, abs(s.k_inf + 1))
            n_p += 1
        if n_h < 1000 and x[2] < 0.98:
            s = shape_operator(eval_jet(horosphere_field([0, 0, 1]), x))
            hk = max(hk, abs(s.k1 + 1), abs(s.k2 + 1))
            hK = max(hK, abs(s.k_inf))
            n_h += 1
    ok = pk < 1e-8 and pK < 1e-10 and hk < 1e-8 and hK < 1e-10
    record(6, ok, f"catalog: plane |k| {pk:.1e}, K_inf+1 {pK:.1e}; horosphere |k+1| {hk:.1e}, K_inf {hK:.1e}")
    assert ok


def test_criterion_07_hyperbolic_metric_equation(rng):
    eq_err, n = 0.0, 0
    for _, _, _, j in _conformal_jets(rng, 112):
        eq_err = max(eq_err, abs(k_infinity_from_jet(j) + 1))
        n += 1
    # density estimate as stated: 1/4 delta^-1 <= e^rho <= delta^-1 on simply connected domains
    viol, total, worst = 0, 0, 0.0
    for name, m in CONFORMAL.items():
        if name == "annulus":
            continue
        fld = rho_of_map(m)
        for w in [0j, *_map_samples(name, rng, 120)]:
            try:
                e_rho = np.exp(fld.value_at_chart(w))
            except ValueError:
                continue
            inv_delta = 1.0 / m.domain.distance(w)[0]
            total += 1
            ratio_ = e_rho / inv_delta
            if not 0.25 <= ratio_ <= 1.0:
                viol += 1
                worst = max(worst, ratio_)
    ok = eq_err < 1e-8 and n >= 1000 and viol == 0
    record(7, ok, f"(1-Lap rho)e^-2rho + 1: max {eq_err:.1e} at {n} points; "
                  f"density estimate violated at {viol}/{total} samples (max e^rho delta = {worst:.3f})")
    assert eq_err < 1e-8 and n >= 1000
    assert viol == 0, "e^rho <= 1/delta fails (e.g. identity map at 0: e^rho = 2, 1/delta = 1)"


def test_criterion_08_weingarten_cross_check(rng):
    k_err = rel_err = 0.0
    n = 0
    sup_s = 0.0
    for m in (maps.identity(), maps.polynomial([0, 1, 0.1], 0.9)):
        fld = rho_of_map(m)
        for w in _disk(rng, 500, 0.85):
            x = STANDARD_CHART.from_chart(w)
            s = ratio(m, w).s
            sup_s = max(sup_s, s)
            kp, km, _ = weingarten_curvatures(s)
            sj = shape_operator(eval_jet(fld, x))
            k_err = max(k_err, abs(sj.k1 - min(kp, km)), abs(sj.k2 - max(kp, km)))
            for t in (0.0, 0.5):
                st = shape_operator(eval_jet(fld + t, x))
                a = -np.exp(-2 * t)
                rel_err = max(rel_err, abs((1 - a) * st.K - a * (2 - st.H)))
            n += 1
    ok = sup_s < 0.5 and k_err < 1e-6 and rel_err < 1e-7
    record(8, ok, f"Weingarten: sup s = {sup_s:.3f}, k+- error {k_err:.1e} at {n} points, "
                  f"(1-a)K - a(2-H) = {rel_err:.1e}")
    assert ok


def test_criterion_09_kraus_and_classes(rng):
    kraus = []
    for m in (maps.koebe(), maps.koebe_inverse()):
        r = ratio(m, 0.0)
        kraus.append(abs(abs(r.S) - 1.5 * r.mu))
    kraus_ok = max(kraus) < 1e-9
    worst_margin, viol = np.inf, 0
    for name, m in UNIVALENT.items():
        zs = _map_samples(name, rng, 500)
        rep = univalence_bounds(m, zs)
        c = rep.checks["boundary"]
        assert c.samples == 500
        worst_margin = min(worst_margin, c.worst_margin)
        viol += len(c.violations)
    zs = _disk(rng, 500, 0.98)
    labels = (
        regularity_classify(maps.identity(), zs, -1.0).label,
        regularity_classify(maps.quadratic_inverse(0.45), zs + 0.45 * zs * zs, -1.0).label,
        regularity_classify(maps.koebe_inverse(), zs / (1 - zs) ** 2, -1.0).label,
    )
    # Kraus ratio bound s <= 24 turned into an alpha bound by the immersion threshold
    a_crit = critical_alpha(24.0)
    alpha_ok = (abs(a_crit - 1 / 47) < 1e-15 and immersion_threshold(-a_crit) == pytest.approx(24.0)
                and immersion_threshold(-0.99 * a_crit) > 24.0)
    ok = kraus_ok and viol == 0 and labels == ("a", "b", "c") and alpha_ok
    record(9, ok, f"Kraus equality gap {max(kraus):.1e}; 6/delta^2 worst margin {worst_margin:.3f}, "
                  f"{viol} violations; classes {labels}; critical alpha -{a_crit:.6f}")
    assert ok


def _circle_fit(z):
    # algebraic least-squares fit |z - c|^2 = r^2
    A = np.column_stack([z.real, z.imag, np.ones(len(z))])
    b = np.abs(z) ** 2
    (p, q, s), *_ = np.linalg.lstsq(A, b, rcond=None)
    c = 0.5 * (p + 1j * q)
    r = np.sqrt(s + abs(c) ** 2)
    return c, r


def test_criterion_10_trajectories():
    m = maps.power(2.0)
    dev, res, steps = 0.0, 0.0, []
    for z0 in (2.0, 1.5 + 0.5j, 3.0 - 0.4j):
        tr = curvature_line_trace(m, TrajectorySeed(complex(z0), "plus", 1e-3, 1000))
        c, r = _circle_fit(tr.points)
        dev = max(dev, np.abs(np.abs(tr.points - c) - r).max())
        res = max(res, np.abs(tr.residuals).max())
        steps.append(len(tr.points) - 1)
    for z0 in (1.0, 1.0 + 0.3j, 2.0 - 0.5j):
        tr = curvature_line_trace(m, TrajectorySeed(complex(z0), "minus", 1e-3, 1000))
        u = np.exp(-1j * np.angle(z0))
        dev = max(dev, np.abs((tr.points * u).imag).max())
        res = max(res, np.abs(tr.residuals).max())
        steps.append(len(tr.points) - 1)
    ok = dev < 1e-4 and res < 1e-6 and min(steps) >= 1000
    record(10, ok, f"trajectories of z^2: max deviation {dev:.1e}, max Im(S dz^2) (normalized) {res:.1e}, "
                   f"steps {min(steps)}")
    assert ok


def test_criterion_11_unit_normal(rng):
    err, n = 0.0, 0
    fields = [constant(1.3), geodesic_plane(), horosphere_field([0, 1, 0], -0.5)]
    while n < 600:
        x = unit_vectors(rng, 1)[0]
        f = fields[n % 3] + rng.uniform(-1, 1)
        try:
            s = shape_operator(eval_jet(f, x))
        except ValueError:
            continue
        if abs(s.aux["rho"]) > 5:
            continue
        err = max(err, abs(metric_inner(s.position, s.normal.dir, s.normal.dir) - 1))
        n += 1
    for _, _, _, j in _conformal_jets(rng, 45, rho_lim=5.0):
        s = shape_operator(j.shifted(0.3))
        err = max(err, abs(metric_inner(s.position, s.normal.dir, s.normal.dir) - 1))
        n += 1
    ok = err < 1e-9 and n >= 1000
    record(11, ok, f"unit normal: max |<N,N> - 1| = {err:.1e} at {n} samples")
    assert ok


def test_criterion_12_determinism(tmp_path):
    cfg = tmp_path / "verify.json"
    cfg.write_text(json.dumps({"seeds": [7], "tolerances": {"flow_closure": 1e-8}}))
    outs = []
    for i in range(2):
        out = tmp_path / f"report{i}.json"
        code = main(["verify", "--config", str(cfg), "--output", str(out)])
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and code == 0
    record(12, ok, f"determinism: two verify runs byte-identical = {outs[0] == outs[1]}, exit {code}")
    assert ok
