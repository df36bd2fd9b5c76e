"""Seeded invariant suites behind ``horosurf verify``.

Each check returns the worst error over its samples; a record passes when
that error is within tolerance. Reports contain no timing or environment
data, so a fixed seed yields byte-identical JSON.
"""

from __future__ import annotations

import json
from typing import Callable

import numpy as np

from horosurf import maps
from horosurf.envelope import (
    fundamental_forms,
    normal_from_jet,
    position_from_jet,
    shape_closed_form,
    shape_operator,
    envelope_condition_residual,
)
from horosurf.fields import (
    constant,
    eval_jet,
    geodesic_field,
    geodesic_plane,
    horosphere_field,
    k_infinity_from_jet,
    tabulated,
)
from horosurf.flow import arccoth, decompose_flow, flow_k, focal_bracket, flow_invariants
from horosurf.hyperbolic import (
    STANDARD_CHART,
    chart_at,
    distance,
    geodesic_flow,
    metric_inner,
    mobius_translate,
)
from horosurf.weingarten import (
    TrajectorySeed,
    curvature_line_trace,
    ratio,
    rho_of_map,
    schwarzian,
    weingarten_curvatures,
)

SUITES = ("hyperbolic_core", "sphere_fields", "envelope", "parallel_flow", "weingarten_conformal")

DEFAULT_TOLERANCES = {
    "mobius_isometry": 1e-10,
    "geodesic_unit_speed": 1e-10,
    "chart_roundtrip": 1e-12,
    "offset_commutation": 0.0,
    "fd_consistency": 1e-7,
    "hyperbolic_metric_equation": 1e-8,
    "sphere_curvature": 1e-8,
    "unit_normal": 1e-9,
    "curvature_form": 1e-8,
    "hermitian_trace_det": 1e-9,
    "closed_form_shape": 1e-9,
    "envelope_condition": 1e-8,
    "asymptotic_metric": 1e-6,
    "flow_closure": 1e-8,
    "dk_dt": 1e-6,
    "focal_root": 1e-10,
    "K2g_invariance": 1e-9,
    "convexity_preservation": 1e-12,
    "kraus_koebe": 1e-9,
    "cross_module_curvatures": 1e-6,
    "weingarten_relation": 1e-7,
    "schwarzian_cocycle": 1e-9,
    "trajectory_residual": 1e-6,
    "ratio_mobius_invariance": 1e-10,
}


def _sphere(rng, n):
    x = rng.normal(size=(n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _ball(rng, n, rmax=0.9):
    d = _sphere(rng, n)
    return d * (rmax * rng.uniform(0, 1, size=(n, 1)) ** (1 / 3))


def _disk(rng, n, r):
    return r * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


# --- hyperbolic_core


def _mobius_isometry(rng):
    a, x, y = _ball(rng, 50), _ball(rng, 50), _ball(rng, 50)
    err = [abs(distance(mobius_translate(a[i], x[i]), mobius_translate(a[i], y[i])) - distance(x[i], y[i]))
           for i in range(50)]
    return max(err), 50


def _geodesic_unit_speed(rng):
    p = _ball(rng, 50, 0.8)
    err = []
    for i in range(50):
        v = rng.normal(size=3)
        v *= 0.5 * (1 - p[i] @ p[i]) / np.linalg.norm(v)
        t = rng.uniform(-2, 2)
        err.append(abs(distance(p[i], geodesic_flow(p[i], v, t)) - abs(t)))
    return max(err), 50


def _chart_roundtrip(rng):
    X = _sphere(rng, 100)
    err = 0.0
    for x in X:
        ch = chart_at(_sphere(rng, 1)[0])
        if x @ ch.center.coords > 0.99:
            continue
        err = max(err, np.linalg.norm(ch.from_chart(ch.to_chart(x)).coords - x))
    return err, 100


# --- sphere_fields


def _catalog():
    return [constant(0.4), geodesic_plane(), horosphere_field(offset=0.2), geodesic_field()]


def _interior(rng, fld, n, rho_lim=None):
    out = []
    for _ in range(10000 * n):
        if len(out) == n:
            break
        x = _sphere(rng, 1)[0]
        try:
            j = eval_jet(fld, x)
        except Exception:
            continue
        if rho_lim is None or abs(j.rho - fld.offset) <= rho_lim:
            out.append(x)
    return out


def _offset_commutation(rng):
    err, n = 0.0, 0
    for fld in _catalog():
        for x in _interior(rng, fld, 10):
            t = rng.uniform(-2, 2)
            a, b = eval_jet(fld, x), eval_jet(fld + t, x)
            # rho may differ by the rounding of one re-associated sum; grad and hess must match bitwise
            ulp = 2.0 * np.spacing(max(abs(a.rho), abs(b.rho), abs(t)))
            err = max(err, max(0.0, abs(b.rho - (a.rho + t)) - ulp),
                      np.max(np.abs(a.grad - b.grad)), np.max(np.abs(a.hess - b.hess)))
            n += 1
    return err, n


def _fd_consistency(rng):
    err, n = 0.0, 0
    for fld in _catalog():
        tab = tabulated(lambda q, f=fld: f.value(q), fld.domain)
        for x in _interior(rng, fld, 10, rho_lim=0.5):
            a, b = eval_jet(fld, x), eval_jet(tab, x)
            va = np.array([a.rho, a.rx, a.ry, a.rxx, a.rxy, a.ryy])
            vb = np.array([b.rho, b.rx, b.ry, b.rxx, b.rxy, b.ryy])
            err = max(err, np.max(np.abs(va - vb)))
            n += 1
    return err, n


def _conformal_fields():
    return [rho_of_map(maps.identity()), rho_of_map(maps.polynomial([0, 1, 0.1], 0.9)),
            rho_of_map(maps.quadratic_inverse(0.45)), rho_of_map(maps.strip())]


def _conformal_points(rng, fld, n):
    dom = fld.map.domain
    out = []
    for _ in range(10000 * n):
        if len(out) == n:
            break
        w = complex(*rng.uniform(-1.5, 1.5, 2))
        if dom.contains(w) and dom.distance(w)[0] > 0.05:
            out.append(STANDARD_CHART.from_chart(w).coords)
    return out


def _hyperbolic_metric_equation(rng):
    err, n = 0.0, 0
    for fld in _conformal_fields():
        for x in _conformal_points(rng, fld, 25):
            err = max(err, abs(k_infinity_from_jet(eval_jet(fld, x)) + 1.0))
            n += 1
    return err, n


# --- envelope


def _sphere_curvature(rng):
    err, n = 0.0, 0
    for c in (0.5, 1.0, 2.0):
        for x in _sphere(rng, 20):
            sj = shape_operator(eval_jet(constant(c), x))
            err = max(err, abs(sj.k1 + 1 / np.tanh(c)), abs(sj.k2 + 1 / np.tanh(c)),
                      abs(np.linalg.norm(sj.position.coords) - np.tanh(c / 2)))
            n += 1
    return err, n


def _all_fields():
    return _catalog() + _conformal_fields()


def _points(rng, fld, n):
    if hasattr(fld, "map"):
        return _conformal_points(rng, fld, n)
    return _interior(rng, fld, n, rho_lim=3.0)


def _unit_normal(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 10):
            j = eval_jet(fld, x)
            N = normal_from_jet(j)
            err = max(err, abs(metric_inner(position_from_jet(j), N, N) - 1.0))
            n += 1
    return err, n


def _curvature_form(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 10):
            j = eval_jet(fld, x)
            sj = shape_operator(j)
            ref = sj.k_inf * np.exp(2 * j.rho)
            err = max(err, abs(sj.K * sj.sqrt_det_g - ref) / max(1.0, abs(ref)))
            n += 1
    return err, n


def _hermitian_trace_det(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 10):
            j = eval_jet(fld, x)
            g, _, h = fundamental_forms(j)
            tg, dg = np.trace(g), np.linalg.det(g)
            err = max(err, abs(np.trace(h).real - tg) / max(1.0, abs(tg)),
                      abs(np.linalg.det(h).real - dg) / max(1.0, abs(dg)))
            n += 1
    return err, n


def _closed_form_shape(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 10):
            j = eval_jet(fld, x)
            sj = shape_operator(j)
            if sj.focal:
                continue
            err = max(err, np.max(np.abs(shape_closed_form(j) - sj.shape)) / max(1.0, np.max(np.abs(sj.shape))))
            n += 1
    return err, n


def _envelope_condition(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 10):
            err = max(err, np.max(np.abs(envelope_condition_residual(eval_jet(fld, x)))))
            n += 1
    return err, n


def _asymptotic_metric(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 5):
            j = eval_jet(fld, x)
            g, _, _ = fundamental_forms(eval_jet(fld + 10.0, x))
            lim = np.exp(2 * j.rho)
            err = max(err, np.max(np.abs(4 * np.exp(-20.0) * g - lim * np.eye(2))) / lim)
            n += 1
    return err, n


# --- parallel_flow


def _flow_closure(rng):
    err, n = 0.0, 0
    for fld in _all_fields():
        for x in _points(rng, fld, 5):
            j = eval_jet(fld, x)
            g0, P0, _ = fundamental_forms(j)
            if abs(np.linalg.det(g0)) < 1e-10:
                continue
            st = decompose_flow(g0, P0)
            k1, k2 = shape_operator(j).k1, shape_operator(j).k2
            for t in (-1.0, -0.5, 0.5, 1.0):
                if min(abs(np.cosh(t) - k * np.sinh(t)) for k in (k1, k2)) < 1e-3:
                    continue
                gt, Pt, _ = fundamental_forms(eval_jet(fld + t, x))
                ge, Pe = st.evaluate(t)
                scale = max(1.0, np.max(np.abs(gt)), np.max(np.abs(Pt)))
                err = max(err, np.max(np.abs(gt - ge)) / scale, np.max(np.abs(Pt - Pe)) / scale)
                n += 1
    return err, n


def _dk_dt(rng):
    h = 1e-4
    err = 0.0
    k0s = rng.uniform(-0.95, 0.95, 100)
    for k0 in k0s:
        t = rng.uniform(-2, 2)
        k = flow_k(k0, t)
        err = max(err, abs((flow_k(k0, t + h) - flow_k(k0, t - h)) / (2 * h) - (k * k - 1)))
    return err, len(k0s)


def _focal_root(rng):
    err = 0.0
    ks = (1.5, 2.0, 5.0)
    for k0 in ks:
        other = rng.uniform(-0.9, 0.9)
        st = decompose_flow(np.eye(2), np.diag([k0, other]))
        ts = arccoth(k0)
        err = max(err, abs(focal_bracket(st, 0.5 * ts, 2 * ts) - ts))
    return err, len(ks)


def _random_forms(rng, kmax=0.9):
    Q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    k = rng.uniform(-kmax, kmax, 2)
    A = rng.normal(size=(2, 2))
    g0 = A @ A.T + 0.5 * np.eye(2)
    L = np.linalg.cholesky(g0)
    # Pi0 = g0 P with P self-adjoint for g0
    S = Q @ np.diag(k) @ Q.T
    return g0, L @ S @ L.T


def _K2g_invariance(rng):
    err = 0.0
    for _ in range(20):
        g0, P0 = _random_forms(rng)
        rep = flow_invariants(g0, P0, np.linspace(-3, 3, 61))
        err = max(err, rep.K2g_max_rel_dev)
    return err, 20


def _convexity_preservation(rng):
    err = 0.0
    ks = rng.uniform(-1, 1, 200)
    for k0 in ks:
        for t in np.linspace(-5, 5, 21):
            err = max(err, abs(flow_k(k0, t)) - 1.0)
    return max(err, 0.0), len(ks)


# --- weingarten_conformal


def _kraus_koebe(rng):
    r = ratio(maps.koebe(), 0.0)
    return abs(abs(r.S) - 1.5 * r.mu), 1


def _cross_module(rng, t_list=(0.0,)):
    err, n = 0.0, 0
    for m in (maps.identity(), maps.polynomial([0, 1, 0.1], 0.9)):
        fld = rho_of_map(m)
        dom = m.domain
        for w in _disk(rng, 40, 0.85):
            if not dom.contains(w):
                continue
            x = STANDARD_CHART.from_chart(w)
            r = ratio(m, w)
            kp, km, _ = weingarten_curvatures(r.s)
            sj = shape_operator(eval_jet(fld, x))
            err = max(err, abs(sj.k1 - min(kp, km)), abs(sj.k2 - max(kp, km)))
            n += 1
    return err, n


def _weingarten_relation(rng):
    err, n = 0.0, 0
    for m in (maps.identity(), maps.polynomial([0, 1, 0.1], 0.9), maps.quadratic_inverse(0.45)):
        fld = rho_of_map(m)
        for x in _conformal_points(rng, fld, 15):
            for t in (0.0, 0.5):
                sj = shape_operator(eval_jet(fld + t, x))
                a = -np.exp(-2 * t)
                err = max(err, abs((1 - a) * sj.K - a * (2 - sj.H)))
                n += 1
    return err, n


def _schwarzian_cocycle(rng):
    err, n = 0.0, 0
    base = [maps.koebe(), maps.polynomial([0, 1, 0.2, 0.05], 0.9), maps.strip()]
    for f in base:
        for _ in range(10):
            # Moebius m mapping a small disk into f's domain
            a = complex(*rng.uniform(-0.3, 0.3, 2))
            c = complex(*rng.uniform(-0.2, 0.2, 2))
            z = complex(*rng.uniform(-0.2, 0.2, 2))
            q = c * z + 1.0
            mz = (z + a) / q
            dm = (1.0 - a * c) / q**2
            if not f.domain.contains(mz):
                continue
            f0, f1, f2, f3 = f.derivs(mz)
            m2 = -2 * c * (1.0 - a * c) / q**3
            m3 = 6 * c * c * (1.0 - a * c) / q**4
            g1 = f1 * dm
            g2 = f2 * dm**2 + f1 * m2
            g3 = f3 * dm**3 + 3 * f2 * dm * m2 + f1 * m3
            Sg = g3 / g1 - 1.5 * (g2 / g1) ** 2
            ref = schwarzian(f, mz) * dm**2
            err = max(err, abs(Sg - ref) / max(1.0, abs(ref)))
            n += 1
    return err, n


def _trajectory_residual(rng):
    err, n = 0.0, 0
    m = maps.power(2.0)
    for z0, fam in ((2.0, "plus"), (1.0, "minus"), (1.5 + 0.5j, "plus"), (1.5 + 0.5j, "minus")):
        tr = curvature_line_trace(m, TrajectorySeed(z0, fam, 1e-3, 500))
        err = max(err, float(np.max(np.abs(tr.residuals))))
        n += len(tr.residuals)
    return err, n


def _ratio_mobius_invariance(rng):
    err, n = 0.0, 0
    for m in (maps.quadratic_inverse(0.45), maps.koebe_inverse()):
        for _ in range(10):
            # precompose with a scaling-rotation-translation of the parameter
            lam = 0.5 + rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            b = complex(*rng.uniform(-0.3, 0.3, 2))
            u = complex(*rng.uniform(-0.2, 0.2, 2))
            w = lam * u + b
            if not m.domain.contains(w):
                continue
            f0, f1, f2, f3 = m.derivs(w)
            g1, g2, g3 = f1 * lam, f2 * lam**2, f3 * lam**3
            S = g3 / g1 - 1.5 * (g2 / g1) ** 2
            mu = 4 * abs(g1) ** 2 / (1 - abs(f0) ** 2) ** 2
            err = max(err, abs(abs(S) / mu - ratio(m, w).s))
            n += 1
    return err, n


CHECKS: dict[str, list[tuple[str, Callable]]] = {
    "hyperbolic_core": [
        ("mobius_isometry", _mobius_isometry),
        ("geodesic_unit_speed", _geodesic_unit_speed),
        ("chart_roundtrip", _chart_roundtrip),
    ],
    "sphere_fields": [
        ("offset_commutation", _offset_commutation),
        ("fd_consistency", _fd_consistency),
        ("hyperbolic_metric_equation", _hyperbolic_metric_equation),
    ],
    "envelope": [
        ("sphere_curvature", _sphere_curvature),
        ("unit_normal", _unit_normal),
        ("curvature_form", _curvature_form),
        ("hermitian_trace_det", _hermitian_trace_det),
        ("closed_form_shape", _closed_form_shape),
        ("envelope_condition", _envelope_condition),
        ("asymptotic_metric", _asymptotic_metric),
    ],
    "parallel_flow": [
        ("flow_closure", _flow_closure),
        ("dk_dt", _dk_dt),
        ("focal_root", _focal_root),
        ("K2g_invariance", _K2g_invariance),
        ("convexity_preservation", _convexity_preservation),
    ],
    "weingarten_conformal": [
        ("kraus_koebe", _kraus_koebe),
        ("cross_module_curvatures", _cross_module),
        ("weingarten_relation", _weingarten_relation),
        ("schwarzian_cocycle", _schwarzian_cocycle),
        ("trajectory_residual", _trajectory_residual),
        ("ratio_mobius_invariance", _ratio_mobius_invariance),
    ],
}


def run_verify(suite: str | None = None, tol: float | None = None,
               tolerances: dict | None = None, seed: int = 0) -> dict:
    """Run the selected suite (or all) and return the report dictionary."""
    if suite is not None and suite not in CHECKS:
        raise KeyError(f"unknown suite {suite!r}; choose from {list(CHECKS)}")
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(tolerances or {})
    records = []
    for name in SUITES:
        if suite is not None and name != suite:
            continue
        for inv, fn in CHECKS[name]:
            rng = np.random.default_rng([seed, len(records)])
            worst, n = fn(rng)
            tv = tol if tol is not None else tols[inv]
            records.append({
                "suite": name,
                "invariant": inv,
                "samples": int(n),
                "worst_error": float(worst),
                "worst_margin": float(tv - worst),
                "tolerance": float(tv),
                "pass": bool(worst <= tv),
            })
    return {"seed": seed, "records": records, "pass": all(r["pass"] for r in records)}


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
