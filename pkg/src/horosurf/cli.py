"""Command-line front end: ``surface``, ``flow``, ``weingarten`` and ``verify``.

Exit codes: 0 success, 1 configuration error, 2 domain or range error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from horosurf import maps
from horosurf.envelope import fundamental_forms, shape_operator
from horosurf.errors import ConfigError, DomainError, FocalBlowup, RangeError
from horosurf.fields import (
    constant,
    eval_jet,
    geodesic_field,
    geodesic_plane,
    horosphere_field,
)
from horosurf.flow import (
    convexity_class,
    flow_invariants,
    flow_k,
    flow_KH,
    focal_times,
)
from horosurf.hyperbolic import STANDARD_CHART
from horosurf.mesh import (
    RHO_MAX_GRID,
    fit_grid,
    mesh_self_intersection,
    polar_grid,
    surface_mesh,
    write_obj,
    write_scalars_csv,
)
from horosurf.verify import SUITES, dumps_report, run_verify
from horosurf.weingarten import (
    TrajectorySeed,
    curvature_line_trace,
    ratio,
    regularity_classify,
    rho_of_map,
    univalence_bounds,
)

ALLOWED_KEYS = {"field", "map", "grid", "offsets", "alpha", "seeds", "outputs", "tolerances"}

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


def load_config(path) -> dict:
    try:
        cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(cfg) - ALLOWED_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    return cfg


def _req(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing {key!r}")
    return d[key]


def build_map(spec: dict) -> maps.ConformalMapSpec:
    if not isinstance(spec, dict):
        raise ConfigError("map must be an object")
    name = _req(spec, "name", "map")
    if name not in maps.CATALOG:
        raise ConfigError(f"unknown map {name!r}")
    if name == "polynomial":
        return maps.polynomial(_req(spec, "coeffs", "map"), _req(spec, "radius", "map"))
    params = spec.get("params", [])
    try:
        return maps.by_name(name, *params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"map {name!r}: {exc}") from exc


def build_field(spec: dict, map_spec=None):
    if not isinstance(spec, dict):
        raise ConfigError("field must be an object")
    kind = _req(spec, "type", "field")
    try:
        if kind == "constant":
            return constant(_req(spec, "c", "field"))
        if kind == "geodesic_plane":
            return geodesic_plane(spec.get("normal", (0, 0, -1)))
        if kind == "horosphere":
            return horosphere_field(spec.get("tangency", (0, 0, 1)), spec.get("offset", 0.0))
        if kind == "geodesic":
            return geodesic_field(spec.get("axis", (0, 0, 1)))
        if kind == "conformal":
            m = spec.get("map", map_spec)
            if m is None:
                raise ConfigError("conformal field needs a map")
            return rho_of_map(build_map(m))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise ConfigError(f"field {kind!r}: {exc}") from exc
    raise ConfigError(f"unknown field type {kind!r}")


def build_grid(spec: dict | None, default_center=(0.0, 0.0, -1.0)):
    spec = dict(spec or {})
    unknown = set(spec) - {"center", "rings", "sectors", "max_angle", "rho_max", "inset"}
    if unknown:
        raise ConfigError(f"unknown grid keys: {sorted(unknown)}")
    try:
        grid = polar_grid(spec.get("center", default_center), int(spec.get("rings", 12)),
                          int(spec.get("sectors", 24)), float(spec.get("max_angle", 1.0)),
                          float(spec.get("inset", 1e-6)))
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc
    return grid, float(spec.get("rho_max", RHO_MAX_GRID))


def _outputs(cfg: dict, default_prefix: str) -> tuple[Path, str]:
    out = cfg.get("outputs", {})
    d = Path(out.get("dir", "."))
    d.mkdir(parents=True, exist_ok=True)
    return d, out.get("prefix", default_prefix)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _num(x):
    x = float(x)
    return x if np.isfinite(x) else None


# ---------------------------------------------------------------------------


def cmd_surface(cfg: dict) -> int:
    field = build_field(_req(cfg, "field", "config"), cfg.get("map"))
    grid, rho_max = build_grid(cfg.get("grid"))
    grid, dropped = fit_grid(field, grid, rho_max)
    out_dir, prefix = _outputs(cfg, "surface")
    summary = {"dropped_vertices": dropped, "meshes": []}
    for i, t in enumerate(cfg.get("offsets", [0.0])):
        mesh = surface_mesh(field + float(t), grid)
        stem = out_dir / f"{prefix}_{i}"
        write_obj(stem.with_suffix(".obj"), mesh)
        write_scalars_csv(stem.with_suffix(".csv"), mesh)
        summary["meshes"].append({
            "offset": float(t), "obj": stem.with_suffix(".obj").name,
            "vertices": len(mesh.vertices), "triangles": len(mesh.triangles),
            "focal_vertices": int(mesh.scalars["focal"].sum()),
        })
    _write_json(out_dir / f"{prefix}_summary.json", summary)
    return EXIT_OK


def _curvature_report(k1, k2, ts, g0=None, Pi0=None):
    rows = []
    for t in ts:
        row = {"t": float(t)}
        for name, k in (("k1", k1), ("k2", k2)):
            try:
                row[name] = flow_k(k, t)
            except FocalBlowup:
                row[name] = None
        try:
            row["K"], row["H"] = flow_KH(k1 * k2 - 1.0, k1 + k2, t)
        except FocalBlowup:
            row["K"] = row["H"] = None
        rows.append(row)
    events = []
    lo, hi = min(ts), max(ts)
    grid = np.sort(np.asarray(ts, dtype=float))
    for t_star, mult in focal_times(k1, k2):
        if not lo <= t_star <= hi:
            continue
        k = 1.0 / np.tanh(t_star)
        j = int(np.clip(np.searchsorted(grid, t_star), 1, len(grid) - 1))
        a, b = grid[j - 1], grid[j]
        fn = lambda t: np.cosh(t) - k * np.sinh(t)  # noqa: E731
        root = brentq(fn, a, b, xtol=1e-14) if fn(a) * fn(b) < 0 else t_star
        events.append({"t_star": t_star, "multiplicity": mult, "bracketed_root": root,
                       "bracket": [float(a), float(b)]})
    conv = convexity_class(k1, k2)
    rep = {"k1": k1, "k2": k2, "path": rows, "focal_events": events,
           "focal_times": [[t, m] for t, m in focal_times(k1, k2)],
           "convexity": conv.label, "note": conv.note, "no_focal_events": not events}
    if g0 is None:
        g0, Pi0 = np.eye(2), np.diag([k1, k2])
    inv = flow_invariants(g0, Pi0, ts)
    rep["K2g_max_rel_dev"] = inv.K2g_max_rel_dev
    rep["K2g"] = inv.K2g_reference
    return rep


def cmd_flow(cfg: dict) -> int:
    fspec = _req(cfg, "field", "config")
    ts = [float(t) for t in cfg.get("offsets", np.linspace(-1, 1, 21))]
    if not ts:
        raise ConfigError("offsets must be non-empty")
    reports = []
    if isinstance(fspec, dict) and fspec.get("type") == "curvatures":
        for pair in _req(fspec, "pairs", "field"):
            k1, k2 = sorted(float(k) for k in pair)
            reports.append(_curvature_report(k1, k2, ts))
    else:
        field = build_field(fspec, cfg.get("map"))
        grid, rho_max = build_grid(cfg.get("grid"))
        grid, _ = fit_grid(field, grid, rho_max)
        for idx, x in enumerate(grid.sphere_points()):
            jet = eval_jet(field, x, inset=grid.inset)
            sj = shape_operator(jet)
            if sj.focal:
                reports.append({"vertex": idx, "focal": True})
                continue
            g0, Pi0, _ = fundamental_forms(jet)
            rep = _curvature_report(sj.k1, sj.k2, ts, g0, Pi0)
            rep["vertex"] = idx
            reports.append(rep)
    out_dir, prefix = _outputs(cfg, "flow")
    _write_json(out_dir / f"{prefix}.json", {"offsets": ts, "reports": _clean(reports)})
    return EXIT_OK


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def cmd_weingarten(cfg: dict) -> int:
    fmap = build_map(_req(cfg, "map", "config"))
    if not fmap.into_disk:
        raise ConfigError(f"map {fmap.name!r} does not land in the unit disk")
    field = rho_of_map(fmap)
    grid, rho_max = build_grid(cfg.get("grid"), STANDARD_CHART.center.coords)
    grid, dropped = fit_grid(field, grid, rho_max)
    samples = [complex(w) for w in STANDARD_CHART.to_chart_many(grid.sphere_points())]
    s_col = [ratio(fmap, w).s for w in samples]
    out_dir, prefix = _outputs(cfg, "weingarten")
    alphas = [float(a) for a in cfg.get("alpha", [-1.0])]
    if any(a >= 0 for a in alphas):
        raise ConfigError("alpha values must be negative")
    result = {"map": fmap.name, "dropped_vertices": dropped, "alpha": []}
    bounds = univalence_bounds(fmap, samples)
    result["bounds"] = {k: {"samples": c.samples, "worst_margin": c.worst_margin,
                            "violations": len(c.violations)} for k, c in bounds.checks.items()}
    for i, a in enumerate(alphas):
        t = float(-0.5 * np.log(-a)) + 0.0  # no -0.0 in the report
        cls = regularity_classify(fmap, samples, a)
        mesh = surface_mesh(field + t, grid, extra={"s": s_col})
        stem = out_dir / f"{prefix}_alpha{i}"
        write_obj(stem.with_suffix(".obj"), mesh)
        write_scalars_csv(stem.with_suffix(".csv"), mesh)
        inter = mesh_self_intersection(mesh)
        result["alpha"].append({
            "alpha": a, "t": t, "class": cls.label, "sup_s": cls.sup_s, "threshold": cls.threshold,
            "immersed_everywhere": cls.immersed_everywhere,
            "witnesses": [[w.real, w.imag] for w in cls.witnesses],
            "critical_alpha": -cls.critical_alpha, "obj": stem.with_suffix(".obj").name,
            "self_intersections": len(inter.pairs),
        })
    seeds = cfg.get("seeds", [])
    if seeds:
        with open(out_dir / f"{prefix}_trajectories.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed", "step", "x", "y"])
            stops = []
            for si, sd in enumerate(seeds):
                seed = TrajectorySeed(complex(*_req(sd, "z0", "seed")), sd.get("family", "plus"),
                                      float(sd.get("step", 1e-3)), int(sd.get("max_steps", 1000)))
                tr = curvature_line_trace(fmap, seed)
                stops.append(tr.stop)
                for k, z in enumerate(tr.points):
                    w.writerow([si, k, "%.17g" % z.real, "%.17g" % z.imag])
        result["trajectory_stops"] = stops
    _write_json(out_dir / f"{prefix}.json", _clean(result))
    return EXIT_OK


def cmd_verify(args) -> int:
    tolerances, seed = {}, 0
    if args.config:
        cfg = load_config(args.config)
        tolerances = cfg.get("tolerances", {})
        seeds = cfg.get("seeds", [0])
        seed = int(seeds[0]) if isinstance(seeds, list) and seeds else int(seeds or 0)
    if args.suite is not None and args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {list(SUITES)}")
    report = run_verify(args.suite, args.tol, tolerances, seed)
    text = dumps_report(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="horosurf", description="Horosphere envelopes in hyperbolic 3-space")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("surface", "flow", "weingarten"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
    vp = sub.add_parser("verify")
    vp.add_argument("--suite")
    vp.add_argument("--tol", type=float)
    vp.add_argument("--config")
    vp.add_argument("--output")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        cfg = load_config(args.config)
        return {"surface": cmd_surface, "flow": cmd_flow, "weingarten": cmd_weingarten}[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, RangeError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
