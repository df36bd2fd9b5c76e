"""Sample grids, surface meshes, OBJ/CSV export and a self-intersection heuristic."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from horosurf.envelope import shape_operator
from horosurf.errors import DomainError, RangeError
from horosurf.fields import RhoField, eval_jet, DEFAULT_INSET
from horosurf.hyperbolic import ChartFrame, chart_at

RHO_MAX_GRID = 12.0


@dataclass(frozen=True, eq=False)
class SampleGrid:
    chart: ChartFrame
    points: np.ndarray  # complex chart coordinates
    triangles: np.ndarray  # (m, 3) int
    inset: float = DEFAULT_INSET

    def sphere_points(self) -> np.ndarray:
        return self.chart.from_chart_xyz(self.points)


def polar_grid(center, rings: int, sectors: int, max_angle: float,
               inset: float = DEFAULT_INSET) -> SampleGrid:
    """Geodesic-polar grid about ``center`` out to angular radius ``max_angle``.

    Ring j sits at angle max_angle * j / rings; azimuths are offset by half a
    sector so no vertex lies on the chart axes.
    """
    if rings < 1 or sectors < 3:
        raise ValueError("need rings >= 1 and sectors >= 3")
    if not 0 < max_angle < np.pi:
        raise ValueError("max_angle must lie in (0, pi)")
    chart = chart_at(center)
    beta = max_angle * np.arange(1, rings + 1) / rings
    phi = 2 * np.pi * (np.arange(sectors) + 0.5) / sectors
    ring_pts = (2 * np.tan(0.5 * beta))[:, None] * np.exp(1j * phi)[None, :]
    pts = np.concatenate([[0j], ring_pts.ravel()])

    def idx(j, i):
        return 1 + j * sectors + i % sectors

    tris = [(0, idx(0, i), idx(0, i + 1)) for i in range(sectors)]
    for j in range(rings - 1):
        for i in range(sectors):
            a, b = idx(j, i), idx(j, i + 1)
            c, d = idx(j + 1, i), idx(j + 1, i + 1)
            tris.append((a, c, d))
            tris.append((a, d, b))
    return SampleGrid(chart, pts, np.array(tris, dtype=int), inset)


def restrict_grid(grid: SampleGrid, keep: np.ndarray) -> SampleGrid:
    """Drop vertices where ``keep`` is False together with every triangle touching them."""
    keep = np.asarray(keep, dtype=bool)
    new_index = np.cumsum(keep) - 1
    tri_ok = keep[grid.triangles].all(axis=1)
    tris = new_index[grid.triangles[tri_ok]]
    return SampleGrid(grid.chart, grid.points[keep], tris, grid.inset)


def fit_grid(field: RhoField, grid: SampleGrid, rho_max: float = RHO_MAX_GRID) -> tuple[SampleGrid, list]:
    """Validate the grid against the field's domain and drop samples with rho > rho_max.

    Returns the reduced grid and the indices of dropped vertices. Vertices
    outside the domain (or inside the boundary inset) raise DomainError
    listing their indices.
    """
    X = grid.sphere_points()
    bad, keep = [], np.ones(len(X), dtype=bool)
    for i, x in enumerate(X):
        try:
            jet = eval_jet(field, x, inset=grid.inset)
        except DomainError:
            bad.append(i)
            continue
        except RangeError:
            keep[i] = False
            continue
        if jet.rho > rho_max:
            keep[i] = False
    if bad:
        raise DomainError(f"grid vertices outside the domain: {bad}")
    return restrict_grid(grid, keep), [int(i) for i in np.flatnonzero(~keep)]


@dataclass(frozen=True, eq=False)
class MeshOutput:
    vertices: np.ndarray  # (n, 3) ball coordinates
    triangles: np.ndarray  # (m, 3) zero-based
    scalars: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.vertices)
        for k, v in self.scalars.items():
            if len(v) != n:
                raise ValueError(f"scalar column {k!r} has {len(v)} entries for {n} vertices")
        if n and np.max(np.linalg.norm(self.vertices, axis=1)) >= 1.0:
            raise ValueError("mesh vertex outside the open unit ball")


def surface_mesh(field: RhoField, grid: SampleGrid, extra: dict | None = None) -> MeshOutput:
    """Envelope mesh over ``grid`` with per-vertex k1, k2, K, H and focal flag."""
    X = grid.sphere_points()
    verts = np.empty((len(X), 3))
    cols = {k: np.empty(len(X)) for k in ("k1", "k2", "K", "H", "focal")}
    for i, x in enumerate(X):
        sj = shape_operator(eval_jet(field, x, inset=grid.inset))
        verts[i] = sj.position.coords
        cols["k1"][i], cols["k2"][i], cols["K"][i], cols["H"][i] = sj.k1, sj.k2, sj.K, sj.H
        cols["focal"][i] = float(sj.focal)
    if extra:
        cols.update({k: np.asarray(v, dtype=float) for k, v in extra.items()})
    return MeshOutput(verts, grid.triangles.copy(), cols)


def write_obj(path, mesh: MeshOutput) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in mesh.vertices:
            fh.write("v %.17g %.17g %.17g\n" % tuple(v))
        for t in mesh.triangles:
            fh.write("f %d %d %d\n" % tuple(int(i) + 1 for i in t))


def read_obj(path) -> tuple[np.ndarray, np.ndarray]:
    verts, tris = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            tris.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return np.array(verts, dtype=float).reshape(-1, 3), np.array(tris, dtype=int).reshape(-1, 3)


def write_scalars_csv(path, mesh: MeshOutput) -> None:
    names = list(mesh.scalars)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vertex", *names])
        for i in range(len(mesh.vertices)):
            w.writerow([i, *("%.17g" % mesh.scalars[k][i] for k in names)])


# ---------------------------------------------------------------------------
# self-intersection heuristic


def _segment_hits(p0, p1, a, b, c, eps=1e-12):
    """Vectorized segment/triangle intersection (Moller-Trumbore), interior hits only."""
    d = p1 - p0
    e1, e2 = b - a, c - a
    pv = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, pv)
    ok = np.abs(det) > eps
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    tv = p0 - a
    u = np.einsum("ij,ij->i", tv, pv) * inv
    qv = np.cross(tv, e1)
    v = np.einsum("ij,ij->i", d, qv) * inv
    s = np.einsum("ij,ij->i", e2, qv) * inv
    return ok & (u > eps) & (v > eps) & (u + v < 1 - eps) & (s > eps) & (s < 1 - eps)


@dataclass(frozen=True)
class IntersectionReport:
    pairs: list
    candidates: int

    @property
    def clean(self) -> bool:
        return not self.pairs


def mesh_self_intersection(mesh: MeshOutput) -> IntersectionReport:
    """Triangle pairs (not sharing a vertex) that cross, found via a spatial hash."""
    V, T = mesh.vertices, mesh.triangles
    if len(T) < 2:
        return IntersectionReport([], 0)
    tri = V[T]  # (m, 3, 3)
    lo, hi = tri.min(axis=1), tri.max(axis=1)
    cell = max(float(np.max(hi - lo)), 1e-9)
    buckets: dict = {}
    for k in range(len(T)):
        i0 = np.floor(lo[k] / cell).astype(int)
        i1 = np.floor(hi[k] / cell).astype(int)
        for ix in range(i0[0], i1[0] + 1):
            for iy in range(i0[1], i1[1] + 1):
                for iz in range(i0[2], i1[2] + 1):
                    buckets.setdefault((ix, iy, iz), []).append(k)
    cand = set()
    for ks in buckets.values():
        for x in range(len(ks)):
            for y in range(x + 1, len(ks)):
                cand.add((ks[x], ks[y]))
    pairs = np.array(sorted(cand), dtype=int).reshape(-1, 2)
    if len(pairs):
        share = (T[pairs[:, 0], :, None] == T[pairs[:, 1], None, :]).any(axis=(1, 2))
        boxes = np.all(lo[pairs[:, 0]] <= hi[pairs[:, 1]], axis=1) & np.all(lo[pairs[:, 1]] <= hi[pairs[:, 0]], axis=1)
        pairs = pairs[~share & boxes]
    hit = np.zeros(len(pairs), dtype=bool)
    for A, B in ((0, 1), (1, 0)):
        ta, tb = tri[pairs[:, A]], tri[pairs[:, B]]
        for i, j in ((0, 1), (1, 2), (2, 0)):
            hit |= _segment_hits(ta[:, i], ta[:, j], tb[:, 0], tb[:, 1], tb[:, 2])
    found = [(int(a), int(b)) for a, b in pairs[hit]]
    return IntersectionReport(found, int(len(pairs)))
