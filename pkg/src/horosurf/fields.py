"""Scalar fields rho on domains of the sphere and their second-order jets.

A field ``rho`` generates the surface Sigma(rho), the outer envelope of the
horospheres H(theta, rho(theta)). Everything downstream needs ``rho`` and its
first and second derivatives at a single point, expressed in the
stereographic chart centered at that point (where gamma = 1 and the chart is
normal to second order). That bundle is a :class:`RhoJet`.

Catalog fields (constant, geodesic plane, horosphere, geodesic) and fields
obtained from conformal maps have exact jets; tabulated fields use centered
finite differences.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from horosurf.errors import ChartError, DomainError
from horosurf.hyperbolic import (
    STANDARD_CHART,
    ChartFrame,
    SpherePoint,
    chart_at,
    check_rho,
)

DEFAULT_INSET = 1e-6
DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class RhoJet:
    """``rho`` and its chart derivatives through second order at a chart center."""

    rho: float
    rx: float
    ry: float
    rxx: float
    rxy: float
    ryy: float
    frame: ChartFrame | None = field(default=None, compare=False, repr=False)

    @property
    def grad(self) -> np.ndarray:
        return np.array([self.rx, self.ry])

    @property
    def hess(self) -> np.ndarray:
        return np.array([[self.rxx, self.rxy], [self.rxy, self.ryy]])

    @property
    def grad_sq(self) -> float:
        """|D rho|^2 with respect to the round metric (gamma = 1 at the center)."""
        return self.rx * self.rx + self.ry * self.ry

    @property
    def laplacian(self) -> float:
        """Round-sphere Laplacian of rho at the chart center."""
        return self.rxx + self.ryy

    def shifted(self, t: float) -> "RhoJet":
        return replace(self, rho=self.rho + t)


# ---------------------------------------------------------------------------
# Domains


def _segment_distances(z: complex, poly: np.ndarray) -> float:
    if len(poly) == 1:
        return float(abs(z - poly[0]))
    a = poly
    b = np.roll(poly, -1)
    ab = b - a
    L2 = np.abs(ab) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(L2 > 0, ((z - a) * np.conj(ab)).real / L2, 0.0)
    s = np.clip(s, 0.0, 1.0)
    return float(np.min(np.abs(z - (a + s * ab))))


def _even_odd(z: complex, polys) -> bool:
    inside = False
    x, y = z.real, z.imag
    for poly in polys:
        if len(poly) < 3:
            continue
        xa, ya = poly.real, poly.imag
        xb, yb = np.roll(xa, -1), np.roll(ya, -1)
        crosses = (ya > y) != (yb > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = xa + (y - ya) * (xb - xa) / (yb - ya)
        inside ^= bool(np.count_nonzero(crosses & (x < xint)) % 2)
    return inside


@dataclass(frozen=True, eq=False)
class PlanarDomain:
    """A region of the plane with sampled boundary components.

    Each boundary component is a closed polyline of complex vertices (the
    last vertex connects back to the first). A single vertex stands for a
    puncture. Components reaching infinity are truncated at a large radius.
    """

    contains: Callable[[complex], bool]
    boundary: tuple = ()
    simply_connected_sides: tuple = ()
    name: str = ""

    def __post_init__(self):
        polys = tuple(np.asarray(p, dtype=complex).reshape(-1) for p in self.boundary)
        object.__setattr__(self, "boundary", polys)
        sides = tuple(self.simply_connected_sides) or (False,) * len(polys)
        if len(sides) != len(polys):
            raise ValueError("one simply_connected_sides flag per boundary component")
        object.__setattr__(self, "simply_connected_sides", sides)

    def distance(self, z: complex) -> tuple[float, list[float]]:
        per = [_segment_distances(complex(z), p) for p in self.boundary]
        return (min(per) if per else np.inf), per

    @classmethod
    def plane(cls) -> "PlanarDomain":
        return cls(lambda z: True, (), (), "plane")

    @classmethod
    def disk(cls, radius: float = 1.0, center: complex = 0j, n: int = 2048) -> "PlanarDomain":
        phi = 2 * np.pi * np.arange(n) / n
        ring = center + radius * np.exp(1j * phi)
        return cls(lambda z: abs(z - center) < radius, (ring,), (True,), f"disk(r={radius})")

    @classmethod
    def annulus(cls, r_inner: float, r_outer: float, n: int = 2048) -> "PlanarDomain":
        phi = 2 * np.pi * np.arange(n) / n
        rings = (r_inner * np.exp(1j * phi), r_outer * np.exp(1j * phi))
        return cls(lambda z: r_inner < abs(z) < r_outer, rings, (True, True),
                   f"annulus({r_inner}, {r_outer})")

    @classmethod
    def from_polylines(cls, polylines, simply_connected_sides=()) -> "PlanarDomain":
        """Region bounded by closed polylines, membership by the even-odd rule."""
        polys = tuple(np.asarray(p, dtype=complex).reshape(-1) for p in polylines)
        return cls(lambda z: _even_odd(complex(z), polys), polys, tuple(simply_connected_sides))


@dataclass(frozen=True, eq=False)
class DomainSpec:
    """A domain of the sphere described through a stereographic chart.

    ``region`` is the domain's image in ``chart``; ``contains_pole`` says
    whether the chart's projection pole (which has no chart image) belongs
    to the domain.
    """

    chart: ChartFrame
    region: PlanarDomain
    contains_pole: bool = False

    def contains(self, p) -> bool:
        try:
            z = self.chart.to_chart(p)
        except ChartError:
            return self.contains_pole
        return bool(self.region.contains(z))

    @property
    def simply_connected_sides(self) -> tuple:
        return self.region.simply_connected_sides

    def boundary_xyz(self) -> list[np.ndarray]:
        return [self.chart.from_chart_xyz(p) for p in self.region.boundary]

    @classmethod
    def whole_sphere(cls) -> "DomainSpec":
        return cls(STANDARD_CHART, PlanarDomain.plane(), contains_pole=True)

    @classmethod
    def cap(cls, axis, angle: float) -> "DomainSpec":
        """Open spherical cap of angular radius ``angle`` about ``axis``."""
        chart = chart_at(axis)
        return cls(chart, PlanarDomain.disk(2.0 * np.tan(0.5 * angle)))

    @classmethod
    def punctured(cls, point) -> "DomainSpec":
        """The sphere minus one point (the pole of the chart at the antipode)."""
        p = point if isinstance(point, SpherePoint) else SpherePoint(point)
        return cls(chart_at(p.antipode()), PlanarDomain.plane())

    @classmethod
    def twice_punctured(cls, axis) -> "DomainSpec":
        """The sphere minus ``axis`` and its antipode."""
        chart = chart_at(axis)
        region = PlanarDomain(lambda z: z != 0, (np.array([0j]),), (False,), "punctured plane")
        return cls(chart, region)

    @classmethod
    def from_csv(cls, path, interior_point, simply_connected_sides=None) -> "DomainSpec":
        """Read boundary polylines from a CSV file with columns component_id, x, y, z.

        Rows of one component are consecutive vertices of a closed polyline on
        the unit sphere. The chart is centered at ``interior_point``; membership
        uses the even-odd rule in that chart.
        """
        comps: dict[str, list] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = {"component_id", "x", "y", "z"} - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"boundary CSV is missing columns {sorted(missing)}")
            for row in reader:
                comps.setdefault(row["component_id"], []).append(
                    [float(row["x"]), float(row["y"]), float(row["z"])])
        chart = chart_at(interior_point)
        polys = []
        for pts in comps.values():
            arr = np.asarray(pts, dtype=float)
            if len(arr) > 1 and np.allclose(arr[0], arr[-1]):
                arr = arr[:-1]
            z = chart.to_chart_many(arr)
            if np.any(np.isnan(z)):
                raise ChartError("boundary passes through the pole of the chart")
            polys.append(z)
        sides = simply_connected_sides if simply_connected_sides is not None else (True,) * len(polys)
        return cls(chart, PlanarDomain.from_polylines(polys, sides))


def boundary_distance(domain, z: complex, chart: ChartFrame | None = None) -> tuple[float, list[float]]:
    """Euclidean distance from chart point ``z`` to the domain boundary, overall and per component."""
    if isinstance(domain, PlanarDomain):
        return domain.distance(z)
    if chart is not None and not chart.same_as(domain.chart):
        raise ChartError("query chart does not match the chart of the domain boundary")
    if not domain.region.boundary:
        raise ValueError("domain has no boundary polylines")
    return domain.region.distance(z)


# ---------------------------------------------------------------------------
# Fields


@dataclass(frozen=True, eq=False, kw_only=True)
class RhoField:
    """Base class: a function on a sphere domain plus an additive offset ``t``.

    Adding a number to a field shifts the offset, which is how the parallel
    flow acts (Sigma(rho)_t = Sigma(rho + t)).
    """

    domain: DomainSpec
    offset: float = 0.0

    def __add__(self, t: float) -> "RhoField":
        return replace(self, offset=self.offset + float(t))

    __radd__ = __add__

    def __sub__(self, t: float) -> "RhoField":
        return self + (-float(t))

    def _jet(self, frame: ChartFrame) -> tuple:
        """(rho, rx, ry, rxx, rxy, ryy) without the offset, in ``frame`` at its center."""
        raise NotImplementedError

    def value(self, p) -> float:
        return self._jet(chart_at(p))[0] + self.offset


@dataclass(frozen=True, eq=False, kw_only=True)
class ConstantField(RhoField):
    c: float

    def _jet(self, frame):
        return (float(self.c), 0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False, kw_only=True)
class AzimuthalField(RhoField):
    """``rho = phi(<X, axis>)``; ``phi`` returns (phi, phi', phi'') of the cosine."""

    axis: np.ndarray
    phi: Callable[[float], tuple]
    kind: str = "azimuthal"

    def _jet(self, frame):
        a = self.axis
        c = float(a @ frame.center.coords)
        dx = float(a @ frame.e1)
        dy = float(a @ frame.e2)
        f0, f1, f2 = self.phi(c)
        # second chart derivatives of X at the center are X_xx = X_yy = -X, X_xy = 0
        return (f0, f1 * dx, f1 * dy, f2 * dx * dx - f1 * c, f2 * dx * dy, f2 * dy * dy - f1 * c)


def _plane_phi(c):
    return -np.log(c), -1.0 / c, 1.0 / (c * c)


def _horo_phi(c):
    u = 1.0 - c
    return -np.log(u), 1.0 / u, 1.0 / (u * u)


def _geodesic_phi(c):
    u = 1.0 - c * c
    return -0.5 * np.log(u), c / u, (1.0 + c * c) / (u * u)


def constant(c: float) -> ConstantField:
    """Generates the metric sphere of radius ``c`` about the origin (a horosphere family of equal rho)."""
    return ConstantField(c=float(c), domain=DomainSpec.whole_sphere())


def geodesic_plane(normal=(0.0, 0.0, -1.0)) -> AzimuthalField:
    """Totally geodesic plane meeting the sphere in the equator orthogonal to ``normal``.

    ``rho = -log cos(theta)`` on the hemisphere about ``normal``.
    """
    n = SpherePoint(normal)
    return AzimuthalField(axis=n.coords, phi=_plane_phi, kind="geodesic_plane",
                          domain=DomainSpec.cap(n, 0.5 * np.pi))


def horosphere_field(tangency=(0.0, 0.0, 1.0), offset: float = 0.0) -> AzimuthalField:
    """Horosphere tangent at ``tangency``: ``rho = -log(1 - cos(theta)) + offset``."""
    q = SpherePoint(tangency)
    return AzimuthalField(axis=q.coords, phi=_horo_phi, kind="horosphere",
                          domain=DomainSpec.punctured(q), offset=float(offset))


def geodesic_field(axis=(0.0, 0.0, 1.0)) -> AzimuthalField:
    """Tube-less geodesic joining ``axis`` and its antipode: ``rho = -log sin(theta)``."""
    a = SpherePoint(axis)
    return AzimuthalField(axis=a.coords, phi=_geodesic_phi, kind="geodesic",
                          domain=DomainSpec.twice_punctured(a))


@dataclass(frozen=True, eq=False, kw_only=True)
class TabulatedField(RhoField):
    """A field given by a callable on sphere points; jets by centered differences."""

    fn: Callable[[np.ndarray], float]
    h: float = DEFAULT_FD_STEP

    def _jet(self, frame):
        h = self.h
        g = lambda z: float(self.fn(frame.from_chart(z).coords))  # noqa: E731
        f0 = g(0j)
        fxp, fxm, fyp, fym = g(h), g(-h), g(1j * h), g(-1j * h)
        fpp, fpm, fmp, fmm = g(h + 1j * h), g(h - 1j * h), g(-h + 1j * h), g(-h - 1j * h)
        return (
            f0,
            (fxp - fxm) / (2 * h),
            (fyp - fym) / (2 * h),
            (fxp - 2 * f0 + fxm) / (h * h),
            (fpp - fpm - fmp + fmm) / (4 * h * h),
            (fyp - 2 * f0 + fym) / (h * h),
        )

    def value(self, p) -> float:
        q = p.coords if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)
        return float(self.fn(q)) + self.offset


def tabulated(fn, domain: DomainSpec | None = None, h: float = DEFAULT_FD_STEP) -> TabulatedField:
    return TabulatedField(fn=fn, h=h, domain=domain or DomainSpec.whole_sphere())


def _mobius_to_0_1_inf(a, b, c):
    return np.array([[b - c, -a * (b - c)], [b - a, -c * (b - a)]], dtype=complex)


def mobius_from_points(zs, ws) -> np.ndarray:
    """Matrix of the Moebius map sending the three points ``zs`` to ``ws``."""
    A = _mobius_to_0_1_inf(*zs)
    B = _mobius_to_0_1_inf(*ws)
    Binv = np.array([[B[1, 1], -B[0, 1]], [-B[1, 0], B[0, 0]]])
    return Binv @ A


_PROBES = (1.0, 1j, -1.0, -1j, 0.5, 0.5j, 2.0, 2j)


def chart_transition(frame: ChartFrame, target: ChartFrame) -> tuple:
    """Value and first three derivatives at z = 0 of the chart change z -> w.

    ``z`` is the coordinate of ``frame``, ``w`` that of ``target``. Chart
    changes between stereographic charts are Moebius maps; this one is fixed
    from three point correspondences.
    """
    w0 = target.to_chart(frame.center)
    zs, ws = [0j], [w0]
    for z in _PROBES:
        try:
            w = target.to_chart(frame.from_chart(z))
        except ChartError:
            continue
        if abs(w) < 1e6 and all(abs(w - u) > 1e-3 for u in ws):
            zs.append(z)
            ws.append(w)
        if len(zs) == 3:
            break
    (a, b), (c, d) = mobius_from_points(zs, ws)
    det = a * d - b * c
    return (b / d, det / d**2, -2 * c * det / d**3, 6 * c * c * det / d**4)


@dataclass(frozen=True, eq=False, kw_only=True)
class ConformalField(RhoField):
    """``rho`` pulled back from the Poincare disk by a (locally univalent) map.

    With ``w`` the coordinate of ``chart`` and ``f`` the map, the hyperbolic
    metric ``4|f'|^2 / (1 - |f|^2)^2 |dw|^2`` equals ``e^{2 rho} dsigma^2``.
    """

    map: object
    chart: ChartFrame = STANDARD_CHART

    def _jet(self, frame):
        T0, T1, T2, T3 = chart_transition(frame, self.chart)
        f0, f1, f2, f3 = self.map.derivs(T0)
        # F = f o T
        F0 = f0
        F1 = f1 * T1
        F2 = f2 * T1**2 + f1 * T2
        F3 = f3 * T1**3 + 3 * f2 * T1 * T2 + f1 * T3
        # log F' (holomorphic): derivatives h1, h2
        h1 = F2 / F1
        h2 = F3 / F1 - h1 * h1
        # v = 1 - |F|^2 and its real derivatives
        v = 1.0 - abs(F0) ** 2
        if v <= 0:
            raise DomainError("|f| >= 1: the map does not land in the unit disk here")
        p1 = F1 * np.conj(F0)
        p2 = F2 * np.conj(F0)
        a1 = abs(F1) ** 2
        vx, vy = -2 * p1.real, 2 * p1.imag
        vxx = -(2 * p2.real + 2 * a1)
        vyy = -(-2 * p2.real + 2 * a1)
        vxy = 2 * p2.imag
        rho = np.log(2.0 * abs(F1) / v)
        rx = h1.real - vx / v
        ry = -h1.imag - vy / v
        # the -log(gamma) term adds 1/2 to rxx and ryy at the center
        rxx = h2.real - vxx / v + vx * vx / v**2 + 0.5
        rxy = -h2.imag - vxy / v + vx * vy / v**2
        ryy = -h2.real - vyy / v + vy * vy / v**2 + 0.5
        return (float(rho), float(rx), float(ry), float(rxx), float(rxy), float(ryy))

    def value_at_chart(self, w: complex) -> float:
        """``rho`` at the point with coordinate ``w`` of the map's own chart."""
        f0, f1, _, _ = self.map.derivs(w)
        gamma = ChartFrame.gamma(w)
        return float(np.log(2.0 * abs(f1) / (gamma * (1.0 - abs(f0) ** 2)))) + self.offset


def conformal_field(conformal_map, chart: ChartFrame = STANDARD_CHART) -> ConformalField:
    domain = DomainSpec(chart, conformal_map.domain)
    return ConformalField(map=conformal_map, chart=chart, domain=domain)


# ---------------------------------------------------------------------------
# Operations


def eval_jet(rho_field: RhoField, p, inset: float = DEFAULT_INSET) -> RhoJet:
    """Jet of ``rho_field`` at ``p`` in the chart centered at ``p``."""
    p = p if isinstance(p, SpherePoint) else SpherePoint(p)
    dom = rho_field.domain
    if not dom.contains(p):
        raise DomainError(f"point {p.coords.tolist()} is outside the field's domain")
    if dom.region.boundary:
        try:
            delta, _ = dom.region.distance(dom.chart.to_chart(p))
        except ChartError:
            delta = np.inf
        if delta < inset:
            raise DomainError(f"point is within {delta:.3g} of the domain boundary (inset {inset:.3g})")
    frame = chart_at(p)
    r, rx, ry, rxx, rxy, ryy = rho_field._jet(frame)
    rho = check_rho(r + rho_field.offset)
    return RhoJet(rho, rx, ry, rxx, rxy, ryy, frame=frame)


def k_infinity_from_jet(jet: RhoJet) -> float:
    return (1.0 - jet.laplacian) * np.exp(-2.0 * jet.rho)


def k_infinity(rho_field: RhoField, p) -> float:
    """Curvature of the limiting metric ``e^{2 rho} dsigma^2``: ``(1 - Lap rho) e^{-2 rho}``."""
    return k_infinity_from_jet(eval_jet(rho_field, p))


def area_density_infinity(rho_field: RhoField, p) -> float:
    """Density ``e^{2 rho}`` of dA_infinity relative to the round area form."""
    return float(np.exp(2.0 * eval_jet(rho_field, p).rho))
