"""alpha-Weingarten surfaces from conformal maps.

A locally univalent map f from a planar domain into the unit disk pulls the
hyperbolic metric back to mu |dw|^2 with mu = 4|f'|^2 / (1 - |f|^2)^2. The
field rho with e^{2 rho} dsigma^2 = mu |dw|^2 has K_inf = -1, so Sigma(rho + t)
is alpha-Weingarten with alpha = -e^{-2t}. Its principal curvatures depend
only on the ratio s = |S_f| / mu:

    k_plus = s / (s + 1),   k_minus = s / (s - 1),   K = 1 / (s^2 - 1).

Lines of curvature project to the trajectories of the quadratic
differential S_f dw^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from horosurf.errors import DomainError, FocalBlowup, HorosurfError
from horosurf.fields import PlanarDomain, RhoField, conformal_field, eval_jet
from horosurf.envelope import position_from_jet
from horosurf.flow import flow_k
from horosurf.hyperbolic import STANDARD_CHART, ChartFrame, distance_matrix
from horosurf.maps import ConformalMapSpec

S_FLOOR = 1e-12


def schwarzian(fmap: ConformalMapSpec, w: complex) -> complex:
    f0, f1, f2, f3 = fmap.derivs(w)
    if f1 == 0:
        raise DomainError(f"f' vanishes at {w}")
    q = f2 / f1
    return f3 / f1 - 1.5 * q * q


def mu_hyperbolic(fmap: ConformalMapSpec, w: complex) -> float:
    f0, f1, _, _ = fmap.derivs(w)
    v = 1.0 - abs(f0) ** 2
    if v <= 0:
        raise DomainError(f"|f({w})| >= 1")
    return 4.0 * abs(f1) ** 2 / (v * v)


def rho_of_map(fmap: ConformalMapSpec, chart: ChartFrame = STANDARD_CHART) -> RhoField:
    """Field with e^{2 rho} dsigma^2 equal to the pulled-back hyperbolic metric in ``chart``."""
    return conformal_field(fmap, chart)


@dataclass(frozen=True)
class RatioSample:
    z: complex
    S: complex
    mu: float
    s: float


def ratio(fmap: ConformalMapSpec, w: complex) -> RatioSample:
    S = schwarzian(fmap, w)
    mu = mu_hyperbolic(fmap, w)
    return RatioSample(complex(w), S, mu, abs(S) / mu)


def weingarten_curvatures(s: float, t: float = 0.0) -> tuple[float, float, float]:
    """(k_plus, k_minus, K) of Sigma(rho + t) at a point with ratio ``s``."""
    if s < 0:
        raise ValueError("ratio s must be >= 0")
    if s == 1.0:
        raise FocalBlowup("s = 1: k_minus is infinite at t = 0", 0.0)
    kp = flow_k(s / (s + 1.0), t)
    km = flow_k(s / (s - 1.0), t)
    den = s * s * np.exp(-2.0 * t) - np.cosh(t) ** 2
    if den == 0:
        raise FocalBlowup(f"K blows up at t = {t}", float(t))
    return kp, km, 1.0 / den


def immersion_threshold(alpha: float) -> float:
    """Sigma with alpha = -e^{-2t} is immersed where s < (1 + 1/|alpha|)/2."""
    if not alpha < 0:
        raise ValueError("alpha must be negative")
    return 0.5 * (1.0 + 1.0 / abs(alpha))


def critical_alpha(sup_s: float) -> float:
    """Largest |alpha| for which sup_s stays below the immersion threshold (inf if sup_s <= 1/2)."""
    if sup_s <= 0.5:
        return np.inf
    return 1.0 / (2.0 * sup_s - 1.0)


@dataclass(frozen=True)
class Classification:
    label: str  # a | b | c
    sup_s: float
    alpha: float
    threshold: float
    immersed_everywhere: bool
    witnesses: list = field(default_factory=list)
    critical_alpha: float = np.inf


def regularity_classify(fmap: ConformalMapSpec, samples, alpha: float) -> Classification:
    samples = list(samples)
    if not samples:
        raise HorosurfError("empty sample set")
    thr = immersion_threshold(alpha)
    rs = [ratio(fmap, w) for w in samples]
    sup_s = max(r.s for r in rs)
    label = "a" if sup_s < 0.5 else "b" if sup_s < 1.0 else "c"
    wit = [r.z for r in rs if r.s >= thr]
    return Classification(label, sup_s, alpha, thr, not wit, wit, critical_alpha(sup_s))


# ---------------------------------------------------------------------------
# curvature lines


@dataclass(frozen=True)
class TrajectorySeed:
    z0: complex
    family: str = "plus"
    step: float = 1e-3
    max_steps: int = 1000

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.family not in ("plus", "minus"):
            raise ValueError(f"family must be 'plus' or 'minus', got {self.family!r}")
        if self.family not in ("plus", "minus"):
            raise ValueError("family is 'plus' or 'minus'")


@dataclass(frozen=True, eq=False)
class Trajectory:
    points: np.ndarray
    residuals: np.ndarray  # Im(S dz^2) / (|S| |dz|^2) at each chord midpoint
    stop: str  # boundary | max_steps | singular


def line_direction(S: complex, family: str) -> complex:
    """Unit direction along which S dz^2 is real: positive for plus, negative for minus."""
    if family not in ("plus", "minus"):
        raise ValueError(f"family must be 'plus' or 'minus', got {family!r}")
    v = np.exp(-0.5j * np.angle(S))
    return v if family == "plus" else 1j * v


def _aligned(v: complex, ref: complex) -> complex:
    return -v if (v * np.conj(ref)).real < 0 else v


def curvature_line_trace(fmap: ConformalMapSpec, seed: TrajectorySeed) -> Trajectory:
    dom = fmap.domain
    h = seed.step
    fam = seed.family

    def field_at(z, ref):
        S = schwarzian(fmap, z)
        if abs(S) < S_FLOOR:
            raise _Singular
        v = line_direction(S, fam)
        return v if ref is None else _aligned(v, ref)

    def near_zero(z):
        S = schwarzian(fmap, z)
        if abs(S) < S_FLOOR:
            return True
        d = 1e-5
        try:
            dS = (schwarzian(fmap, z + d) - schwarzian(fmap, z - d)) / (2 * d)
        except DomainError:
            return False
        return dS != 0 and abs(S) / abs(dS) < 10 * h

    z = complex(seed.z0)
    if not dom.contains(z):
        raise DomainError("seed is outside the domain")
    if near_zero(z):
        raise DomainError("seed sits at a zero of the Schwarzian")
    pts = [z]
    res = []
    heading = None
    stop = "max_steps"
    for n in range(seed.max_steps):
        try:
            k1 = field_at(z, heading)
            k2 = field_at(z + 0.5 * h * k1, k1)
            k3 = field_at(z + 0.5 * h * k2, k1)
            k4 = field_at(z + h * k3, k1)
            dz = h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        except _Singular:
            stop = "singular"
            break
        except DomainError:
            dz = None
        if dz is not None and dom.contains(z + dz):
            mid = z + 0.5 * dz
            S = schwarzian(fmap, mid)
            res.append((S * dz * dz).imag / (abs(S) * abs(dz) ** 2))
            z = z + dz
            pts.append(z)
            heading = dz / abs(dz)
            if near_zero(z):
                stop = "singular"
                break
            continue
        stop = "boundary"
        if n == 0:
            raise DomainError("trajectory leaves the domain immediately")
        # refine the exit point by bisection along the current heading
        lo, hi = 0.0, h
        for _ in range(50):
            m = 0.5 * (lo + hi)
            if dom.contains(z + m * heading):
                lo = m
            else:
                hi = m
        if lo > 0:
            pts.append(z + lo * heading)
        break
    return Trajectory(np.array(pts), np.array(res), stop)


class _Singular(Exception):
    pass


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundCheck:
    name: str
    samples: int
    worst_margin: float  # min over samples of 1 - value/bound
    violations: list


@dataclass(frozen=True)
class BoundsReport:
    checks: dict
    flag_falsified: bool  # some violation contradicts the declared univalence flags

    def passed(self) -> bool:
        return all(not c.violations for c in self.checks.values())


def _check(name, pairs, tol):
    margins = [(1.0 - v / b, w) for w, v, b in pairs]
    viol = [w for m, w in margins if m < -tol]
    worst = min((m for m, _ in margins), default=np.inf)
    return BoundCheck(name, len(pairs), worst, viol)


def _is_unit_disk(dom: PlanarDomain) -> bool:
    return dom.name == "disk(r=1.0)"


def univalence_bounds(fmap: ConformalMapSpec, samples, domain: PlanarDomain | None = None,
                      tol: float = 1e-12) -> BoundsReport:
    """Check the Schwarzian and density bounds that apply to ``fmap`` at ``samples``.

    - disk: |S_f| <= 6 (1 - |w|^2)^{-2} for f univalent on the unit disk;
    - onto: |S_f| <= (3/2) mu for f univalent onto the disk;
    - boundary: |S_f| <= 6 delta^{-2} for f locally univalent (single-valued branches on disks);
    - density: mu >= delta^{-2} / 4, and ratio: s <= 24, for maps onto the disk from
      domains whose boundary components all bound simply connected sides.
    """
    dom = domain or fmap.domain
    samples = [complex(w) for w in samples]
    checks = {}
    S = {w: schwarzian(fmap, w) for w in samples}
    if fmap.univalent and _is_unit_disk(dom):
        checks["disk"] = _check("disk", [(w, abs(S[w]), 6.0 / (1 - abs(w) ** 2) ** 2) for w in samples], tol)
    mu = {}
    if fmap.onto_disk:
        mu = {w: mu_hyperbolic(fmap, w) for w in samples}
        if fmap.univalent:
            checks["onto"] = _check("onto", [(w, abs(S[w]), 1.5 * mu[w]) for w in samples], tol)
    if fmap.locally_univalent or fmap.univalent:
        if not dom.boundary:
            raise HorosurfError("boundary bounds need boundary polylines")
        delta = {w: dom.distance(w)[0] for w in samples}
        checks["boundary"] = _check("boundary", [(w, abs(S[w]), 6.0 / delta[w] ** 2) for w in samples], tol)
        if fmap.onto_disk and all(dom.simply_connected_sides):
            checks["density"] = _check("density", [(w, 0.25 / delta[w] ** 2, mu[w]) for w in samples], tol)
            checks["ratio"] = _check("ratio", [(w, abs(S[w]) / mu[w], 24.0) for w in samples], tol)
    falsified = any(c.violations for c in checks.values())
    return BoundsReport(checks, falsified)


def hyperbolic_density_bounds(fmap: ConformalMapSpec, w: complex, domain: PlanarDomain | None = None) -> dict:
    """lambda = 2|f'|/(1 - |f|^2) against delta^{-1}: 1/2 <= lambda delta <= 2 on simply connected domains."""
    dom = domain or fmap.domain
    f0, f1, _, _ = fmap.derivs(w)
    lam = 2.0 * abs(f1) / (1.0 - abs(f0) ** 2)
    delta = dom.distance(w)[0]
    return dict(lam=lam, delta=delta, lower_margin=lam * delta - 0.5, upper_margin=2.0 - lam * delta)


# ---------------------------------------------------------------------------
# disjointness


@dataclass(frozen=True)
class Disjointness:
    min_distance: float
    samples: int
    hypothesis_ok: bool


def _surface_points(fld: RhoField, thetas) -> np.ndarray:
    return np.array([position_from_jet(eval_jet(fld, th)) for th in thetas])


def nested_disjointness(field1: RhoField, field2: RhoField, t: float, samples1, samples2) -> Disjointness:
    """Minimum hyperbolic distance between Sigma_t(field1) and Sigma(field2).

    Requires rho2 < rho1 on the samples of the inner domain.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    for th in samples1:
        if not field2.value(th) < field1.value(th):
            raise HorosurfError("hypothesis rho2 < rho1 fails at a sample")
    a = _surface_points(field1 + t, samples1)
    b = _surface_points(field2, samples2)
    return Disjointness(float(distance_matrix(a, b).min()), len(a) * len(b), True)


def leaf_disjointness(fld: RhoField, t: float, s: float, samples) -> Disjointness:
    """Minimum hyperbolic distance between the leaves Sigma_t and Sigma_s of one field."""
    a = _surface_points(fld + t, samples)
    b = _surface_points(fld + s, samples)
    return Disjointness(float(distance_matrix(a, b).min()), len(a) * len(b), t > s)
