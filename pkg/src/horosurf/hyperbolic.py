"""Primitives of hyperbolic 3-space in the Poincare ball model.

Points of H^3 are points of the open unit ball with the metric
``4|dx|^2 / (1 - |x|^2)^2``; the ideal boundary is the unit sphere. This
module also holds the stereographic charts on the sphere used throughout
the package: the chart centered at ``p`` sends ``p`` to ``z = 0`` and the
round metric pulls back to ``gamma(z)^2 |dz|^2`` with
``gamma = 4 / (4 + |z|^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from horosurf.errors import ChartError, DomainError, RangeError

RHO_MAX = 700.0
NORMALIZATION_TOL = 1e-12
UNIT_SPEED_TOL = 1e-10

_SOUTH = np.array([0.0, 0.0, -1.0])


def _vec3(x) -> np.ndarray:
    if isinstance(x, (SpherePoint, BallPoint)):
        return x.coords
    arr = np.asarray(x, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinates")
    return arr


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """A point of the unit sphere (the ideal boundary of H^3).

    Any nonzero 3-vector is accepted and renormalized.
    """

    coords: np.ndarray

    def __post_init__(self):
        v = _vec3(self.coords)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector onto the sphere")
        v = v / n
        v.setflags(write=False)
        object.__setattr__(self, "coords", v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __repr__(self):
        return f"SpherePoint({self.coords.tolist()})"

    def antipode(self) -> "SpherePoint":
        return SpherePoint(-self.coords)


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A point of the open unit ball."""

    coords: np.ndarray

    def __post_init__(self):
        v = np.array(_vec3(self.coords), dtype=float)
        if float(v @ v) >= 1.0:
            raise DomainError(f"|x| = {np.linalg.norm(v):.17g} is not inside the unit ball")
        v.setflags(write=False)
        object.__setattr__(self, "coords", v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __repr__(self):
        return f"BallPoint({self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector ``dir`` (Euclidean components) based at a ball point."""

    base: BallPoint
    dir: np.ndarray

    def __post_init__(self):
        d = np.array(_vec3(self.dir), dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "dir", d)

    def norm(self) -> float:
        """Hyperbolic length."""
        return float(np.sqrt(metric_inner(self.base, self.dir, self.dir)))


def metric_inner(p, u, v) -> float:
    """Hyperbolic inner product of two tangent vectors at ``p``."""
    x = _vec3(p)
    s = 1.0 - float(x @ x)
    return 4.0 * float(np.dot(u, v)) / (s * s)


def distance(a, b) -> float:
    """Hyperbolic distance between two points of the ball.

    Uses ``d = 2 asinh(|a - b| / sqrt((1 - |a|^2)(1 - |b|^2)))``, which is the
    same as ``cosh d = 1 + 2|a-b|^2 / ((1-|a|^2)(1-|b|^2))`` but keeps full
    relative precision for nearby points.
    """
    x, y = _vec3(a), _vec3(b)
    num = np.linalg.norm(x - y)
    den = np.sqrt((1.0 - x @ x) * (1.0 - y @ y))
    return float(2.0 * np.arcsinh(num / den))


def distance_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise hyperbolic distances between rows of ``a`` (n,3) and ``b`` (m,3)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sa = 1.0 - np.einsum("ij,ij->i", a, a)
    sb = 1.0 - np.einsum("ij,ij->i", b, b)
    diff = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    return 2.0 * np.arcsinh(diff / np.sqrt(sa[:, None] * sb[None, :]))


def mobius_translate(a, x) -> np.ndarray:
    """The ball isometry that sends ``a`` to the origin, applied to ``x``.

    Its inverse is ``mobius_translate(-a, .)``. It extends continuously to the
    closed ball, so ``x`` may lie on the unit sphere.
    """
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    aa = a @ a
    d = x - a
    num = (1.0 - aa) * d - (d @ d) * a
    den = 1.0 - 2.0 * (a @ x) + aa * (x @ x)
    return num / den


def _check_unit(p, v, tol):
    n2 = metric_inner(p, v, v)
    if abs(np.sqrt(n2) - 1.0) > tol:
        raise ValueError(f"tangent vector has hyperbolic length {np.sqrt(n2):.17g}, expected 1")


def geodesic_flow(p, v, t: float, tol: float = UNIT_SPEED_TOL) -> BallPoint:
    """Point at signed distance ``t`` along the unit-speed geodesic through ``p`` with velocity ``v``.

    The geodesic is computed by moving ``p`` to the origin, where geodesics
    are diameters (``tanh(t/2)`` times a unit direction), and moving back.
    """
    if isinstance(v, TangentVector):
        p, v = v.base, v.dir
    x = _vec3(p)
    v = _vec3(v)
    _check_unit(x, v, tol)
    u = v / np.linalg.norm(v)
    q = mobius_translate(-x, np.tanh(0.5 * t) * u)
    if float(q @ q) >= 1.0:
        raise RangeError(f"geodesic point at t={t} is not representable inside the ball")
    return BallPoint(q)


def geodesic_endpoint(p, v) -> SpherePoint:
    """Ideal endpoint ``lim_{t -> inf}`` of the geodesic from ``p`` in direction ``v``."""
    if isinstance(v, TangentVector):
        p, v = v.base, v.dir
    x = _vec3(p)
    v = _vec3(v)
    u = v / np.linalg.norm(v)
    return SpherePoint(mobius_translate(-x, u))


@dataclass(frozen=True, eq=False)
class Horosphere:
    """Horosphere tangent to the sphere at ``tangency`` at signed distance ``rho`` from the origin.

    ``rho > 0`` when the origin lies outside the horosphere.
    """

    tangency: SpherePoint
    rho: float
    euclid_center: np.ndarray
    euclid_radius: float

    @property
    def r(self) -> float:
        return float(np.tanh(0.5 * self.rho))

    def point(self, y) -> np.ndarray:
        """Point of the horosphere corresponding to the unit vector ``y``."""
        return self.euclid_center + self.euclid_radius * np.asarray(y, dtype=float)

    def residual(self, x) -> float:
        """Signed Euclidean distance of ``x`` from the horosphere."""
        return float(np.linalg.norm(np.asarray(x) - self.euclid_center) - self.euclid_radius)


def check_rho(rho: float) -> float:
    rho = float(rho)
    if not np.isfinite(rho) or abs(rho) > RHO_MAX:
        raise RangeError(f"|rho| = {abs(rho):.6g} exceeds the supported range {RHO_MAX}")
    return rho


def horosphere_shape(theta, rho: float) -> Horosphere:
    theta = theta if isinstance(theta, SpherePoint) else SpherePoint(theta)
    rho = check_rho(rho)
    # r = (e^rho - 1)/(e^rho + 1) written overflow-free
    r = np.tanh(0.5 * rho)
    center = 0.5 * (1.0 + r) * theta.coords
    center.setflags(write=False)
    return Horosphere(theta, rho, center, 0.5 * (1.0 - r))


def _rotation_to_south(c: np.ndarray) -> np.ndarray:
    """Minimal rotation sending the unit vector ``c`` to (0, 0, -1)."""
    cos = float(c @ _SOUTH)
    if cos < 0.0:
        # Rodrigues loses accuracy as 1 + cos -> 0: turn by pi about the x axis first
        flip = np.diag([1.0, -1.0, -1.0])
        return _rotation_to_south(flip @ c) @ flip
    v = np.cross(c, _SOUTH)
    k = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + k + k @ k / (1.0 + cos)


@dataclass(frozen=True, eq=False)
class ChartFrame:
    """Stereographic chart centered at ``center``.

    ``rotation`` is a proper rotation sending ``center`` to (0, 0, -1); the
    chart is projection from the antipode of ``center`` with the scaling used
    in the round metric ``16|dz|^2/(4+|z|^2)^2``.
    """

    center: SpherePoint
    rotation: np.ndarray = field(repr=False)

    def __post_init__(self):
        rot = np.array(self.rotation, dtype=float)
        if rot.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        if not np.allclose(rot @ rot.T, np.eye(3), atol=1e-12) or abs(np.linalg.det(rot) - 1) > 1e-12:
            raise ValueError("rotation must be orthogonal with determinant +1")
        if np.linalg.norm(rot @ self.center.coords - _SOUTH) > 1e-12:
            raise ValueError("rotation must send the chart center to (0, 0, -1)")
        rot.setflags(write=False)
        object.__setattr__(self, "rotation", rot)

    @property
    def e1(self) -> np.ndarray:
        """World direction of d/dx at the chart center."""
        return self.rotation[0]

    @property
    def e2(self) -> np.ndarray:
        """World direction of d/dy at the chart center."""
        return self.rotation[1]

    def to_chart(self, q) -> complex:
        v = self.rotation @ _vec3(q)
        v = v / np.linalg.norm(v)
        den = 1.0 - v[2]
        if den < 1e-14:
            raise ChartError("point is the projection pole of this chart")
        return complex(2.0 * v[0] / den, 2.0 * v[1] / den)

    def from_chart(self, z: complex) -> SpherePoint:
        return SpherePoint(self.rotation.T @ _inverse_stereo(z))

    def from_chart_xyz(self, z) -> np.ndarray:
        """Vectorized ``from_chart`` returning an (..., 3) array."""
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        r2 = x * x + y * y
        std = np.stack([4 * x, 4 * y, r2 - 4], axis=-1) / (4 + r2)[..., None]
        return std @ self.rotation

    def to_chart_many(self, q) -> np.ndarray:
        """Vectorized ``to_chart`` for an (n, 3) array; the pole maps to nan."""
        v = np.asarray(q, dtype=float) @ self.rotation.T
        v = v / np.linalg.norm(v, axis=-1, keepdims=True)
        den = 1.0 - v[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            z = 2.0 * (v[..., 0] + 1j * v[..., 1]) / den
        return np.where(den < 1e-14, np.nan + 0j, z)

    @staticmethod
    def gamma(z) -> float:
        """Conformal factor of the round metric: ``dsigma = gamma |dz|``."""
        return 4.0 / (4.0 + abs(z) ** 2)

    def same_as(self, other: "ChartFrame", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.rotation, other.rotation, atol=atol))


def _inverse_stereo(z: complex) -> np.ndarray:
    x, y = float(np.real(z)), float(np.imag(z))
    r2 = x * x + y * y
    return np.array([4 * x, 4 * y, r2 - 4]) / (4 + r2)


def chart_at(p) -> ChartFrame:
    """Stereographic chart centered at the sphere point ``p``."""
    c = p if isinstance(p, SpherePoint) else SpherePoint(p)
    return ChartFrame(c, _rotation_to_south(c.coords))


STANDARD_CHART = chart_at(_SOUTH)


@dataclass(frozen=True)
class ConvexityReport:
    min_second_difference: float
    tolerance: float
    argmin: int
    passed: bool


def cosh_distance_convexity(curve, p, h: float, C: float = 10.0) -> ConvexityReport:
    """Test convexity of ``t -> cosh d(p, c(t))`` along a curve sampled at arc-length step ``h``.

    Second differences are normalized by ``h^2`` (estimates of f''), and the
    check passes when all of them are at least ``-C h^2``.
    """
    pts = np.asarray(curve, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 5:
        raise ValueError("need at least 5 curve samples as an (n, 3) array")
    x = _vec3(p)
    f = np.cosh(distance_matrix(x[None, :], pts)[0])
    d2 = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)
    i = int(np.argmin(d2))
    tol = C * h * h
    return ConvexityReport(float(d2[i]), tol, i + 1, bool(d2[i] >= -tol))
