"""Envelope map R_rho and pointwise extrinsic geometry of Sigma(rho).

All quantities are computed at the center of the stereographic chart
centered at theta, where the round metric is the identity. With

    E = rho_xx + (rho_y^2 - rho_x^2 - 1)/2
    F = rho_xy - rho_x rho_y
    G = rho_yy + (rho_x^2 - rho_y^2 - 1)/2

and A = e^{-rho} [[E, F], [F, G]], the first fundamental form is g = M^2 with
M = e^rho/2 + A, the second is Pi = M (A - e^rho/2), and the shape operator
M^{-1}(A - e^rho/2) is symmetric because both factors are polynomials in A.
The normal points in the direction of increasing offset, i.e. toward the
tangency point theta, so a metric sphere of radius c has k = -coth c.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from horosurf.errors import HorosurfError
from horosurf.fields import RhoField, RhoJet, eval_jet, k_infinity_from_jet
from horosurf.hyperbolic import BallPoint, SpherePoint, TangentVector, horosphere_shape

FOCAL_FLOOR = 1e-10  # |det M| relative to |M|^2
UMBILIC_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SurfaceJet:
    theta: SpherePoint
    position: BallPoint
    normal: TangentVector
    g: np.ndarray
    Pi_low: np.ndarray
    shape: np.ndarray
    k1: float
    k2: float
    dirs: np.ndarray  # rows: unit chart vectors for k1, k2
    K: float
    H: float
    aux: dict = field(default_factory=dict)
    focal: bool = False
    umbilic: bool = False

    @property
    def sqrt_det_g(self) -> float:
        """Signed square root of det g, namely det M (see module docstring)."""
        return self.aux["D"]

    @property
    def k_inf(self) -> float:
        return self.aux["K_inf"]

    def dirs_world(self) -> np.ndarray:
        """Principal directions as tangent vectors of the sphere at theta."""
        fr = self.aux["frame"]
        return self.dirs[:, :1] * fr.e1 + self.dirs[:, 1:] * fr.e2


def _efg(jet: RhoJet):
    rx, ry = jet.rx, jet.ry
    E = jet.rxx + 0.5 * (ry * ry - rx * rx - 1.0)
    F = jet.rxy - rx * ry
    G = jet.ryy + 0.5 * (rx * rx - ry * ry - 1.0)
    return E, F, G


def _m_pair(jet: RhoJet):
    E, F, G = _efg(jet)
    em = np.exp(-jet.rho)
    A = em * np.array([[E, F], [F, G]])
    half = 0.5 * np.exp(jet.rho) * np.eye(2)
    return A + half, A - half


def fundamental_forms(jet: RhoJet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(g, Pi_low, h) at the chart center; h is the Hermitian companion of g."""
    M, Mh = _m_pair(jet)
    g = M @ M
    Pi = M @ Mh
    return g, Pi, hermitian_form(jet)


def complex_jet(jet: RhoJet) -> tuple[complex, complex, float]:
    """(d rho, d^2 rho - (d rho)^2, 2 d dbar rho) in the holomorphic derivative d = (d_x - i d_y)/2."""
    d1 = 0.5 * (jet.rx - 1j * jet.ry)
    d2 = 0.25 * (jet.rxx - jet.ryy - 2j * jet.rxy)
    return d1, d2 - d1 * d1, 0.5 * jet.laplacian


def hermitian_form(jet: RhoJet) -> np.ndarray:
    _, S, lap_half = complex_jet(jet)
    e2 = np.exp(-2.0 * jet.rho)
    p = (lap_half - 0.5) * e2 + 0.5
    q = 2.0 * S * e2
    Hm = np.array([[p, q], [np.conj(q), p]], dtype=complex)
    return np.exp(2.0 * jet.rho) * (Hm @ Hm)


def _det_m(jet: RhoJet, E, F, G) -> float:
    return (E * G - F * F) * np.exp(-2.0 * jet.rho) + 0.25 * np.exp(2.0 * jet.rho) + 0.5 * (E + G)


def shape_closed_form(jet: RhoJet) -> np.ndarray:
    """Shape operator from the real closed form, with lambda = det(e^{-rho}[[E,F],[F,G]]) - e^{2 rho}/4."""
    E, F, G = _efg(jet)
    lam = (E * G - F * F) * np.exp(-2.0 * jet.rho) - 0.25 * np.exp(2.0 * jet.rho)
    T = np.array([[0.5 * (E - G), F], [F, 0.5 * (G - E)]])
    return (T + lam * np.eye(2)) / _det_m(jet, E, F, G)


def shape_complex_form(jet: RhoJet) -> np.ndarray:
    """Same operator written through S = d^2 rho - (d rho)^2."""
    E, F, G = _efg(jet)
    _, S, _ = complex_jet(jet)
    lam = (E * G - F * F) * np.exp(-2.0 * jet.rho) - 0.25 * np.exp(2.0 * jet.rho)
    T = np.array([[2 * S.real, -2 * S.imag], [-2 * S.imag, -2 * S.real]])
    return (T + lam * np.eye(2)) / _det_m(jet, E, F, G)


def _world_grad(jet: RhoJet) -> np.ndarray:
    fr = jet.frame
    return jet.rx * fr.e1 + jet.ry * fr.e2


def _den(jet: RhoJet) -> float:
    return jet.grad_sq + (np.exp(jet.rho) + 1.0) ** 2


def position_from_jet(jet: RhoJet) -> np.ndarray:
    X = jet.frame.center.coords
    u = np.exp(jet.rho)
    a = jet.grad_sq
    return ((a + u * u - 1.0) * X + 2.0 * _world_grad(jet)) / _den(jet)


def normal_from_jet(jet: RhoJet) -> np.ndarray:
    """dR/dt for rho -> rho + t at t = 0, in ball coordinates."""
    X = jet.frame.center.coords
    u = np.exp(jet.rho)
    a = jet.grad_sq
    den = _den(jet)
    num = (a + u * u - 1.0) * X + 2.0 * _world_grad(jet)
    return (2.0 * u * u * den * X - 2.0 * u * (u + 1.0) * num) / den**2


def envelope_point(field: RhoField, theta) -> BallPoint:
    return BallPoint(position_from_jet(eval_jet(field, theta)))


def boundary_gap(field: RhoField, theta) -> dict:
    """|R|^2 and |R - X|^2 from the closed-form identities."""
    jet = eval_jet(field, theta)
    u = np.exp(jet.rho)
    den = _den(jet)
    return {"abs_R_sq": 1.0 - 4.0 * u / den, "gap_sq": 4.0 / den}


def normal_vector(field: RhoField, theta) -> TangentVector:
    jet = eval_jet(field, theta)
    return TangentVector(BallPoint(position_from_jet(jet)), normal_from_jet(jet))


def _sym_eig(S: np.ndarray):
    """Closed-form eigen-decomposition of a symmetric 2x2 matrix, ascending."""
    a, b, d = S[0, 0], 0.5 * (S[0, 1] + S[1, 0]), S[1, 1]
    m = 0.5 * (a + d)
    r = np.hypot(0.5 * (a - d), b)
    k1, k2 = m - r, m + r
    if r < 0.5 * UMBILIC_TOL:
        return k1, k2, np.eye(2), True
    # eigenvector for k2 is (cos phi, sin phi) with tan 2phi = 2b/(a-d)
    phi = 0.5 * np.arctan2(2.0 * b, a - d)
    v2 = np.array([np.cos(phi), np.sin(phi)])
    v1 = np.array([-v2[1], v2[0]])
    return k1, k2, np.vstack([v1, v2]), abs(k2 - k1) < UMBILIC_TOL


def shape_operator(jet: RhoJet, focal_floor: float = FOCAL_FLOOR) -> SurfaceJet:
    """Full pointwise geometry at the chart center of ``jet``."""
    if jet.frame is None:
        raise HorosurfError("jet carries no chart frame")
    g, Pi, _ = fundamental_forms(jet)
    M, Mh = _m_pair(jet)
    E, F, G = _efg(jet)
    D = float(np.linalg.det(M))
    aux = dict(E=E, F=F, G=G, D=D, lam=(E * G - F * F) * np.exp(-2 * jet.rho) - 0.25 * np.exp(2 * jet.rho),
               A=_den(jet), K_inf=k_infinity_from_jet(jet), frame=jet.frame, rho=jet.rho)
    pos = BallPoint(position_from_jet(jet))
    nrm = TangentVector(pos, normal_from_jet(jet))
    theta = jet.frame.center
    if abs(D) <= focal_floor * max(1.0, float(np.sum(M * M))):
        nan2 = np.full((2, 2), np.nan)
        return SurfaceJet(theta, pos, nrm, g, Pi, nan2, np.nan, np.nan, nan2, np.nan, np.nan,
                          aux, focal=True)
    shape = np.linalg.solve(M, Mh)
    asym = abs(shape[0, 1] - shape[1, 0])
    assert asym <= 1e-8 * (1.0 + np.abs(shape).max()), "shape operator lost symmetry"
    k1, k2, dirs, umb = _sym_eig(shape)
    return SurfaceJet(theta, pos, nrm, g, Pi, shape, float(k1), float(k2), dirs,
                      float(k1 * k2 - 1.0), float(k1 + k2), aux, umbilic=umb)


def surface_jet(field: RhoField, theta, focal_floor: float = FOCAL_FLOOR) -> SurfaceJet:
    return shape_operator(eval_jet(field, theta), focal_floor)


def envelope_condition_residual(jet: RhoJet) -> np.ndarray:
    """Residuals of r_i X.Y + (1+r) X_i.Y - r_i for the two chart directions.

    Y is the unit vector from the horosphere center through R; r = tanh(rho/2).
    """
    X = jet.frame.center.coords
    R = position_from_jet(jet)
    hs = horosphere_shape(X, jet.rho)
    Y = (R - hs.euclid_center) / hs.euclid_radius
    r = hs.r
    dr = 0.5 * (1.0 - r * r) * jet.grad
    e = (jet.frame.e1, jet.frame.e2)
    return np.array([dr[i] * (X @ Y) + (1.0 + r) * (e[i] @ Y) - dr[i] for i in range(2)])
