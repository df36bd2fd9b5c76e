"""Parallel flow: curvatures and fundamental forms of Sigma_t, focal times, convexity.

Principal curvatures evolve by dk/dt = k^2 - 1, solved by

    k(t) = (k0 ch t - sh t) / (ch t - k0 sh t),

and the fundamental forms by Pi'' = 4 Pi, g' = -2 Pi. A curvature blows up at
t* with coth t* = k0, which exists iff |k0| > 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from horosurf.errors import FocalBlowup, HorosurfError, RangeError

DENOM_REL_TOL = 1e-12
FOCAL_SKIP = 1e-6


def arccoth(k: float) -> float:
    if abs(k) <= 1.0:
        raise RangeError(f"arccoth needs |k| > 1, got {k}")
    return 0.5 * np.log((k + 1.0) / (k - 1.0))


def flow_k(k0: float, t: float) -> float:
    ch, sh = np.cosh(t), np.sinh(t)
    den = ch - k0 * sh
    if abs(den) <= DENOM_REL_TOL * (ch + abs(k0 * sh)):
        raise FocalBlowup(f"curvature {k0} blows up at t = {t}", arccoth(k0))
    return (k0 * ch - sh) / den


@dataclass(frozen=True)
class CurvaturePath:
    k0: float
    blowup_time: float | None

    def at(self, t: float) -> float:
        return flow_k(self.k0, t)


def curvature_path(k0: float) -> CurvaturePath:
    return CurvaturePath(float(k0), arccoth(k0) if abs(k0) > 1 else None)


def _kh_den(K0, H0, t):
    ch, sh = np.cosh(t), np.sinh(t)
    den = K0 * sh * sh - H0 * sh * ch + (ch * ch + sh * sh)
    scale = abs(K0) * sh * sh + abs(H0 * sh * ch) + ch * ch + sh * sh
    return den, scale, ch, sh


def flow_KH(K0: float, H0: float, t: float) -> tuple[float, float]:
    den, scale, ch, sh = _kh_den(K0, H0, t)
    if abs(den) <= DENOM_REL_TOL * scale:
        raise FocalBlowup(f"K, H blow up at t = {t}", float(t))
    K = K0 / den
    H = (H0 * (sh * sh + ch * ch) - 4 * sh * ch - 2 * K0 * sh * ch) / den
    return K, H


def focal_times(k1: float, k2: float, tol: float = 1e-12) -> list[tuple[float, int]]:
    """Focal offsets t* = arccoth(k_i) for |k_i| > 1, as (t*, multiplicity) sorted by t*."""
    ts = sorted(arccoth(k) for k in (k1, k2) if abs(k) > 1)
    out: list[tuple[float, int]] = []
    for t in ts:
        if out and abs(out[-1][0] - t) <= tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((t, 1))
    return out


@dataclass(frozen=True)
class Convexity:
    label: str  # forward | backward | both | neither
    note: str = ""


def convexity_class(k1: float, k2: float) -> Convexity:
    fwd = k1 <= 1 and k2 <= 1
    bwd = k1 >= -1 and k2 >= -1
    if fwd and bwd:
        return Convexity("both", "all |k_i| <= 1: no self intersections")
    if fwd:
        return Convexity("forward")
    if bwd:
        return Convexity("backward")
    return Convexity("neither")


@dataclass(frozen=True, eq=False)
class FlowState:
    """g(t) = Gamma - e^{2t} Pi_plus + e^{-2t} Pi_minus, Pi(t) = e^{2t} Pi_plus + e^{-2t} Pi_minus."""

    Pi_plus: np.ndarray
    Pi_minus: np.ndarray
    Gamma: np.ndarray
    g0: np.ndarray
    Pi0: np.ndarray

    def evaluate(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        if t == 0:
            return self.g0.copy(), self.Pi0.copy()
        ep, em = np.exp(2.0 * t), np.exp(-2.0 * t)
        Pi = ep * self.Pi_plus + em * self.Pi_minus
        g = self.Gamma - ep * self.Pi_plus + em * self.Pi_minus
        return g, Pi

    def shape(self, t: float) -> np.ndarray:
        g, Pi = self.evaluate(t)
        return np.linalg.solve(g, Pi)

    def curvatures(self, t: float) -> tuple[float, float]:
        ev = np.sort(np.linalg.eigvals(self.shape(t)).real)
        return float(ev[0]), float(ev[1])

    def KH(self, t: float) -> tuple[float, float]:
        g, Pi = self.evaluate(t)
        return np.linalg.det(Pi) / np.linalg.det(g) - 1.0, float(np.trace(np.linalg.solve(g, Pi)))

    def signed_sqrt_det_g(self, t: float) -> float:
        """sqrt(det g0) det(ch t - sh t P0); squares to det g(t) and changes sign at simple focal times."""
        P0 = np.linalg.solve(self.g0, self.Pi0)
        L = np.cosh(t) * np.eye(2) - np.sinh(t) * P0
        return float(np.sqrt(np.linalg.det(self.g0)) * np.linalg.det(L))


def decompose_flow(g0, Pi0) -> FlowState:
    g0 = np.asarray(g0, dtype=float)
    Pi0 = np.asarray(Pi0, dtype=float)
    if abs(np.linalg.det(g0)) < 1e-300 or not np.all(np.isfinite(g0)):
        raise HorosurfError("singular first fundamental form")
    # dPi/dt at 0 is -(Pi g^{-1} Pi + g)
    dPi = -(Pi0 @ np.linalg.solve(g0, Pi0) + g0)
    dPi = 0.5 * (dPi + dPi.T)
    Pp = 0.5 * (Pi0 + 0.5 * dPi)
    Pm = 0.5 * (Pi0 - 0.5 * dPi)
    return FlowState(Pp, Pm, g0 + Pp - Pm, g0, Pi0)


def focal_bracket(state: FlowState, lo: float, hi: float, xtol: float = 1e-14) -> float:
    """Root of the signed area element in [lo, hi]."""
    return brentq(state.signed_sqrt_det_g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def bonnet_partner(H0: float) -> float:
    """Offset t with coth t + tanh t = H0 (|H0| > 2); Sigma_t then has K = 1/sh^2 t."""
    if abs(H0) <= 2.0:
        raise RangeError("constant-K parallel surface requires |H0| > 2")
    a = abs(H0)

    def f(t):
        return 1.0 / np.tanh(t) + np.tanh(t) - a

    hi = 1.0
    while f(hi) >= 0:
        hi *= 2.0
    lo = min(1e-3, 0.5 / a)
    while f(lo) <= 0:
        lo *= 0.5
    t = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(np.copysign(t, H0))


@dataclass(frozen=True)
class FlowInvariants:
    K2g_reference: float
    K2g_max_rel_dev: float
    dK_residual: float
    dH_residual: float
    dg_residual: float
    samples: int
    skipped_focal: int


def flow_invariants(g0, Pi0, ts, h: float = 1e-5) -> FlowInvariants:
    """K^2 det g along the flow plus finite-difference residuals of the K, H, det g equations."""
    st = decompose_flow(g0, Pi0)
    k1, k2 = st.curvatures(0.0)
    foc = [t for t, _ in focal_times(k1, k2)]

    def kh_g(t):
        g, Pi = st.evaluate(t)
        dg = np.linalg.det(g)
        return np.linalg.det(Pi) / dg - 1.0, float(np.trace(np.linalg.solve(g, Pi))), dg

    K0, _, g0d = kh_g(0.0)
    ref = K0 * K0 * g0d
    dev = dK = dH = dG = 0.0
    n = skipped = 0
    for t in ts:
        if any(abs(t - f) < FOCAL_SKIP + 2 * h for f in foc):
            skipped += 1
            continue
        K, H, g = kh_g(t)
        val = (np.linalg.det(st.evaluate(t)[1]) - g) ** 2 / g  # K^2 g without dividing twice
        dev = max(dev, abs(val - ref) / max(abs(ref), 1.0))
        Kp, Hp, gp = kh_g(t + h)
        Km, Hm, gm = kh_g(t - h)
        dK = max(dK, abs((Kp - Km) / (2 * h) - K * H) / max(1.0, abs(K * H)))
        dH = max(dH, abs((Hp - Hm) / (2 * h) - (H * H - 2 * K - 4)) / max(1.0, abs(H * H)))
        dG = max(dG, abs((gp - gm) / (2 * h) + 2 * g * H) / max(1.0, abs(g * H)))
        n += 1
    return FlowInvariants(ref, dev, dK, dH, dG, n, skipped)
