"""Catalog of conformal maps into the unit disk with exact derivatives.

Each :class:`ConformalMapSpec` evaluates ``(f, f', f'', f''')`` at a complex
point of its planar domain. The entries are chosen so that the ratio field
``|S_f| / mu`` covers the interesting ranges: identically zero (identity,
Moebius), the Kraus extremal (Koebe), intermediate values (inverse of a
quadratic polynomial), and multiply connected domains (annulus).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from horosurf.errors import DomainError
from horosurf.fields import PlanarDomain

_FAR = 1e6


@dataclass(frozen=True, eq=False)
class ConformalMapSpec:
    name: str
    derivs_fn: Callable[[complex], tuple]
    domain: PlanarDomain
    univalent: bool = True
    locally_univalent: bool = True
    into_disk: bool = True
    onto_disk: bool = False
    params: dict = field(default_factory=dict)

    def derivs(self, w: complex) -> tuple:
        w = complex(w)
        if not self.domain.contains(w):
            raise DomainError(f"{w} is outside the domain of map {self.name!r}")
        return tuple(complex(v) for v in self.derivs_fn(w))

    def __call__(self, w: complex) -> complex:
        return self.derivs(w)[0]


def _inverse_derivs(z, g1, g2, g3):
    """Derivatives of f = g^{-1} at w = g(z), from those of g at z."""
    f1 = 1.0 / g1
    f2 = -g2 / g1**3
    f3 = (3 * g2 * g2 - g1 * g3) / g1**5
    return z, f1, f2, f3


def identity() -> ConformalMapSpec:
    return ConformalMapSpec("identity", lambda w: (w, 1.0, 0.0, 0.0), PlanarDomain.disk(1.0),
                            onto_disk=True)


def mobius(a, b, c, d, radius: float = 1.0, into_disk: bool = True,
           onto_disk: bool = False) -> ConformalMapSpec:
    """``(a w + b) / (c w + d)`` restricted to the disk ``|w| < radius``."""
    a, b, c, d = (complex(v) for v in (a, b, c, d))
    det = a * d - b * c
    if det == 0:
        raise ValueError("degenerate Moebius coefficients")

    def derivs(w):
        q = c * w + d
        return (a * w + b) / q, det / q**2, -2 * c * det / q**3, 6 * c * c * det / q**4

    return ConformalMapSpec("mobius", derivs, PlanarDomain.disk(radius), into_disk=into_disk,
                            onto_disk=onto_disk, params=dict(a=a, b=b, c=c, d=d, radius=radius))


def scaling(k: float) -> ConformalMapSpec:
    """``w / k`` on ``|w| < k``, onto the disk."""
    return mobius(1.0, 0.0, 0.0, k, radius=k, onto_disk=True)


def disk_automorphism(a: complex, angle: float = 0.0) -> ConformalMapSpec:
    """``e^{i angle} (w - a) / (1 - conj(a) w)``."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError("|a| must be < 1")
    u = np.exp(1j * angle)
    spec = mobius(u, -u * a, -np.conj(a), 1.0, onto_disk=True)
    return ConformalMapSpec("disk_automorphism", spec.derivs_fn, spec.domain,
                            onto_disk=True, params=dict(a=a, angle=angle))


def koebe() -> ConformalMapSpec:
    """Koebe function ``w / (1 - w)^2`` on the unit disk.

    Univalent but not into the disk (its image is the plane minus a slit),
    so it serves Schwarzian bounds, not surface construction.
    """

    def derivs(w):
        u = 1.0 - w
        return w / u**2, (1 + w) / u**3, (4 + 2 * w) / u**4, (18 + 6 * w) / u**5

    return ConformalMapSpec("koebe", derivs, PlanarDomain.disk(1.0), into_disk=False)


def _slit_domain(tip: float) -> PlanarDomain:
    """Plane minus the ray (-inf, tip], boundary drawn as a closed loop around the slit."""
    slit = np.array([tip, -_FAR], dtype=complex)
    return PlanarDomain(lambda w: not (w.imag == 0 and w.real <= tip), (slit,), (True,),
                        f"plane minus (-inf, {tip}]")


def koebe_inverse() -> ConformalMapSpec:
    """Inverse of the Koebe function: the slit plane onto the disk, the Kraus extremal."""

    def derivs(w):
        r = np.sqrt(1.0 + 4.0 * w)  # principal branch, cut along the slit
        z = 2.0 * w / ((2.0 * w + 1.0) + r)
        u = 1.0 - z
        return _inverse_derivs(z, (1 + z) / u**3, (4 + 2 * z) / u**4, (18 + 6 * z) / u**5)

    return ConformalMapSpec("koebe_inverse", derivs, _slit_domain(-0.25), onto_disk=True)


def quadratic_inverse(c: float) -> ConformalMapSpec:
    """Inverse of ``p(z) = z + c z^2`` (0 < c <= 1/2) from ``p(D)`` onto the disk."""
    c = float(c)
    if not 0 < c <= 0.5:
        raise ValueError("need 0 < c <= 1/2 for univalence of z + c z^2 on the disk")
    n = 2048
    zb = np.exp(2j * np.pi * np.arange(n) / n)
    boundary = zb + c * zb * zb

    def branch(w):
        return 2.0 * w / (1.0 + np.sqrt(1.0 + 4.0 * c * w))

    def contains(w):
        return abs(branch(w)) < 1.0 and not (w.imag == 0 and w.real <= -0.25 / c)

    def derivs(w):
        z = branch(w)
        return _inverse_derivs(z, 1 + 2 * c * z, 2 * c, 0.0)

    dom = PlanarDomain(contains, (boundary,), (True,), f"p(D), c={c}")
    return ConformalMapSpec("quadratic_inverse", derivs, dom, onto_disk=True, params=dict(c=c))


def power(p: float) -> ConformalMapSpec:
    """Sector ``|arg w| < pi/(2p)`` onto the disk by ``(w^p - 1)/(w^p + 1)``."""
    p = float(p)
    half = 0.5 * np.pi / p
    if half > np.pi:
        raise ValueError("p must be >= 1/2")
    ray = _FAR * np.exp(1j * half)
    boundary = np.array([0.0, ray, _FAR, np.conj(ray)], dtype=complex)

    def contains(w):
        return w != 0 and abs(np.angle(w)) < half

    def derivs(w):
        # f = (u - 1)/(u + 1), u = w^p
        u = w**p
        u1 = p * u / w
        u2 = p * (p - 1) * u / w**2
        u3 = p * (p - 1) * (p - 2) * u / w**3
        q = u + 1.0
        m1, m2, m3 = 2 / q**2, -4 / q**3, 12 / q**4
        return ((u - 1) / q, m1 * u1, m2 * u1**2 + m1 * u2,
                m3 * u1**3 + 3 * m2 * u1 * u2 + m1 * u3)

    dom = PlanarDomain(contains, (boundary,), (True,), f"sector |arg w| < {half:.6g}")
    return ConformalMapSpec("power", derivs, dom, onto_disk=True, params=dict(p=p))


def strip() -> ConformalMapSpec:
    """Strip ``|Im w| < pi/2`` onto the disk by ``tanh(w/2)``; S = -1/2 constant."""
    h = 0.5 * np.pi
    boundary = np.array([-_FAR + 1j * h, _FAR + 1j * h, _FAR - 1j * h, -_FAR - 1j * h])

    def derivs(w):
        T = np.tanh(0.5 * w)
        s2 = 1.0 - T * T
        return T, 0.5 * s2, -0.5 * T * s2, -0.25 * s2 * (1.0 - 3.0 * T * T)

    dom = PlanarDomain(lambda w: abs(w.imag) < h, (boundary,), (True,), "strip")
    return ConformalMapSpec("strip", derivs, dom, onto_disk=True)


def annulus(r_inner: float, r_outer: float) -> ConformalMapSpec:
    """Locally univalent covering of the annulus ``r_inner < |w| < r_outer`` onto the disk.

    ``xi = i pi log(w / sqrt(r_inner r_outer)) / L`` sends the annulus to the
    strip ``|Im xi| < pi/2`` locally (L = log(r_outer / r_inner)), then
    ``tanh(xi / 2)`` maps onto the disk. Multivalued globally; each local
    branch has the same density and the same |S|.
    """
    r1, r2 = float(r_inner), float(r_outer)
    L = np.log(r2 / r1)
    m = np.sqrt(r1 * r2)
    k = 1j * np.pi / L

    def derivs(w):
        xi = k * np.log(w / m)
        x1, x2, x3 = k / w, -k / w**2, 2 * k / w**3
        T = np.tanh(0.5 * xi)
        s2 = 1.0 - T * T
        t1, t2, t3 = 0.5 * s2, -0.5 * T * s2, -0.25 * s2 * (1.0 - 3.0 * T * T)
        return T, t1 * x1, t2 * x1**2 + t1 * x2, t3 * x1**3 + 3 * t2 * x1 * x2 + t1 * x3

    return ConformalMapSpec("annulus", derivs, PlanarDomain.annulus(r1, r2), univalent=False,
                            onto_disk=True, params=dict(r_inner=r1, r_outer=r2))


def polynomial(coeffs, radius: float) -> ConformalMapSpec:
    """``sum_k coeffs[k] w^k`` on ``|w| < radius``.

    Declared univalent on that disk; whether it maps into the unit disk is
    checked on a boundary sample.
    """
    c = np.asarray(coeffs, dtype=complex)
    P = np.polynomial.Polynomial(c)
    P1, P2, P3 = P.deriv(1), P.deriv(2), P.deriv(3)

    def derivs(w):
        return P(w), P1(w), P2(w), P3(w)

    ring = radius * np.exp(2j * np.pi * np.arange(512) / 512)
    into = bool(np.max(np.abs(P(ring))) < 1.0)
    return ConformalMapSpec("polynomial", derivs, PlanarDomain.disk(radius), into_disk=into,
                            params=dict(coeffs=c.tolist(), radius=radius))


CATALOG = {
    "identity": identity,
    "mobius": mobius,
    "scaling": scaling,
    "disk_automorphism": disk_automorphism,
    "koebe": koebe,
    "koebe_inverse": koebe_inverse,
    "quadratic_inverse": quadratic_inverse,
    "power": power,
    "strip": strip,
    "annulus": annulus,
    "polynomial": polynomial,
}


def by_name(name: str, *params, **kw) -> ConformalMapSpec:
    try:
        ctor = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown map {name!r}; choose from {sorted(CATALOG)}") from None
    return ctor(*params, **kw)
