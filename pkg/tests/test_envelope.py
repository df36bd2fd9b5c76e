import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from horosurf.envelope import (
    boundary_gap,
    complex_jet,
    envelope_condition_residual,
    envelope_point,
    fundamental_forms,
    normal_vector,
    shape_closed_form,
    shape_complex_form,
    shape_operator,
    surface_jet,
)
from horosurf.fields import (
    RhoJet,
    constant,
    eval_jet,
    geodesic_field,
    geodesic_plane,
    horosphere_field,
)
from horosurf.hyperbolic import chart_at, horosphere_shape, metric_inner

from conftest import unit_vectors

small = st.floats(-1.5, 1.5)


@st.composite
def jets(draw):
    c = np.array([draw(st.floats(-1, 1)) for _ in range(3)])
    assume(np.linalg.norm(c) > 0.1)
    return RhoJet(draw(st.floats(-1.0, 1.0)), *(draw(small) for _ in range(5)), frame=chart_at(c))


@pytest.mark.parametrize("c", [0.3, 1.0, 2.5])
def test_constant_field_is_metric_sphere(rng, c):
    for p in unit_vectors(rng, 10):
        s = surface_jet(constant(c), p)
        assert s.k1 == pytest.approx(-1 / np.tanh(c), rel=1e-12)
        assert s.umbilic
        assert np.linalg.norm(s.position.coords) == pytest.approx(np.tanh(c / 2), rel=1e-12)


def test_plane_and_horosphere_curvatures(rng):
    for p in unit_vectors(rng, 20):
        if p[2] < -0.1:
            s = surface_jet(geodesic_plane(), p)
            assert abs(s.k1) < 1e-12 and abs(s.k2) < 1e-12 and s.K == pytest.approx(-1)
            # the generated surface is the equatorial disk
            assert abs(s.position.coords[2]) < 1e-12
        if p[2] < 0.9:
            s = surface_jet(horosphere_field(offset=0.4), p)
            assert s.k1 == pytest.approx(-1) and s.k2 == pytest.approx(-1)
            assert abs(s.K) < 1e-12


def test_horosphere_field_lands_on_one_horosphere(rng):
    f = horosphere_field([0, 0, 1], offset=0.2)
    pts = np.array([envelope_point(f, p).coords for p in unit_vectors(rng, 30) if p[2] < 0.9])
    # Euclidean sphere tangent to the boundary at the north pole
    r = 1 - pts[:, 2]
    rad = (pts[:, 0] ** 2 + pts[:, 1] ** 2 + r**2) / (2 * r)
    assert np.ptp(rad) < 1e-12


def test_geodesic_field_is_focal():
    s = surface_jet(geodesic_field(), [0.6, 0, 0.8])
    assert s.focal and np.isnan(s.k1)
    assert np.allclose(s.position.coords[:2], 0, atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(jets())
def test_shape_operator_identities(jet):
    g, Pi, h = fundamental_forms(jet)
    dg = np.linalg.det(g)
    assume(dg > 1e-8)
    s = shape_operator(jet)
    scale = 1.0 + np.abs(s.shape).max()
    assert np.allclose(s.shape, s.shape.T, atol=1e-10 * scale)
    assert np.allclose(shape_closed_form(jet), s.shape, atol=1e-9 * scale)
    assert np.allclose(shape_complex_form(jet), s.shape, atol=1e-9 * scale)
    assert np.allclose(np.linalg.solve(g, Pi), s.shape, atol=1e-8 * scale)
    # Hermitian companion has the trace and determinant of g
    assert np.trace(h).real == pytest.approx(np.trace(g), rel=1e-9, abs=1e-12)
    assert np.linalg.det(h).real == pytest.approx(dg, rel=1e-8, abs=1e-12)
    # signed area element squares to det g, and K sqrt g = K_inf e^{2 rho}
    assert s.sqrt_det_g**2 == pytest.approx(dg, rel=1e-9)
    assert s.K * s.sqrt_det_g == pytest.approx(s.k_inf * np.exp(2 * jet.rho), rel=1e-8, abs=1e-8)


@settings(max_examples=150, deadline=None)
@given(jets())
def test_envelope_point_geometry(jet):
    s = shape_operator(jet)
    R = s.position.coords
    X = jet.frame.center.coords
    hs = horosphere_shape(X, jet.rho)
    assert abs(hs.residual(R)) < 1e-12
    assert np.abs(envelope_condition_residual(jet)).max() < 1e-10
    n = s.normal.dir
    assert metric_inner(R, n, n) == pytest.approx(1.0, abs=1e-10)


def test_normal_matches_offset_derivative(rng):
    f = horosphere_field([0, 0, 1])
    h = 1e-5
    for p in unit_vectors(rng, 5):
        if p[2] > 0.8:
            continue
        d = (envelope_point(f + h, p).coords - envelope_point(f - h, p).coords) / (2 * h)
        assert np.allclose(normal_vector(f, p).dir, d, atol=1e-8)


def test_boundary_gap(rng):
    f = horosphere_field([0, 0, 1], offset=-0.3)
    for p in unit_vectors(rng, 5):
        if p[2] > 0.8:
            continue
        gap = boundary_gap(f, p)
        R = envelope_point(f, p).coords
        assert gap["abs_R_sq"] == pytest.approx(R @ R, abs=1e-13)
        assert gap["gap_sq"] == pytest.approx(np.sum((R - p) ** 2), abs=1e-13)


def test_complex_jet_laplacian():
    j = eval_jet(constant(0.0), [0, 0, 1])
    d1, S, half_lap = complex_jet(j)
    assert d1 == 0 and S == 0 and half_lap == 0


def test_principal_directions_orthonormal(rng):
    f = horosphere_field([0, 0, 1]) + 0.1
    jet = RhoJet(0.3, 0.2, -0.4, 1.1, 0.3, -0.2, frame=chart_at([0, 1, 0]))
    s = shape_operator(jet)
    assert np.allclose(s.dirs @ s.dirs.T, np.eye(2), atol=1e-12)
    for k, v in zip((s.k1, s.k2), s.dirs):
        assert np.allclose(s.shape @ v, k * v, atol=1e-12)
    W = s.dirs_world()
    assert np.allclose(W @ jet.frame.center.coords, 0, atol=1e-12)
    assert f.offset == pytest.approx(0.1)
