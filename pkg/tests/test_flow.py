import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from horosurf.envelope import shape_operator, surface_jet
from horosurf.errors import FocalBlowup, RangeError
from horosurf.fields import RhoJet, constant, eval_jet, horosphere_field
from horosurf.flow import (
    arccoth,
    bonnet_partner,
    convexity_class,
    curvature_path,
    decompose_flow,
    flow_invariants,
    flow_k,
    flow_KH,
    focal_bracket,
    focal_times,
)
from horosurf.hyperbolic import chart_at


def _forms(jet):
    s = shape_operator(jet)
    return s.g, s.Pi_low, s


@st.composite
def jets(draw):
    v = st.floats(-1.2, 1.2)
    return RhoJet(draw(st.floats(-0.8, 0.8)), *(draw(v) for _ in range(5)), frame=chart_at([0.2, -0.5, 0.8]))


def test_flow_k_examples():
    assert flow_k(0.0, 0.0) == 0.0
    assert flow_k(1.0, 3.0) == pytest.approx(1.0)
    assert flow_k(-1.0, -2.0) == pytest.approx(-1.0)
    assert flow_k(0.0, 1.0) == pytest.approx(-np.tanh(1.0))


def test_flow_k_blowup():
    with pytest.raises(FocalBlowup) as exc:
        flow_k(2.0, arccoth(2.0))
    assert exc.value.t_star == pytest.approx(0.5 * np.log(3.0))


def test_arccoth_domain():
    with pytest.raises(RangeError):
        arccoth(0.5)
    assert 1 / np.tanh(arccoth(-3.0)) == pytest.approx(-3.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.95, 0.95), st.floats(-3, 3))
def test_flow_k_ode(k0, t):
    h = 1e-4
    k = flow_k(k0, t)
    d = (flow_k(k0, t + h) - flow_k(k0, t - h)) / (2 * h)
    assert d == pytest.approx(k * k - 1, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-2, 2), st.floats(-2, 2))
def test_flow_k_group_law(k0, s, t):
    if abs(k0) > 1:
        ts = arccoth(k0)
        assume(min(abs(s - ts), abs(s + t - ts)) > 1e-2)
    try:
        two_step = flow_k(flow_k(k0, s), t)
        one_step = flow_k(k0, s + t)
    except FocalBlowup:
        return
    assert two_step == pytest.approx(one_step, rel=1e-8, abs=1e-8)


def test_curvature_path():
    assert curvature_path(0.5).blowup_time is None
    p = curvature_path(-2.0)
    assert p.blowup_time == pytest.approx(-0.5 * np.log(3.0))
    assert p.at(0.1) == pytest.approx(flow_k(-2.0, 0.1))


def test_focal_times_multiplicity():
    assert focal_times(0.5, -0.3) == []
    ft = focal_times(3.0, 3.0)
    assert len(ft) == 1 and ft[0][1] == 2
    ft = focal_times(-2.0, 4.0)
    assert [m for _, m in ft] == [1, 1] and ft[0][0] < 0 < ft[1][0]


def test_convexity_classes():
    assert convexity_class(0.5, -0.5).label == "both"
    assert convexity_class(0.5, -2.0).label == "forward"
    assert convexity_class(1.5, 0.0).label == "backward"
    assert convexity_class(1.5, -1.5).label == "neither"


@settings(max_examples=60, deadline=None)
@given(jets(), st.floats(-1.0, 1.0))
def test_flow_state_matches_offset_field(jet, t):
    g0, Pi0, s0 = _forms(jet)
    assume(np.linalg.det(g0) > 1e-6)
    st_ = decompose_flow(g0, Pi0)
    g, Pi = st_.evaluate(t)
    shifted = shape_operator(jet.shifted(t))
    scale = 1.0 + np.abs(shifted.g).max() + np.abs(shifted.Pi_low).max()
    assert np.allclose(g, shifted.g, atol=1e-9 * scale)
    assert np.allclose(Pi, shifted.Pi_low, atol=1e-9 * scale)
    # each curvature follows its own path (order can swap after passing through infinity)
    try:
        expect = sorted(flow_k(k0, t) for k0 in (s0.k1, s0.k2))
    except FocalBlowup:
        return
    assume(np.linalg.det(g) > 1e-6)
    assert np.allclose(sorted(st_.curvatures(t)), expect, rtol=1e-6, atol=1e-6)


def test_flow_KH_matches_state():
    jet = eval_jet(horosphere_field([0, 0, 1]), [0.3, 0.4, -np.sqrt(0.75)]).shifted(0.2)
    jet = RhoJet(jet.rho, jet.rx + 0.3, jet.ry, jet.rxx + 0.7, jet.rxy - 0.2, jet.ryy, frame=jet.frame)
    g0, Pi0, s0 = _forms(jet)
    st_ = decompose_flow(g0, Pi0)
    for t in np.linspace(-1.5, 1.5, 13):
        try:
            K, H = flow_KH(s0.K, s0.H, t)
        except FocalBlowup:
            continue
        K2, H2 = st_.KH(t)
        assert K == pytest.approx(K2, rel=1e-8, abs=1e-9)
        assert H == pytest.approx(H2, rel=1e-8, abs=1e-9)


def test_focal_bracket_and_signed_area():
    s = shape_operator(RhoJet(0.2, 0.1, 0.0, 1.4, 0.3, -0.6, frame=chart_at([1, 0, 0])))
    st_ = decompose_flow(s.g, s.Pi_low)
    assert abs(st_.signed_sqrt_det_g(0.0)) == pytest.approx(abs(s.sqrt_det_g))
    for (t_star, mult) in focal_times(s.k1, s.k2):
        assert mult == 1
        t = focal_bracket(st_, t_star - 0.05, t_star + 0.05)
        assert t == pytest.approx(t_star, abs=1e-12)


def test_umbilic_focal_root_has_no_sign_change():
    # metric sphere: both curvatures blow up together at the center, t = -c
    s = surface_jet(constant(1.0), [0, 0, 1])
    st_ = decompose_flow(s.g, s.Pi_low)
    assert focal_times(s.k1, s.k2) == [(pytest.approx(-1.0), 2)]
    assert st_.signed_sqrt_det_g(-1.0) == pytest.approx(0.0, abs=1e-12)
    assert st_.signed_sqrt_det_g(-1.2) > 0 and st_.signed_sqrt_det_g(-0.8) > 0


def test_bonnet_partner():
    assert bonnet_partner(2.5) == pytest.approx(0.5 * np.log(3.0), abs=1e-14)
    assert bonnet_partner(-2.5) == pytest.approx(-0.5 * np.log(3.0), abs=1e-14)
    with pytest.raises(RangeError):
        bonnet_partner(1.5)
    t = bonnet_partner(3.7)
    assert 1 / np.tanh(t) + np.tanh(t) == pytest.approx(3.7)


def test_flow_invariants_report():
    g0 = np.array([[1.3, 0.2], [0.2, 0.9]])
    Pi0 = np.array([[1.6, 0.1], [0.1, -0.4]])
    inv = flow_invariants(g0, Pi0, np.linspace(-2, 2, 41))
    assert inv.samples + inv.skipped_focal == 41
    assert inv.K2g_max_rel_dev < 1e-9
    assert max(inv.dK_residual, inv.dH_residual, inv.dg_residual) < 1e-6
