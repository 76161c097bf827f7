import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su11lab.gaussian import GaussianState, prepare_input
from su11lab.transforms import (
    IDENTITY,
    InputSpec,
    MZISpec,
    SU11Spec,
    SymplecticTransform,
    UnbalancedSpecError,
    apply,
    beam_splitter,
    bogoliubov_to_quadrature,
    compose,
    opa,
    opa_bogoliubov,
    phase_shifter,
    su11_transfer,
)

from conftest import assert_symplectic

angles = st.floats(-2 * np.pi, 2 * np.pi)


@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi])
def test_opa_zero_gain_is_identity(theta):
    np.testing.assert_allclose(opa(0.0, theta).matrix, np.eye(4), atol=1e-15)


def test_opa_matrix_pattern_at_unit_gain():
    ch, sh = math.cosh(1.0), math.sinh(1.0)
    assert (ch, sh) == pytest.approx((1.543081, 1.175201), abs=1e-6)
    expected = np.array([[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]])
    np.testing.assert_allclose(opa(1.0, 0.0).matrix, expected)
    np.testing.assert_allclose(opa(1.0, np.pi).matrix, expected * np.array([[1, 1, -1, -1]] * 2 + [[-1, -1, 1, 1]] * 2),
                               atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 3), angles, angles, st.floats(-np.pi, np.pi))
def test_all_builders_are_symplectic(g, theta, phi, theta_bs):
    for S in (opa(g, theta), phase_shifter(phi), phase_shifter(phi, "both_arms_half"), beam_splitter(theta_bs)):
        assert_symplectic(S.matrix, tol=1e-10 * max(1.0, math.cosh(g) ** 2))


def test_opa_matches_bogoliubov_map():
    for g, theta in [(0.4, 0.0), (0.9, 1.1), (1.3, np.pi)]:
        np.testing.assert_allclose(bogoliubov_to_quadrature(opa_bogoliubov(g, theta)), opa(g, theta).matrix,
                                   atol=1e-13)


def test_phase_shifter_examples():
    np.testing.assert_allclose(phase_shifter(0.0).matrix, np.eye(4))
    S = phase_shifter(np.pi / 2).matrix
    np.testing.assert_allclose(S[:2, :2], [[0, -1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(S[2:, 2:], np.eye(2))
    both = compose([phase_shifter(0.8, "both_arms_half"), phase_shifter(-0.8, "both_arms_half")])
    np.testing.assert_allclose(both.matrix, np.eye(4), atol=1e-15)


def test_phase_shifter_rejects_unknown_placement():
    with pytest.raises(ValueError):
        phase_shifter(0.1, "mode_b")


def test_beam_splitter_examples():
    np.testing.assert_allclose(beam_splitter(0.0).matrix, np.eye(4))
    twice = compose([beam_splitter(np.pi / 4), phase_shifter(0.0), beam_splitter(np.pi / 4)])
    assert_symplectic(twice.matrix)
    # a full swap up to phases: each output mode comes entirely from the other input
    M = twice.matrix
    np.testing.assert_allclose(M[:2, :2], 0, atol=1e-15)
    np.testing.assert_allclose(np.abs(np.linalg.det(M[:2, 2:])), 1.0)


def test_beam_splitter_merges_phased_coherent_pair():
    a = 0.9
    state = GaussianState([0, 2 * a / math.sqrt(2), 2 * a / math.sqrt(2), 0], np.eye(4))
    out = apply(beam_splitter(np.pi / 4), state)
    np.testing.assert_allclose(out.mean[2:], 0, atol=1e-15)
    assert out.mode_photon_number("a") == pytest.approx(a**2)


def test_compose_order_first_acts_first():
    A, B = opa(0.3, 0.2), phase_shifter(0.7)
    np.testing.assert_allclose(compose([A, B]).matrix, B.matrix @ A.matrix)
    np.testing.assert_allclose(compose([]).matrix, IDENTITY.matrix)
    np.testing.assert_allclose((B @ A).matrix, B.matrix @ A.matrix)


def test_inverse():
    S = compose([opa(0.8, 0.4), phase_shifter(1.1), beam_splitter(0.3)])
    np.testing.assert_allclose((S.inverse() @ S).matrix, np.eye(4), atol=1e-12)
    assert S.symplectic_defect() < 1e-12


def test_transform_shape_checked():
    with pytest.raises(ValueError):
        SymplecticTransform(np.eye(3))


@pytest.mark.parametrize("g", [0.0, 0.5, 1.0, 2.5])
def test_balanced_su11_undoes_itself(g):
    np.testing.assert_allclose(SU11Spec.balanced(g, 0.0).transform().matrix, np.eye(4), atol=1e-12 * math.cosh(g) ** 2)


def test_mzi_at_zero_phase_is_identity():
    np.testing.assert_allclose(MZISpec(phi=0.0).transform().matrix, np.eye(4), atol=1e-15)


def test_vacuum_through_opa():
    g = 0.7
    s = apply(opa(g, 0.0), GaussianState.vacuum())
    c2, s2 = math.cosh(2 * g), math.sinh(2 * g)
    expected = np.array([[c2, 0, s2, 0], [0, c2, 0, -s2], [s2, 0, c2, 0], [0, -s2, 0, c2]])
    np.testing.assert_allclose(s.cov, expected, rtol=1e-13, atol=1e-15)
    assert s.mode_photon_number("b") == pytest.approx(math.sinh(g) ** 2)


def test_spec_helpers():
    spec = SU11Spec.balanced(0.5, 0.2, alpha_mag=1.0, r=0.3)
    assert spec.is_balanced()
    assert spec.with_phi(0.9).phi == 0.9
    assert not SU11Spec(g1=0.5, g2=0.6).is_balanced()
    assert InputSpec(2.0, np.pi / 2).alpha == pytest.approx(2j)
    inside = spec.inside_state()
    assert inside.total_photon_number() == pytest.approx(
        2 * math.sinh(0.5) ** 2 + (1 + 2 * math.sinh(0.5) ** 2) * (1 + math.sinh(0.3) ** 2)
    )


def test_transfer_at_zero_phase_is_identity():
    t = su11_transfer(SU11Spec.balanced(1.3, 0.0))
    assert (t.A, t.B, t.G, t.H, t.R) == pytest.approx((1, 0, 1, 1, 0))


def test_transfer_at_pi():
    t = su11_transfer(SU11Spec.balanced(1.0, np.pi))
    assert abs(t.A) == pytest.approx(0, abs=1e-15)
    assert t.B == pytest.approx(np.exp(-0.5j * np.pi))
    assert abs(t.R) == pytest.approx(math.sinh(2.0))
    assert math.sinh(2.0) == pytest.approx(3.62686, abs=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2), st.floats(-np.pi, np.pi))
def test_transfer_agrees_with_quadrature_matrix(g, phi):
    t = su11_transfer(SU11Spec.balanced(g, phi))
    assert abs(t.G) ** 2 - abs(t.R) ** 2 == pytest.approx(1.0, abs=1e-9 * math.cosh(2 * g) ** 2)
    S = SU11Spec.balanced(g, phi).transform().matrix
    np.testing.assert_allclose(bogoliubov_to_quadrature(t.inverse_matrix()), np.linalg.inv(S),
                               atol=1e-10 * math.cosh(2 * g) ** 2)
    np.testing.assert_allclose(bogoliubov_to_quadrature(t.forward_matrix()), S, atol=1e-9 * math.cosh(2 * g) ** 2)


def test_transfer_requires_balance():
    with pytest.raises(UnbalancedSpecError):
        su11_transfer(SU11Spec(g1=1.0, g2=0.5))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1.5), st.floats(0, 2), st.floats(-np.pi, np.pi), st.floats(0, 1), angles)
def test_propagated_states_remain_physical(g, a, ta, r, phi):
    inp = InputSpec(a, ta, r)
    for spec in (SU11Spec.balanced(g, phi, alpha_mag=a, theta_alpha=ta, r=r), MZISpec(phi=phi, input=inp)):
        out = spec.output_state()
        assert out.is_physical(tol=1e-9 * np.abs(out.cov).max())
        assert np.linalg.det(out.cov) == pytest.approx(1.0, rel=1e-6)


def test_prepare_input_matches_inputspec():
    spec = InputSpec(0.5, 0.1, 0.2, 0.3, 0.4j)
    s = spec.state()
    t = prepare_input(0.5, 0.1, 0.2, 0.3, 0.4j)
    np.testing.assert_array_equal(s.mean, t.mean)
    np.testing.assert_array_equal(s.cov, t.cov)
