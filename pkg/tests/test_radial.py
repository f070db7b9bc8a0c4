import math

import numpy as np
import pytest

from hydrogenoid import specfun
from hydrogenoid.errors import ParameterError, TraceError
from hydrogenoid.greens import phi_norm_sq
from hydrogenoid.radial import (ALPHA_INF, FOUR_PI, BoundaryTrace, CoulombParams, ExtensionBeta,
                                alpha_from_beta, beta_from_alpha, boundary_trace, classification_coeffs,
                                default_frame, extension_violation, fundamental_system,
                                ground_state_bound, in_extension_domain, krein_constant,
                                make_frame, parse_extended, phi, wronskian)


@pytest.mark.parametrize("text", ["inf", "Inf", "+inf", math.inf, ALPHA_INF])
def test_parse_infinity(text):
    assert parse_extended(text) is ALPHA_INF


@pytest.mark.parametrize("text", ["-inf", "nan", "abc", -math.inf])
def test_parse_rejects(text):
    with pytest.raises(ParameterError):
        parse_extended(text)


def test_parse_number():
    assert parse_extended("1.5") == 1.5
    assert parse_extended(-2) == -2.0


def test_params_validation():
    with pytest.raises(ParameterError):
        CoulombParams(0.0)
    params = CoulombParams(-1, "inf")
    assert params.is_friedrichs
    assert CoulombParams(-1, 0.25).alpha == 0.25


def test_frame_values(attractive_frame):
    assert attractive_frame.lam == 2.0
    assert attractive_frame.eta == 1.0
    assert attractive_frame.gamma_factor == pytest.approx(math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("nu, kappa", [(-1.0, -0.5), (1.0, 0.5), (-1.0, 1.0), (-1.0, 0.0), (0.0, 0.5)])
def test_frame_rejects(nu, kappa):
    with pytest.raises(ParameterError):
        make_frame(nu, kappa)


def test_default_frame():
    assert default_frame(-3.0).kappa == 0.5
    assert default_frame(2.0).kappa == -0.5


@pytest.mark.parametrize("nu, kappa", [(-1.0, 0.5), (-2.0, 0.25), (1.0, -0.7)])
def test_radial_wronskian(nu, kappa):
    frame = make_frame(nu, kappa)
    r = np.array([0.05, 0.5, 3.0, 12.0])
    F, Phi, dF, dPhi = fundamental_system(frame, r)
    np.testing.assert_allclose(Phi * dF - F * dPhi, wronskian(frame), rtol=1e-9)
    assert wronskian(frame) == pytest.approx(frame.lam / frame.gamma_factor, rel=1e-14)


def test_fundamental_system_scalar(attractive_frame):
    F, Phi, _, _ = fundamental_system(attractive_frame, 1.0)
    assert isinstance(F, float)
    assert Phi == pytest.approx(phi(attractive_frame, 1.0), rel=1e-13)


def test_trace_of_synthetic_function():
    nu, g0, g1, c = -1.0, 0.7, -1.3, 0.4

    def g(r):
        return g0 * (1 + nu * r * np.log(r) + 0.5 * nu * nu * r * r * np.log(r)) + g1 * r + c * r * r

    trace = boundary_trace(g, nu)
    assert trace.g0 == pytest.approx(g0, rel=1e-10)
    assert trace.g1 == pytest.approx(g1, rel=1e-7)


def test_trace_of_sampled_values():
    nu = 2.0
    r = np.geomspace(1e-6, 1e-2, 81)
    values = 1 + nu * r * np.log(r) + 0.5 * nu * nu * r * r * np.log(r) + 3.0 * r
    trace = boundary_trace(values, nu, r=r)
    assert trace.g0 == pytest.approx(1.0, rel=1e-10)
    assert trace.g1 == pytest.approx(3.0, rel=1e-6)


@pytest.mark.parametrize("nu, kappa", [(-1.0, 0.5), (-1.0, 0.25), (1.0, -0.7)])
def test_trace_of_phi_gives_krein_constant(nu, kappa):
    frame = make_frame(nu, kappa)
    trace = boundary_trace(lambda r: phi(frame, r), nu)
    assert trace.g0 == pytest.approx(1 / frame.gamma_factor, rel=1e-9)
    assert trace.alpha_implied == pytest.approx(krein_constant(nu, kappa), rel=1e-5, abs=1e-8)


def test_trace_rejects_non_adjoint_function():
    with pytest.raises(TraceError):
        boundary_trace(np.sqrt, -1.0)


def test_classification_coefficients(attractive_frame):
    norm = phi_norm_sq(attractive_frame)
    c, d = classification_coeffs(attractive_frame, norm)
    gamma_factor = attractive_frame.gamma_factor
    assert c == pytest.approx(gamma_factor * norm, rel=1e-14)
    assert gamma_factor * d / FOUR_PI == pytest.approx(krein_constant(-1.0, 0.5), rel=1e-12)
    with pytest.raises(ParameterError):
        classification_coeffs(attractive_frame, 0.0)


def test_alpha_beta_maps(attractive_frame):
    norm = phi_norm_sq(attractive_frame)
    assert alpha_from_beta(0.0, attractive_frame, norm) == krein_constant(-1.0, 0.5)
    assert beta_from_alpha(krein_constant(-1.0, 0.5), attractive_frame, norm) == 0.0
    assert alpha_from_beta("inf", attractive_frame, norm) is ALPHA_INF
    for beta in (-3.0, 0.7, 12.0):
        alpha = alpha_from_beta(beta, attractive_frame, norm)
        assert beta_from_alpha(alpha, attractive_frame, norm) == pytest.approx(beta, rel=1e-12)


def test_alpha_matches_classification_formula(attractive_frame):
    norm = phi_norm_sq(attractive_frame)
    c, d = classification_coeffs(attractive_frame, norm)
    beta = 1.7
    expected = attractive_frame.gamma_factor * (c * beta + d) / FOUR_PI
    assert alpha_from_beta(beta, attractive_frame, norm) == pytest.approx(expected, rel=1e-12)


def test_ground_state_bound(attractive_frame):
    assert ground_state_bound(attractive_frame, 2.0) == 1.0
    assert ground_state_bound(attractive_frame, "inf") is ALPHA_INF


def test_extension_domain_membership():
    params = CoulombParams(-1.0, 0.3)
    assert in_extension_domain(BoundaryTrace(1.0, FOUR_PI * 0.3), params)
    assert not in_extension_domain(BoundaryTrace(1.0, FOUR_PI * 0.3 + 1.0), params)
    friedrichs = CoulombParams(-1.0, "inf")
    assert in_extension_domain(BoundaryTrace(0.0, 1.0), friedrichs)
    assert not in_extension_domain(BoundaryTrace(0.1, 1.0), friedrichs)
    violation, scale = extension_violation(BoundaryTrace(2.0, 0.0), CoulombParams(-1.0, 1.0))
    assert violation == pytest.approx(FOUR_PI * 2.0)
    assert scale > violation


def test_alpha_implied_of_vanishing_g0():
    assert BoundaryTrace(0.0, 1.0).alpha_implied is ALPHA_INF
    assert BoundaryTrace(2.0, FOUR_PI).alpha_implied == pytest.approx(0.5)


def test_krein_constant_closed_form():
    # nu = -1, kappa = 1/2: -(psi(1/2) + ln 2 + 2 gamma - 1 + 1) / (4 pi)
    expected = -(specfun.digamma(0.5) + math.log(2.0) + 2 * specfun.EULER_GAMMA) / FOUR_PI
    assert krein_constant(-1.0, 0.5) == pytest.approx(expected, rel=1e-13)


def test_extension_beta_labels(attractive_frame, repulsive_frame):
    norm = phi_norm_sq(attractive_frame)
    label = ExtensionBeta.from_alpha(0.4, attractive_frame, norm)
    assert label.alpha(norm) == pytest.approx(0.4, rel=1e-12)
    assert not label.is_friedrichs
    assert ExtensionBeta("inf", repulsive_frame).is_friedrichs
    assert ExtensionBeta("inf", repulsive_frame).alpha(1.0) is ALPHA_INF


def test_alpha_is_frame_independent():
    first, second = make_frame(-1.0, 0.3), make_frame(-1.0, 0.6)
    norm_first, norm_second = phi_norm_sq(first), phi_norm_sq(second)
    c1, d1 = classification_coeffs(first, norm_first)
    c2, d2 = classification_coeffs(second, norm_second)
    beta_first = 1.3
    alpha = first.gamma_factor * (c1 * beta_first + d1) / FOUR_PI
    # the same extension carries a different label in the second frame
    beta_second = (FOUR_PI * alpha / second.gamma_factor - d2) / c2
    assert beta_second != pytest.approx(beta_first, rel=1e-3)
    assert ExtensionBeta(beta_first, first).alpha(norm_first) == pytest.approx(alpha, rel=1e-8)
    assert ExtensionBeta(beta_second, second).alpha(norm_second) == pytest.approx(alpha, rel=1e-8)
    relabelled = ExtensionBeta.from_alpha(alpha, second, norm_second)
    assert relabelled.beta == pytest.approx(beta_second, rel=1e-8)


def test_trace_is_linear(attractive_frame):
    nu = -1.0

    def g(r):
        return 0.7 * (1 + nu * r * np.log(r) + 0.5 * nu * nu * r * r * np.log(r)) - 1.3 * r + 0.4 * r * r

    def h(r):
        return phi(attractive_frame, r)

    a, b = 2.5, -0.8
    trace_g, trace_h = boundary_trace(g, nu), boundary_trace(h, nu)
    combined = boundary_trace(lambda r: a * g(r) + b * h(r), nu)
    assert combined.g0 == pytest.approx(a * trace_g.g0 + b * trace_h.g0, rel=1e-9)
    assert combined.g1 == pytest.approx(a * trace_g.g1 + b * trace_h.g1, rel=1e-6)
