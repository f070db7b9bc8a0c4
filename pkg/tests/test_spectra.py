import math

import numpy as np
import pytest

from hydrogenoid.errors import DomainError, ParameterError, PoleError
from hydrogenoid.greens import phi_norm_sq
from hydrogenoid.radial import (CoulombParams, alpha_from_beta, ground_state_bound, krein_constant,
                                make_frame)
from hydrogenoid.spectra import (PLUS, SpectralPoint, alpha_limits, alpha_threshold,
                                 assemble_spectrum, check_interlacing, f_nu_kappa, fibration_data,
                                 hydrogen_level, is_positive, s_from_energy, solve_interval,
                                 solve_positive_nu, spectral_function, spectral_function_s)


def test_threshold_against_mpmath(mp):
    expected = (mp.log(1) + 2 * mp.euler - 1) / (4 * mp.pi)
    assert alpha_threshold(1.0) == pytest.approx(float(expected), rel=1e-14)


def test_threshold_vanishes():
    assert alpha_threshold(math.exp(1 - 2 * 0.5772156649015329)) == pytest.approx(0.0, abs=1e-15)


def test_threshold_domain():
    with pytest.raises(DomainError):
        alpha_threshold(-1.0)


def test_spectral_function_against_mpmath(mp):
    nu, E = -1.0, -0.09
    k = mp.sqrt(-mp.mpf(E))
    expected = nu / (4 * mp.pi) * (mp.digamma(1 + nu / (2 * k)) + mp.log(2 * k) + 2 * mp.euler - 1 - k / nu)
    assert spectral_function(nu, E) == pytest.approx(float(expected), rel=1e-13)


def test_spectral_function_tends_to_threshold():
    assert spectral_function(1.0, -1e-12) == pytest.approx(alpha_threshold(1.0), abs=1e-6)


def test_spectral_function_errors():
    with pytest.raises(DomainError):
        spectral_function(-1.0, 0.0)
    with pytest.raises(PoleError):
        spectral_function(-1.0, -0.25)
    with pytest.raises(ParameterError):
        spectral_function(0.0, -1.0)
    with pytest.raises(DomainError):
        spectral_function_s(-1.0, -0.5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_spectral_function_pole_signs(n):
    assert spectral_function_s(-1.0, n - 1e-6) > 1e3
    assert spectral_function_s(-1.0, n + 1e-6) < -1e3


@pytest.mark.parametrize("nu, kappa", [(-1.0, 0.5), (1.0, -0.7)])
def test_krein_constant_is_spectral_function_at_shift(nu, kappa):
    frame = make_frame(nu, kappa)
    assert f_nu_kappa(frame) == pytest.approx(spectral_function(nu, -frame.eta), rel=1e-13)


@pytest.mark.parametrize("kappa", [-0.01, -0.1, -1.0, -10.0])
def test_krein_constant_below_threshold(kappa):
    assert f_nu_kappa(make_frame(1.0, kappa)) < alpha_threshold(1.0)


def test_friedrichs_levels():
    report = assemble_spectrum(CoulombParams(-1.0, "inf"), n_max=5)
    assert report.energies == [-0.25 / (n * n) for n in range(1, 6)]
    assert report.friedrichs_reference == report.energies
    assert all(point.residual == 0.0 for point in report.points)


def test_roots_against_mpmath(mp):
    report = assemble_spectrum(CoulombParams(-1.0, 0.0), n_max=3)

    def f(s):
        return mp.digamma(1 - s) + mp.log(1 / s) + 2 * mp.euler - 1 + 1 / (2 * s)

    for point in report.points:
        s = mp.findroot(f, mp.mpf(s_from_energy(-1.0, point.E)))
        assert point.n_index - 1 < s < point.n_index
        assert point.E == pytest.approx(float(-1 / (4 * s * s)), rel=1e-10)
        assert point.residual <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 5])
def test_root_monotone_in_alpha(n):
    energies = [solve_interval(-1.0, alpha, n).E for alpha in (-3.0, -0.5, 0.0, 0.5, 3.0)]
    assert np.all(np.diff(energies) > 0)


@pytest.mark.parametrize("alpha", [-2.0, 0.0, 3.0])
def test_interlacing(alpha):
    report = assemble_spectrum(CoulombParams(-1.0, alpha), n_max=8)
    assert check_interlacing(report.points, -1.0)
    for point in report.points:
        lower, upper = alpha_limits(-1.0, point.n_index)
        assert lower < point.E < upper
        assert point.bracket[0] <= point.E <= point.bracket[1]


def test_interlacing_detects_violation():
    points = [SpectralPoint(-0.2, 1, 0.0, (-0.3, -0.1))]
    assert not check_interlacing(points, -1.0)
    points = [SpectralPoint(-0.3, 1, 0.0, (-0.4, -0.26)), SpectralPoint(-0.26, 2, 0.0, (-0.3, -0.2))]
    assert not check_interlacing(points, -1.0)


def test_positive_coupling_threshold():
    threshold = alpha_threshold(1.0)
    below = assemble_spectrum(CoulombParams(1.0, threshold - 0.01))
    assert len(below.points) == 1
    assert below.points[0].n_index == PLUS
    assert below.points[0].E < 0
    above = assemble_spectrum(CoulombParams(1.0, threshold + 0.01))
    assert above.points == []
    assert "no negative eigenvalue" in above.note
    assert solve_positive_nu(1.0, "inf") is None


def test_positive_coupling_monotone():
    threshold = alpha_threshold(1.0)
    energies = [solve_positive_nu(1.0, alpha).E for alpha in (-2.0, -1.0, 0.0, threshold - 1e-3)]
    assert np.all(np.diff(energies) > 0)


def test_positive_coupling_root_satisfies_equation():
    point = solve_positive_nu(2.0, -1.0)
    assert spectral_function(2.0, point.E) == pytest.approx(-1.0, abs=1e-10)


def test_krein_constant_places_eigenvalue_at_shift():
    frame = make_frame(-1.0, 0.5)
    report = assemble_spectrum(CoulombParams(-1.0, krein_constant(-1.0, 0.5)), n_max=3)
    assert report.points[0].E == pytest.approx(-frame.eta, rel=1e-9)


@pytest.mark.parametrize("kappa", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("beta", [-2.0, 0.0, 0.5, 4.0])
def test_ground_state_below_beta_bound(kappa, beta):
    frame = make_frame(-1.0, kappa)
    alpha = alpha_from_beta(beta, frame, phi_norm_sq(frame))
    ground = solve_interval(-1.0, alpha, 1).E
    slack = 1e-9 * (1 + abs(beta))
    assert ground <= ground_state_bound(frame, beta) + slack
    assert ground <= beta + slack


def test_vanishing_coupling_limit():
    report = assemble_spectrum(CoulombParams(-1e-8, -1.0), n_max=1)
    assert report.points[0].E == pytest.approx(-16 * math.pi ** 2, rel=1e-4)


def test_solver_argument_checks():
    with pytest.raises(ParameterError):
        solve_interval(1.0, 0.0, 1)
    with pytest.raises(ParameterError):
        solve_interval(-1.0, 0.0, 0)
    with pytest.raises(ParameterError):
        solve_interval(-1.0, 0.0, 1, tol=0.0)
    with pytest.raises(ParameterError):
        solve_positive_nu(-1.0, 0.0)
    with pytest.raises(ParameterError):
        assemble_spectrum(CoulombParams(-1.0, 0.0), n_max=0)


def test_alpha_limits_and_positivity():
    assert alpha_limits(-1.0, 1) == (-math.inf, -0.25)
    assert alpha_limits(-1.0, 2) == (-0.25, -0.0625)
    assert alpha_limits(1.0) == (-math.inf, 0.0)
    assert is_positive(1.0, "inf")
    assert is_positive(1.0, alpha_threshold(1.0) + 1e-3)
    assert not is_positive(1.0, 0.0)
    assert not is_positive(-1.0, "inf")
    assert hydrogen_level(-2.0, 2) == -0.25


def test_fibration_curves():
    grid = np.linspace(-2.0, 2.0, 5)
    rows = fibration_data(-1.0, grid, n_max=3)
    assert len(rows) == 15
    assert all(row.error is None for row in rows)
    for n in (1, 2, 3):
        energies = [row.E for row in rows if row.n == n]
        assert np.all(np.diff(energies) > 0)
        lower, upper = alpha_limits(-1.0, n)
        assert all(lower < E < upper for E in energies)


def test_fibration_single_alpha_matches_spectrum():
    rows = fibration_data(-1.0, [0.3], n_max=4)
    report = assemble_spectrum(CoulombParams(-1.0, 0.3), n_max=4)
    assert [row.E for row in rows] == report.energies


def test_fibration_positive_coupling():
    threshold = alpha_threshold(1.0)
    rows = fibration_data(1.0, [-1.0, threshold + 0.5])
    assert len(rows) == 1
    assert rows[0].n == PLUS


def test_fibration_rejects_unsorted_grid():
    with pytest.raises(ParameterError):
        fibration_data(-1.0, [1.0, 0.0])


def test_report_serialisation():
    report = assemble_spectrum(CoulombParams(-1.0, 0.0), n_max=2)
    data = report.as_dict()
    assert set(data) == {"nu", "alpha", "points", "friedrichs_reference", "note"}
    assert data["points"][0]["n"] == 1
    assert report.csv_header() == ["n", "E", "residual", "E_lo", "E_hi"]
    assert len(list(report.csv_rows())) == 2
    assert assemble_spectrum(CoulombParams(-1.0, "inf"), n_max=1).as_dict()["alpha"] == "inf"
