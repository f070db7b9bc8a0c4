import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import greens, oracle, spectra, specfun
from .errors import ParameterError, SolverError
from .parameter_sets import parameter_sets
from .profiles import GaussianBump
from .radial import ALPHA_INF, CoulombParams, default_frame, krein_constant, make_frame

logger = logging.getLogger(__name__)

POLE_WINDOW = 1e-3


def format_float(value):
    """17 significant digits in positional notation; NaN becomes an empty field."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, (bool, str, int)) or value is ALPHA_INF:
        return str(value)
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return np.format_float_positional(value, precision=17, unique=False, fractional=False)


def compute_spectrum(nu, alpha=ALPHA_INF, n_max=spectra.DEFAULT_N_MAX, tol=spectra.DEFAULT_TOL,
                     psi_offset=0.0):
    """Negative spectrum of H_alpha for coupling nu.

    :param nu: nonzero coupling
    :type nu: float
    :param alpha: extension parameter, ``"inf"`` for the Friedrichs extension
    :type alpha: float or str
    :param n_max: number of gaps solved for nu < 0
    :type n_max: int
    :param tol: residual tolerance
    :type tol: float
    :rtype: hydrogenoid.spectra.SpectrumReport
    """
    return spectra.assemble_spectrum(CoulombParams(nu, alpha), n_max, tol, psi_offset)


@dataclass
class FibrationTable:
    """Long-format table of eigenvalue curves, one row per (alpha, n)."""
    nu: float
    rows: list
    n_max: int

    @property
    def failures(self):
        return [row for row in self.rows if row.error is not None]

    def as_dict(self):
        return {"nu": self.nu, "n_max": self.n_max,
                "rows": [{"alpha": "inf" if row.alpha is ALPHA_INF else row.alpha,
                          "n": row.n, "E": None if row.error else row.E, "error": row.error}
                         for row in self.rows]}

    def csv_comments(self):
        lines = [f"nu={self.nu!r}", f"n_max={self.n_max}"]
        if self.nu > 0:
            lines.append(f"alpha_nu={format_float(spectra.alpha_threshold(self.nu))}")
        return lines

    def csv_header(self):
        return ["alpha", "n", "E"]

    def csv_rows(self):
        for row in self.rows:
            yield [row.alpha, row.n, math.nan if row.error else row.E]


def fibration(nu, alpha_grid, n_max=spectra.DEFAULT_N_MAX, tol=spectra.DEFAULT_TOL, progress=None):
    """Eigenvalue fan alpha -> E_n^(nu, alpha) over a grid of alphas."""
    rows = spectra.fibration_data(nu, alpha_grid, n_max, tol, progress)
    return FibrationTable(float(nu), rows, int(n_max))


@dataclass
class SpectralCurve:
    """Samples (E, F_nu(E)) with the vertical asymptotes inside the sampled range."""
    nu: float
    energies: np.ndarray
    values: np.ndarray
    asymptotes: list
    alpha_nu: float = None

    def as_dict(self):
        return {"nu": self.nu, "E": self.energies.tolist(), "F": self.values.tolist(),
                "asymptotes": list(self.asymptotes), "alpha_nu": self.alpha_nu}

    def csv_comments(self):
        lines = [f"nu={self.nu!r}",
                 "asymptotes=" + ",".join(format_float(a) for a in self.asymptotes)]
        if self.alpha_nu is not None:
            lines.append(f"alpha_nu={format_float(self.alpha_nu)}")
        return lines

    def csv_header(self):
        return ["E", "F"]

    def csv_rows(self):
        for E, F in zip(self.energies, self.values):
            yield [E, F]


def spectral_function_curve(nu, energies, progress=None):
    """Sample F_nu on a grid of negative energies, skipping windows around the poles.

    :param nu: coupling
    :type nu: float
    :param energies: negative energies
    :type energies: array_like
    :rtype: SpectralCurve
    """
    energies = np.sort(np.asarray(energies, dtype=float))
    if energies.size == 0 or energies[-1] >= 0:
        raise ParameterError("energy grid must be nonempty and negative")
    kept, values = [], []
    iterator = energies if progress is None else progress(energies)
    for E in iterator:
        s = spectra.s_from_energy(nu, E)
        if nu < 0 and abs(s - round(s)) < POLE_WINDOW and round(s) >= 1:
            continue
        kept.append(E)
        values.append(spectra.spectral_function(nu, E))
    asymptotes = []
    alpha_nu = None
    if nu < 0:
        s_lo = spectra.s_from_energy(nu, energies[0])
        s_hi = spectra.s_from_energy(nu, energies[-1])
        asymptotes = [spectra.hydrogen_level(nu, n)
                      for n in range(max(1, math.ceil(s_lo)), math.floor(s_hi) + 1)]
    else:
        alpha_nu = spectra.alpha_threshold(nu)
    return SpectralCurve(float(nu), np.array(kept), np.array(values), asymptotes, alpha_nu)


def kernel_sample(nu, alpha=ALPHA_INF, kappa=None, r=1.0, rho=1.0, which="radial"):
    """One value of the radial or s-wave three-dimensional resolvent kernel.

    :rtype: hydrogenoid.greens.KernelSample
    """
    params = CoulombParams(nu, alpha)
    frame = default_frame(params.nu) if kappa is None else make_frame(params.nu, kappa)
    return greens.sample_kernel(params, frame, r, rho, which)


@dataclass
class Check:
    """Outcome of one verification check."""
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.value = float(self.value)
        self.threshold = float(self.threshold)

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "detail": self.detail}


@dataclass
class VerificationReport:
    params: CoulombParams
    kappa: float
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failed(self):
        return [check.name for check in self.checks if not check.passed]

    def as_dict(self):
        alpha = self.params.alpha
        return {"nu": self.params.nu, "alpha": "inf" if alpha is ALPHA_INF else alpha,
                "kappa": self.kappa, "passed": self.passed, "failed": self.failed,
                "checks": [check.as_dict() for check in self.checks]}


def _check_wronskian(frame, threshold=1e-9):
    worst = 0.0
    for kappa in sorted({frame.kappa, -0.5, 0.25, 0.75}):
        expected = specfun.rgamma(1.0 - kappa)
        for rho in np.geomspace(0.01, 60.0, 20):
            pair = specfun.whittaker(kappa, rho)
            worst = max(worst, abs(pair.wronskian - expected) / abs(expected))
    return Check("wronskian", bool(worst <= threshold), worst, threshold,
                 "relative deviation of w m' - m w' from 1/Gamma(1-kappa)")


def _check_green_identity(frame, threshold=1e-6):
    bump = GaussianBump(centre=2.0, width=0.5)
    grid = greens.default_grid(frame)

    def solution(r):
        return greens.apply_rg(frame, bump, grid, r).values

    norm, _ = greens.green_residual(frame, bump, solution, np.linspace(0.61, 4.86, 18))
    return Check("green_identity", norm <= threshold, norm, threshold,
                 "discrete L2 residual of the Friedrichs resolvent on a Gaussian bump")


def _shooting_bracket(point, nu, alpha):
    if alpha is ALPHA_INF:
        n = point.n_index
        lower = -math.inf if n == 1 else spectra.hydrogen_level(nu, n - 1)
        return oracle.local_bracket(point.E, lower, spectra.hydrogen_level(nu, n + 1))
    return oracle.local_bracket(point.E, point.bracket[0], point.bracket[1])


def _check_oracle(report, threshold=1e-6):
    params = report.params
    worst = 0.0
    for point in report.points:
        bracket = _shooting_bracket(point, params.nu, params.alpha)
        try:
            shot = oracle.shoot_eigenvalue(params, bracket)
        except (SolverError, ParameterError) as exc:
            return Check("oracle_agreement", False, math.inf, threshold,
                         f"shooting failed for n={point.n_index}: {exc}")
        worst = max(worst, abs(shot - point.E) / abs(point.E))
    return Check("oracle_agreement", worst <= threshold, worst, threshold,
                 "relative difference to the shooting oracle")


def _check_krein_pole(report, tol):
    params = report.params
    threshold = 10 * tol
    if params.alpha is ALPHA_INF:
        return Check("krein_pole", True, 0.0, threshold, "Friedrichs levels sit at the poles")
    worst = 0.0
    for point in report.points:
        kappa = spectra.s_from_energy(params.nu, point.E)
        worst = max(worst, abs(krein_constant(params.nu, kappa) - params.alpha))
    return Check("krein_pole", worst <= threshold, worst, threshold,
                 "abs(F_{nu,kappa(E)} - alpha) at every eigenvalue")


def _check_boundary(report, tol=1e-6):
    worst = 0.0
    satisfied = True
    for point in report.points:
        check = oracle.verify_eigenfunction(report.params, point.E, tol)
        satisfied = satisfied and check.satisfied
        if check.scale > 0:
            worst = max(worst, check.violation / check.scale)
    return Check("boundary_conditions", bool(satisfied), worst, tol,
                 "relative violation of g1 = 4 pi alpha g0 by the decaying solution")


def run_verification(nu=-1.0, alpha=0.0, kappa=None, n_check=3, tol=spectra.DEFAULT_TOL,
                     psi_offset=0.0):
    """Cross-module acceptance battery for one parameter set.

    :param psi_offset: perturbation of the digamma in the spectral function, zero in production
    :type psi_offset: float
    :rtype: VerificationReport
    """
    params = CoulombParams(nu, alpha)
    frame = default_frame(params.nu) if kappa is None else make_frame(params.nu, kappa)
    report = spectra.assemble_spectrum(params, n_check, tol, psi_offset)
    result = VerificationReport(params, frame.kappa)
    result.checks.append(_check_wronskian(frame))
    result.checks.append(_check_green_identity(frame))
    result.checks.append(_check_oracle(report))
    result.checks.append(_check_krein_pole(report, tol))
    result.checks.append(_check_boundary(report))
    for check in result.checks:
        logger.info("%s: %s (%.3e vs %.1e)", check.name, "pass" if check.passed else "FAIL",
                    check.value, check.threshold)
    return result


def verify_preset(name, psi_offset=0.0):
    """Run the verification battery on a named parameter set."""
    try:
        preset = parameter_sets[name]
    except KeyError:
        raise ParameterError(f"Unknown parameter set {name!r}, choose from {sorted(parameter_sets)}") from None
    return run_verification(preset["nu"], preset["alpha"], preset["kappa"], preset["n_check"],
                            psi_offset=psi_offset)


def render(result, fmt):
    """Text of a result in ``csv`` or ``json`` format."""
    if fmt == "json":
        return json.dumps(result.as_dict(), indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ParameterError(f"Invalid file format {fmt}")
    buffer = io.StringIO()
    for line in result.csv_comments():
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(result.csv_header())
    for row in result.csv_rows():
        writer.writerow([format_float(value) for value in row])
    return buffer.getvalue()


def write(result, filename=None, fmt=None):
    """Write a result to file or to stdout.

    :param result: spectrum report, fibration table, spectral curve, kernel sample or verification report
    :param filename: target file. The suffix `.csv` or `.json` selects the format unless fmt is given.
    :type filename: str
    :param fmt: ``"csv"`` or ``"json"``
    :type fmt: str
    """
    if fmt is None:
        if filename is None:
            fmt = "csv"
        else:
            suffix = os.path.splitext(filename)[1]
            if suffix not in (".csv", ".json"):
                raise ParameterError(f"Invalid file format {suffix}")
            fmt = suffix[1:]
    text = render(result, fmt)
    if filename is None:
        sys.stdout.write(text)
    else:
        with open(filename, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
