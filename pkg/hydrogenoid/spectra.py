"""Negative eigenvalues of the extensions H_alpha.

E < 0 is an eigenvalue of H_alpha exactly when the spectral function
:math:`\\mathfrak{F}_\\nu(E)` equals alpha. For nu < 0 the digamma poles sit at
the hydrogenoid levels :math:`E_n = -\\nu^2/(4n^2)` and there is one root per
gap; for nu > 0 there is at most one root, below the threshold alpha_nu.

Roots are searched in :math:`s = -\\nu/(2\\sqrt{|E|})`, in which the poles
are the integers. The root labelled n lies in s in (n-1, n), i.e. between
E_{n-1} and E_n with E_0 = -inf.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import specfun
from .errors import DomainError, ParameterError, PoleError, SolverError
from .radial import ALPHA_INF, FOUR_PI, CoulombParams, krein_constant, parse_extended

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_N_MAX = 20
POLE_OFFSET = 1e-9
S_TOL = 1e-12
PLUS = "plus"


@dataclass(frozen=True)
class SpectralPoint:
    """One negative eigenvalue together with its solver certificate.

    :param E: eigenvalue
    :param n_index: gap index n >= 1 (nu < 0) or ``"plus"`` (nu > 0)
    :param residual: abs(F_nu(E) - alpha)
    :param bracket: energies (E_lo, E_hi) straddling the root
    """
    E: float
    n_index: object
    residual: float
    bracket: tuple

    def as_dict(self):
        return {"n": self.n_index, "E": self.E, "residual": self.residual,
                "bracket": list(self.bracket)}


@dataclass
class SpectrumReport:
    """Point spectrum of one H_alpha below zero."""
    params: CoulombParams
    points: list
    friedrichs_reference: list = field(default_factory=list)
    note: str = ""

    @property
    def energies(self):
        return [point.E for point in self.points]

    def as_dict(self):
        alpha = self.params.alpha
        return {
            "nu": self.params.nu,
            "alpha": "inf" if alpha is ALPHA_INF else alpha,
            "points": [point.as_dict() for point in self.points],
            "friedrichs_reference": list(self.friedrichs_reference),
            "note": self.note,
        }

    def csv_comments(self):
        alpha = self.params.alpha
        lines = [f"nu={self.params.nu!r}", f"alpha={'inf' if alpha is ALPHA_INF else repr(alpha)}"]
        if self.note:
            lines.append(f"note={self.note}")
        return lines

    def csv_header(self):
        return ["n", "E", "residual", "E_lo", "E_hi"]

    def csv_rows(self):
        for point in self.points:
            yield [point.n_index, point.E, point.residual, point.bracket[0], point.bracket[1]]


def _check_nu(nu):
    nu = float(nu)
    if nu == 0 or not math.isfinite(nu):
        raise ParameterError(f"nu must be finite and nonzero, got {nu}")
    return nu


def _check_tol(tol):
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")


def hydrogen_level(nu, n):
    """E_n = -nu^2 / (4 n^2), the n-th Friedrichs eigenvalue for nu < 0."""
    return -nu * nu / (4.0 * n * n)


def energy_from_s(nu, s):
    return -nu * nu / (4.0 * s * s)


def s_from_energy(nu, E):
    return -nu / (2.0 * math.sqrt(-E))


def spectral_function_s(nu, s, psi_offset=0.0):
    """F_nu in the variable s = -nu/(2 sqrt|E|).

    :math:`\\frac{\\nu}{4\\pi}(\\psi(1-s) + \\ln(-\\nu/s) + 2\\gamma - 1 + \\frac{1}{2s})`.
    This is the Krein constant evaluated at kappa = s.

    :param psi_offset: added to the digamma value, a perturbation hook for
        sensitivity checks of the verification battery
    :type psi_offset: float
    :raises PoleError: at a positive integer s
    """
    nu = _check_nu(nu)
    if s == 0 or math.copysign(1.0, s) != -math.copysign(1.0, nu):
        raise DomainError(f"s must have the sign of -nu, got s={s} for nu={nu}")
    if specfun.is_pole(1.0 - s):
        raise PoleError(f"spectral function has a pole at s = {s}")
    psi = specfun.digamma(1.0 - s) + psi_offset
    return nu / FOUR_PI * (psi + math.log(-nu / s) + 2 * specfun.EULER_GAMMA - 1 + 0.5 / s)


def spectral_function(nu, E, psi_offset=0.0):
    """Spectral function of the hydrogenoid extensions.

    :math:`\\mathfrak{F}_\\nu(E) = \\frac{\\nu}{4\\pi}\\big(\\psi(1 + \\frac{\\nu}{2\\sqrt{|E|}})
    + \\ln(2\\sqrt{|E|}) + 2\\gamma - 1 - \\frac{\\sqrt{|E|}}{\\nu}\\big)`

    :param nu: nonzero coupling
    :type nu: float
    :param E: negative energy
    :type E: float
    :raises DomainError: for E >= 0
    :raises PoleError: at a hydrogenoid level (nu < 0)
    :rtype: float
    """
    nu = _check_nu(nu)
    if not E < 0:
        raise DomainError(f"spectral function needs E < 0, got {E}")
    return spectral_function_s(nu, s_from_energy(nu, E), psi_offset)


def f_nu_kappa(frame):
    """Krein constant F_{nu,kappa} of a shift frame."""
    return krein_constant(frame.nu, frame.kappa)


def alpha_threshold(nu):
    """alpha_nu = (nu/4pi)(ln nu + 2 gamma - 1), the limit of F_nu as E -> 0- for nu > 0.

    :raises DomainError: for nu <= 0
    """
    if not nu > 0:
        raise DomainError(f"alpha threshold is defined for nu > 0, got {nu}")
    return nu / FOUR_PI * (math.log(nu) + 2 * specfun.EULER_GAMMA - 1)


def is_positive(nu, alpha):
    """Whether H_alpha has no negative eigenvalues."""
    alpha = parse_extended(alpha)
    if nu < 0:
        return False
    return alpha is ALPHA_INF or alpha >= alpha_threshold(nu)


def alpha_limits(nu, n=1):
    """Where the n-th root goes as alpha runs to -inf and to +inf.

    :returns: (limit as alpha -> -inf, limit as alpha -> +inf)
    :rtype: tuple of float
    """
    nu = _check_nu(nu)
    if nu > 0:
        return -math.inf, 0.0
    if n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    lower = -math.inf if n == 1 else hydrogen_level(nu, n - 1)
    return lower, hydrogen_level(nu, n)


def _brent(func, lo, hi, tol):
    xtol = S_TOL * min(1.0, abs(lo), abs(hi))
    try:
        root, info = optimize.brentq(func, lo, hi, xtol=xtol, rtol=4 * specfun.EPS,
                                     maxiter=200, full_output=True)
    except ValueError as exc:
        raise SolverError(f"bracket ({lo}, {hi}) does not straddle the root: {exc}") from exc
    if not info.converged:
        raise SolverError(f"Brent iteration did not converge in ({lo}, {hi})")
    logger.debug("root %.17g after %d iterations", root, info.iterations)
    return root


def _bracket_s(f, n, delta):
    """Sign-changing bracket inside (n-1, n) for an increasing f."""
    hi = n - delta
    while not f(hi) > 0:
        delta *= 0.1
        if delta < 1e-15 * n:
            raise SolverError(f"no sign change below the pole s = {n}")
        hi = n - delta
    if n == 1:
        lo = 0.5
        while not f(lo) < 0:
            lo *= 0.5
            if lo < 1e-300:
                raise SolverError("spectral function did not fall below alpha as s -> 0")
        return lo, hi
    delta = POLE_OFFSET
    lo = n - 1 + delta
    while not f(lo) < 0:
        delta *= 0.1
        if delta < 1e-15 * n:
            raise SolverError(f"no sign change above the pole s = {n - 1}")
        lo = n - 1 + delta
    return lo, hi


def solve_interval(nu, alpha, n, tol=DEFAULT_TOL, psi_offset=0.0):
    """The n-th eigenvalue of H_alpha for attractive coupling.

    The root of F_nu(E) = alpha in (E_{n-1}, E_n), E_0 = -inf. For alpha = inf
    it is E_n itself.

    :param nu: coupling, nu < 0
    :type nu: float
    :param alpha: extension parameter
    :type alpha: float or ALPHA_INF
    :param n: gap index, n >= 1
    :type n: int
    :param tol: admissible residual abs(F_nu(E) - alpha)
    :type tol: float
    :rtype: SpectralPoint
    """
    nu = _check_nu(nu)
    alpha = parse_extended(alpha)
    _check_tol(tol)
    if nu > 0:
        raise ParameterError("solve_interval needs nu < 0; use solve_positive_nu")
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    n = int(n)
    if alpha is ALPHA_INF:
        bracket = (energy_from_s(nu, n - POLE_OFFSET), energy_from_s(nu, n + POLE_OFFSET))
        return SpectralPoint(hydrogen_level(nu, n), n, 0.0, bracket)

    def f(s):
        return spectral_function_s(nu, s, psi_offset) - alpha

    lo, hi = _bracket_s(f, n, POLE_OFFSET)
    logger.debug("gap %d: s bracket (%.17g, %.17g)", n, lo, hi)
    s = _brent(f, lo, hi, tol)
    residual = abs(f(s))
    if residual > tol:
        raise SolverError(f"residual {residual:.3e} exceeds tol {tol:.1e} in gap {n}")
    return SpectralPoint(energy_from_s(nu, s), n, residual,
                         (energy_from_s(nu, lo), energy_from_s(nu, hi)))


def _spectral_function_k(nu, k, psi_offset=0.0):
    return nu / FOUR_PI * (specfun.digamma(1.0 + nu / (2 * k)) + psi_offset + math.log(2 * k)
                           + 2 * specfun.EULER_GAMMA - 1) - k / FOUR_PI


def solve_positive_nu(nu, alpha, tol=DEFAULT_TOL, psi_offset=0.0):
    """The single negative eigenvalue E_+ of H_alpha for repulsive coupling, if any.

    Solved in k = sqrt|E|, where F_nu decreases from alpha_nu (k -> 0) to -inf.

    :returns: the eigenvalue or None when alpha >= alpha_nu
    :rtype: SpectralPoint or None
    """
    nu = _check_nu(nu)
    alpha = parse_extended(alpha)
    _check_tol(tol)
    if nu < 0:
        raise ParameterError("solve_positive_nu needs nu > 0; use solve_interval")
    if alpha is ALPHA_INF or alpha >= alpha_threshold(nu) + psi_offset * nu / FOUR_PI:
        return None

    def f(k):
        return _spectral_function_k(nu, k, psi_offset) - alpha

    k_lo = 1.0
    while not f(k_lo) > 0:
        k_lo *= 0.5
        if k_lo < 1e-150:
            raise SolverError("spectral function did not rise above alpha as E -> 0")
    k_hi = 2.0 * k_lo
    while not f(k_hi) < 0:
        k_hi *= 2.0
        if k_hi > 1e150:
            raise SolverError("spectral function did not fall below alpha as E -> -inf")
    k = _brent(f, k_lo, k_hi, tol)
    residual = abs(f(k))
    if residual > tol:
        raise SolverError(f"residual {residual:.3e} exceeds tol {tol:.1e}")
    return SpectralPoint(-k * k, PLUS, residual, (-k_hi * k_hi, -k_lo * k_lo))


def check_interlacing(points, nu):
    """Whether E_{n+1}^alpha >= E_n >= E_n^alpha holds for every listed n."""
    by_index = {point.n_index: point.E for point in points}
    for n, E in by_index.items():
        level = hydrogen_level(nu, n)
        if E > level:
            return False
        if n + 1 in by_index and by_index[n + 1] < level:
            return False
    return True


def assemble_spectrum(params, n_max=DEFAULT_N_MAX, tol=DEFAULT_TOL, psi_offset=0.0):
    """Negative spectrum of H_alpha.

    :param params: operator parameters
    :type params: CoulombParams
    :param n_max: number of gaps to solve for nu < 0
    :type n_max: int
    :param tol: residual tolerance
    :type tol: float
    :rtype: SpectrumReport
    """
    nu, alpha = params.nu, params.alpha
    if int(n_max) != n_max or n_max < 1:
        raise ParameterError(f"n_max must be a positive integer, got {n_max}")
    n_max = int(n_max)
    if nu > 0:
        point = solve_positive_nu(nu, alpha, tol, psi_offset)
        note = "" if point is not None else "alpha >= alpha_nu: no negative eigenvalue"
        return SpectrumReport(params, [] if point is None else [point], [], note)

    points = []
    for n in range(1, n_max + 1):
        try:
            points.append(solve_interval(nu, alpha, n, tol, psi_offset))
        except SolverError as exc:
            raise SolverError(f"gap {n} of nu={nu}, alpha={alpha}: {exc}") from exc
    reference = [hydrogen_level(nu, n) for n in range(1, n_max + 1)]
    energies = np.array([point.E for point in points])
    if np.any(np.diff(energies) <= 0):
        raise SolverError("eigenvalues are not strictly increasing")
    if not check_interlacing(points, nu):
        raise SolverError("computed eigenvalues violate interlacing with the Friedrichs levels")
    return SpectrumReport(params, points, reference)


@dataclass
class FibrationRow:
    alpha: float
    n: object
    E: float
    error: str = None


def fibration_data(nu, alpha_grid, n_max=DEFAULT_N_MAX, tol=DEFAULT_TOL, progress=None):
    """Eigenvalue curves alpha -> E_n^(nu, alpha) on a grid of alphas.

    Per-point failures are recorded on the row and do not abort the scan.

    :param progress: optional wrapper around the alpha iterator (progress bar)
    :returns: rows ordered by alpha, then n
    :rtype: list of FibrationRow
    """
    nu = _check_nu(nu)
    grid = [parse_extended(a) for a in alpha_grid]
    finite = [a for a in grid if a is not ALPHA_INF]
    if any(b <= a for a, b in zip(finite, finite[1:])):
        raise ParameterError("alpha grid must be strictly increasing")
    iterator = grid if progress is None else progress(grid)
    rows = []
    for alpha in iterator:
        if nu > 0:
            try:
                point = solve_positive_nu(nu, alpha, tol)
            except SolverError as exc:
                rows.append(FibrationRow(alpha, PLUS, math.nan, str(exc)))
                continue
            if point is not None:
                rows.append(FibrationRow(alpha, PLUS, point.E))
            continue
        for n in range(1, n_max + 1):
            try:
                rows.append(FibrationRow(alpha, n, solve_interval(nu, alpha, n, tol).E))
            except SolverError as exc:
                logger.warning("fibration point alpha=%s n=%d failed: %s", alpha, n, exc)
                rows.append(FibrationRow(alpha, n, math.nan, str(exc)))
    return rows
