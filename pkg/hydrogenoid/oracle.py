"""Independent eigenvalue oracles.

Two solvers that share no code path with :mod:`hydrogenoid.spectra`: a
shooting method integrating the radial equation outwards from the singular
boundary, and a finite-volume discretisation on a mesh graded towards the
origin. Both impose the boundary condition g1 = 4 pi alpha g0 through the short
distance model, not through the spectral function.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg, optimize, special

from .errors import ParameterError, SolverError, TraceError
from .profiles import EigenfunctionProfile
from .radial import ALPHA_INF, FOUR_PI, boundary_trace, extension_violation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShootingConfig:
    """Settings of :func:`shoot_eigenvalue`.

    :param r0: radius where the short distance series hands over to the integrator
    :param R: matching radius, default max(30/sqrt|E_hi|, 20)
    :param rk_tol: relative tolerance of the integrator
    :param ell: angular momentum
    :param first_step: initial step of the integrator
    """
    r0: float = 1e-4
    R: float = None
    rk_tol: float = 1e-10
    ell: int = 0
    first_step: float = 1e-8

    def __post_init__(self):
        if not self.r0 > 0:
            raise ParameterError(f"r0 must be positive, got {self.r0}")
        if self.R is not None and not self.R > self.r0:
            raise ParameterError(f"need r0 < R, got r0={self.r0}, R={self.R}")
        if not self.rk_tol > 0:
            raise ParameterError(f"rk_tol must be positive, got {self.rk_tol}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise ParameterError(f"ell must be a nonnegative integer, got {self.ell}")


def frobenius_start(nu, E, ell, r, terms=6):
    """Regular solution r^(ell+1) sum a_k r^k and its derivative at r.

    k(k + 2 ell + 1) a_k = nu a_{k-1} - E a_{k-2}, a_0 = 1.
    """
    coeffs = [1.0]
    for k in range(1, terms):
        previous = coeffs[k - 2] if k >= 2 else 0.0
        coeffs.append((nu * coeffs[k - 1] - E * previous) / (k * (k + 2 * ell + 1)))
    u = sum(a * r ** (k + ell + 1) for k, a in enumerate(coeffs))
    du = sum((k + ell + 1) * a * r ** (k + ell) for k, a in enumerate(coeffs))
    return u, du


def series_start(nu, alpha, E, r):
    """Short distance solution u = g0(1 + nu r ln r) + g1 r + C r^2 ln r + D r^2 at r.

    Substituting the model into -u'' + (nu/r) u = E u fixes C = nu^2 g0 / 2 and
    D = (nu g1 - E g0 - 3C)/2. (g0, g1) = (1, 4 pi alpha).
    """
    g0, g1 = 1.0, FOUR_PI * alpha
    C = 0.5 * nu * nu * g0
    D = 0.5 * (nu * g1 - E * g0 - 3.0 * C)
    log_r = math.log(r)
    u = g0 * (1.0 + nu * r * log_r) + g1 * r + C * r * r * log_r + D * r * r
    du = g0 * nu * (log_r + 1.0) + g1 + C * r * (2.0 * log_r + 1.0) + 2.0 * D * r
    return u, du


def _initial_data(params, E, cfg):
    if cfg.ell > 0 or params.alpha is ALPHA_INF:
        return frobenius_start(params.nu, E, cfg.ell, cfg.r0)
    return series_start(params.nu, params.alpha, E, cfg.r0)


def _mismatch(params, E, cfg, R):
    nu, ell = params.nu, cfg.ell
    u0, du0 = _initial_data(params, E, cfg)
    norm = math.hypot(u0, du0)

    def rhs(r, y):
        return [y[1], (nu / r + ell * (ell + 1) / (r * r) - E) * y[0]]

    solution = integrate.solve_ivp(rhs, (cfg.r0, R), [u0 / norm, du0 / norm], method="DOP853",
                                   rtol=cfg.rk_tol, atol=1e-14, first_step=cfg.first_step)
    if not solution.success:
        raise SolverError(f"integration failed at E={E}: {solution.message}")
    u, du = solution.y[:, -1]
    k = math.sqrt(-E)
    kappa_eff = -nu / (2.0 * k)
    log_derivative = -k + kappa_eff / R
    return (du - log_derivative * u) / math.hypot(u, du)


def shoot_eigenvalue(params, bracket, cfg=None):
    """Eigenvalue in an energy bracket by shooting from the origin.

    :param params: operator parameters
    :type params: CoulombParams
    :param bracket: (E_lo, E_hi), both negative, containing exactly one eigenvalue
    :type bracket: tuple
    :param cfg: integration settings
    :type cfg: ShootingConfig
    :raises SolverError: when the mismatch does not change sign over the bracket
    :rtype: float
    """
    cfg = ShootingConfig() if cfg is None else cfg
    E_lo, E_hi = sorted(bracket)
    if not E_hi < 0:
        raise ParameterError(f"bracket must lie below zero, got {bracket}")
    R = cfg.R if cfg.R is not None else max(30.0 / math.sqrt(-E_hi), 20.0)
    if not R > cfg.r0:
        raise ParameterError(f"matching radius {R} does not exceed r0 = {cfg.r0}")

    def f(E):
        return _mismatch(params, E, cfg, R)

    f_lo, f_hi = f(E_lo), f(E_hi)
    if f_lo * f_hi > 0:
        raise SolverError(f"shooting mismatch has no sign change on ({E_lo}, {E_hi})")
    logger.debug("shooting on (%.6g, %.6g) with R=%.3g", E_lo, E_hi, R)
    return optimize.brentq(f, E_lo, E_hi, xtol=1e-15 * abs(E_hi), rtol=1e-14, maxiter=200)


def local_bracket(E, lower=-math.inf, upper=0.0, width=0.02):
    """Energy window of relative width around E, clipped to (lower, upper)."""
    lo = max(E * (1.0 + width), lower if math.isinf(lower) else 0.5 * (lower + E))
    hi = min(E * (1.0 - width), 0.5 * (E + upper))
    return lo, hi


@dataclass(frozen=True)
class FdMesh:
    """Nodes on a uniform grid in x = ln r + r / r_s: geometric near zero, uniform beyond r_s.

    The Dirichlet node R closes the mesh and is not an unknown.
    """
    r_min: float
    R: float
    r_s: float
    cells: int

    def __post_init__(self):
        if not 0 < self.r_min < self.r_s < self.R:
            raise ParameterError(f"need 0 < r_min < r_s < R, got {self.r_min}, {self.r_s}, {self.R}")
        if int(self.cells) != self.cells or self.cells < 4:
            raise ParameterError(f"mesh needs at least four cells, got {self.cells}")

    @classmethod
    def for_levels(cls, nu, k, h=0.04, r_min=1e-6):
        """Mesh wide enough for the lowest k levels of coupling nu, with x-step close to h."""
        R = max(40.0, 80.0 * k / abs(nu))
        r_s = R / 100.0
        span = math.log(R / r_min) + (R - r_min) / r_s
        return cls(r_min, R, r_s, int(math.ceil(span / h)))

    def refined(self, factor=2):
        return FdMesh(self.r_min, self.R, self.r_s, self.cells * factor)

    @property
    def h(self):
        return (math.log(self.R / self.r_min) + (self.R - self.r_min) / self.r_s) / self.cells

    @property
    def nodes(self):
        x = np.linspace(math.log(self.r_min) + self.r_min / self.r_s,
                        math.log(self.R) + self.R / self.r_s, self.cells + 1)
        nodes = self.r_s * np.real(special.lambertw(np.exp(x - math.log(self.r_s))))
        nodes[-1] = self.R
        return nodes


def _first_cell(nu, alpha, c):
    """Model phi of the boundary condition on [0, c]: (K, integral of phi, phi)."""
    if alpha is ALPHA_INF:
        K = 1.0 + nu * c + 0.25 * nu * nu * c * c
        integral = 0.5 * c * c + nu * c ** 3 / 6.0

        def model(r):
            return r + 0.5 * nu * r * r
        return K, integral, model
    b = FOUR_PI * alpha
    log_c = math.log(c)
    K = nu + b + nu * log_c + nu * nu * (c * log_c - c) + b * nu * c
    integral = c + nu * (0.5 * c * c * log_c - 0.25 * c * c) + 0.5 * b * c * c

    def model(r):
        return 1.0 + nu * r * math.log(r) + b * r
    return K, integral, model


def _assemble(params, mesh, ell):
    """Symmetric tridiagonal matrix (diagonal, off-diagonal) and cell weights."""
    nu, alpha = params.nu, params.alpha
    r = mesh.nodes
    nodes, closing = r[:-1], r[-1]
    h = np.diff(r)
    mids = 0.5 * (nodes + r[1:])
    lower = np.concatenate([[0.0], mids[:-1]])
    if ell > 0:
        lower[0] = 0.5 * nodes[0]
    V = nu * np.log(mids / np.where(lower > 0, lower, 1.0)) \
        + ell * (ell + 1) * (1.0 / np.where(lower > 0, lower, np.inf) - 1.0 / mids)
    diag = 1.0 / h + V
    diag[1:] += 1.0 / h[:-1]
    weights = mids - lower
    if ell == 0:
        K, integral, model = _first_cell(nu, alpha, mids[0])
        scale = model(nodes[0])
        if scale <= 0:
            raise SolverError(f"boundary model changes sign before the first node r={nodes[0]:.3g}")
        diag[0] = 1.0 / h[0] + K / scale
        weights[0] = integral / scale
    else:
        diag[0] += 1.0 / nodes[0]
    off = -1.0 / h[:-1]
    logger.debug("finite volume mesh: %d cells on (0, %.3g], closing node %.3g",
                 nodes.size, mids[-1], closing)
    return diag, off, weights


def fd_spectrum(params, mesh, k, ell=0):
    """Lowest k eigenvalues of the finite volume discretisation.

    :param params: operator parameters
    :type params: CoulombParams
    :param mesh: discretisation mesh
    :type mesh: FdMesh
    :param k: number of eigenvalues
    :type k: int
    :param ell: angular momentum; the boundary condition only enters for ell = 0
    :type ell: int
    :rtype: list of float
    """
    if int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k}")
    diag, off, weights = _assemble(params, mesh, ell)
    inv_sqrt = 1.0 / np.sqrt(weights)
    if k > diag.size:
        raise ParameterError(f"k={k} exceeds the {diag.size} cells of the mesh")
    # the r_min cells push the norm to ~1e15; index selection (stebz) loses the low levels
    values = linalg.eigh_tridiagonal(diag * inv_sqrt ** 2, off * inv_sqrt[:-1] * inv_sqrt[1:],
                                     eigvals_only=True, lapack_driver="stev")
    return [float(v) for v in np.sort(values)[:int(k)]]


@dataclass
class FdResult:
    """Richardson extrapolated finite volume eigenvalues."""
    values: list
    levels: list
    ratios: list
    flagged: list = field(default_factory=list)

    @property
    def ok(self):
        return not any(self.flagged)


def fd_spectrum_extrapolated(params, k, ell=0, mesh=None):
    """Lowest k eigenvalues from three meshes h, h/2, h/4 with Richardson extrapolation.

    The scheme is second order; a convergence ratio outside [2, 8] flags the level.

    :rtype: FdResult
    """
    if mesh is None:
        mesh = FdMesh.for_levels(params.nu, k + ell)
    meshes = [mesh, mesh.refined(2), mesh.refined(4)]
    levels = [np.array(fd_spectrum(params, m, k, ell)) for m in meshes]
    coarse, mid, fine = levels
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = (coarse - mid) / (mid - fine)
    values = (4.0 * fine - mid) / 3.0
    flagged = [not (2.0 <= ratio <= 8.0) for ratio in ratios]
    if any(flagged):
        warnings.warn(f"finite volume levels {[i + 1 for i, f in enumerate(flagged) if f]} "
                      f"converge irregularly under mesh halving: ratios {ratios}", RuntimeWarning)
    return FdResult([float(v) for v in values], [lv.tolist() for lv in levels],
                    [float(q) for q in ratios], flagged)


@dataclass
class EigenfunctionReport:
    """Boundary condition check of the decaying solution at a claimed eigenvalue."""
    E: float
    g0: float
    g1: float
    alpha_implied: object
    violation: float
    scale: float
    margin: float
    satisfied: bool
    ode_residual: float
    error: str = None

    def as_dict(self):
        alpha = self.alpha_implied
        return {"E": self.E, "g0": self.g0, "g1": self.g1,
                "alpha_implied": "inf" if alpha is ALPHA_INF else alpha,
                "violation": self.violation, "scale": self.scale, "margin": self.margin,
                "satisfied": self.satisfied, "ode_residual": self.ode_residual,
                "error": self.error}


def _ode_residual(profile, nu, E, samples=21, rel_step=1e-3):
    r = np.linspace(0.5, 5.0, samples) / profile.k
    h = rel_step * r
    stencil = r[:, None] + np.arange(-2, 3)[None, :] * h[:, None]
    u = profile(stencil.ravel()).reshape(stencil.shape)
    second = (-u[:, 0] + 16 * u[:, 1] - 30 * u[:, 2] + 16 * u[:, 3] - u[:, 4]) / (12 * h * h)
    residual = -second + (nu / r - E) * u[:, 2]
    scale = np.max(np.abs(u[:, 2])) * (abs(E) + abs(nu) * profile.k) + 1e-300
    return float(np.max(np.abs(residual)) / scale)


def verify_eigenfunction(params, E, tol=1e-6):
    """Check that the decaying solution at E satisfies the boundary condition of H_alpha.

    :param params: operator parameters
    :type params: CoulombParams
    :param E: claimed eigenvalue, negative
    :type E: float
    :param tol: relative tolerance of the boundary condition
    :type tol: float
    :rtype: EigenfunctionReport
    """
    profile = EigenfunctionProfile(params.nu, E)
    try:
        trace = boundary_trace(profile, params.nu)
    except TraceError as exc:
        nan = math.nan
        return EigenfunctionReport(E, nan, nan, nan, nan, nan, nan, False, nan, str(exc))
    violation, scale = extension_violation(trace, params)
    if params.alpha is ALPHA_INF:
        margin = violation / scale
    elif trace.g0 == 0:
        margin = math.inf
    else:
        margin = abs(trace.alpha_implied - params.alpha)
    return EigenfunctionReport(
        E, trace.g0, trace.g1, trace.alpha_implied, violation, scale, margin,
        bool(violation <= tol * scale), _ode_residual(profile, params.nu, E))
