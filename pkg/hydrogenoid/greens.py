"""Resolvents of the half-line Coulomb operator and its extensions.

The Friedrichs resolvent at the spectral point -eta has the Green kernel
:math:`G(r,\\rho) = W^{-1}\\Phi_\\kappa(\\max)F_\\kappa(\\min)`; every other
extension differs from it by the rank-one term
:math:`\\frac{\\Gamma(1-\\kappa)^2}{4\\pi}(\\alpha - \\mathfrak{F}_{\\nu,\\kappa})^{-1}
|\\Phi_\\kappa\\rangle\\langle\\Phi_\\kappa|`.
"""
import functools
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import specfun
from .errors import ParameterError, SpectralPointError
from .profiles import WhittakerProfile
from .radial import (ALPHA_INF, FOUR_PI, ShiftFrame, fundamental_system,
                     krein_constant, phi, wronskian)

logger = logging.getLogger(__name__)

N_GAUSS = 4
_GL_X, _GL_W = np.polynomial.legendre.leggauss(N_GAUSS)
TAIL_TOL = 1e-10
SPECTRAL_POINT_TOL = 1e-12


@dataclass(frozen=True)
class KernelSample:
    """One evaluation of a resolvent kernel."""
    r: float
    rho: float
    value: float
    frame: ShiftFrame
    which: str = "friedrichs"
    alpha: object = ALPHA_INF
    g_at_x: float = None

    def as_dict(self):
        out = {
            "nu": self.frame.nu,
            "kappa": self.frame.kappa,
            "lambda": self.frame.lam,
            "eta": self.frame.eta,
            "spectral_point": -self.frame.eta,
            "alpha": "inf" if self.alpha is ALPHA_INF else self.alpha,
            "which": self.which,
            "r": self.r,
            "rho": self.rho,
            "kernel": self.value,
        }
        if self.g_at_x is not None:
            out["g_nu_kappa_at_x"] = self.g_at_x
        return out

    def csv_comments(self):
        data = self.as_dict()
        keys = ("nu", "kappa", "lambda", "eta", "alpha", "which")
        return [f"{key}={data[key]}" for key in keys]

    def csv_header(self):
        header = ["r", "rho", "kernel"]
        return header + ["g_nu_kappa_at_x"] if self.g_at_x is not None else header

    def csv_rows(self):
        row = [self.r, self.rho, self.value]
        yield row + [self.g_at_x] if self.g_at_x is not None else row


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Composite 4-point Gauss-Legendre rule on (0, r_max].

    Panels are geometric from r_min up to r = 1, split where wider than the
    uniform panels beyond r = 1; the first panel is [0, r_min]. The fundamental
    system is tabulated at the nodes.
    """
    frame: ShiftFrame
    breakpoints: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    F: np.ndarray
    Phi: np.ndarray

    @classmethod
    def build(cls, frame, r_min=1e-6, r_max=None, panels_per_decade=4, panel_width=0.25):
        """Build the grid for a frame.

        :param frame: shift frame the fundamental system is tabulated for
        :type frame: ShiftFrame
        :param r_min: end of the first panel [0, r_min]
        :type r_min: float
        :param r_max: truncation radius, default 40/lambda + 40/sqrt(eta)
        :type r_max: float
        :param panels_per_decade: geometric panels per decade below r = 1
        :type panels_per_decade: int
        :param panel_width: width of the uniform panels beyond r = 1
        :type panel_width: float
        :rtype: QuadratureGrid
        """
        r_max = frame.default_r_max if r_max is None else float(r_max)
        if not 0 < r_min < 1.0 < r_max:
            raise ParameterError(f"need 0 < r_min < 1 < r_max, got r_min={r_min}, r_max={r_max}")
        n_geometric = max(1, int(math.ceil(-math.log10(r_min) * panels_per_decade)))
        geometric = np.geomspace(r_min, 1.0, n_geometric + 1)
        # no geometric panel is wider than the uniform ones
        pieces = np.maximum(1, np.ceil(np.diff(geometric) / panel_width - 1e-9)).astype(int)
        geometric = np.concatenate([np.linspace(a, b, m, endpoint=False)
                                    for a, b, m in zip(geometric[:-1], geometric[1:], pieces)] + [[1.0]])
        # r_max is rounded up so that uniform breakpoints sit at 1 + k * panel_width
        n_uniform = max(1, int(math.ceil((r_max - 1.0) / panel_width - 1e-9)))
        uniform = 1.0 + panel_width * np.arange(n_uniform + 1)
        breakpoints = np.concatenate([[0.0], geometric, uniform[1:]])
        left, right = breakpoints[:-1], breakpoints[1:]
        half = 0.5 * (right - left)
        nodes = (0.5 * (left + right))[:, None] + half[:, None] * _GL_X[None, :]
        weights = half[:, None] * _GL_W[None, :]
        F, Phi, _, _ = fundamental_system(frame, nodes.ravel())
        logger.debug("quadrature grid with %d panels on (0, %.3g]", left.size, r_max)
        return cls(frame, breakpoints, nodes.ravel(), weights.ravel(), F, Phi)

    @property
    def r_max(self):
        return float(self.breakpoints[-1])

    def panel_of(self, r):
        index = np.searchsorted(self.breakpoints, r, side="right") - 1
        return np.clip(index, 0, self.breakpoints.size - 2)


@functools.lru_cache(maxsize=16)
def default_grid(frame):
    """Grid built with the default settings, cached per frame."""
    return QuadratureGrid.build(frame)


@dataclass
class SampledFunction:
    """Values of a function at sample radii, with an optional numerical caveat."""
    r: np.ndarray
    values: np.ndarray
    warning: str = None
    extras: dict = field(default_factory=dict)

    def __call__(self, r):
        return np.interp(r, self.r, self.values)


def _panel_sums(grid, g_nodes):
    """Cumulative integrals A = int_0^b F g (left) and B = int_b^R Phi g (right) at breakpoints."""
    pa = (grid.weights * grid.F * g_nodes).reshape(-1, N_GAUSS).sum(axis=1)
    pb = (grid.weights * grid.Phi * g_nodes).reshape(-1, N_GAUSS).sum(axis=1)
    cum_a = np.concatenate([[0.0], np.cumsum(pa)])
    cum_b = np.concatenate([np.cumsum(pb[::-1])[::-1], [0.0]])
    return cum_a, cum_b


def _partial(lo, hi):
    half = 0.5 * (hi - lo)
    x = (0.5 * (lo + hi))[:, None] + half[:, None] * _GL_X[None, :]
    return x, half[:, None] * _GL_W[None, :]


def _evaluate(grid, g, cum_a, cum_b, points):
    """(R_G g)(r) at arbitrary points from the cumulative panel sums."""
    points = np.asarray(points, dtype=float)
    j = grid.panel_of(points)
    left, right = grid.breakpoints[j], grid.breakpoints[j + 1]
    inside = points <= right
    upper = np.where(inside, points, right)

    xa, wa = _partial(left, upper)
    xb, wb = _partial(upper, right)
    F_a, _, _, _ = fundamental_system(grid.frame, xa)
    _, Phi_b, _, _ = fundamental_system(grid.frame, xb)
    A = cum_a[j] + np.sum(wa * F_a * g(xa), axis=1)
    B = cum_b[j + 1] + np.sum(wb * Phi_b * g(xb), axis=1)
    B = np.where(inside, B, 0.0)

    F_p, Phi_p, _, _ = fundamental_system(grid.frame, points)
    return (Phi_p * A + F_p * B) / wronskian(grid.frame)


def _tail_warning(grid, g_nodes, cum_b):
    tail = abs(grid.Phi[-1] * g_nodes[-1]) * grid.r_max
    reference = abs(cum_b[0]) + 1e-300
    if tail > TAIL_TOL * reference:
        message = (f"truncation at r_max={grid.r_max:.3g} leaves a tail estimate "
                   f"{tail:.2e} relative to {reference:.2e}")
        warnings.warn(message, RuntimeWarning)
        return message
    return None


def apply_rg(frame, g, grid=None, points=None):
    """Apply the Friedrichs resolvent R_G to a profile g.

    The integral is split at the kink rho = r:
    :math:`(R_G g)(r) = W^{-1}[\\Phi(r)\\int_0^r F g + F(r)\\int_r^\\infty \\Phi g]`.

    :param frame: shift frame
    :type frame: ShiftFrame
    :param g: profile, a callable accepting arrays of radii
    :type g: callable
    :param grid: quadrature grid, default :func:`default_grid`
    :type grid: QuadratureGrid
    :param points: evaluation radii, default the panel breakpoints
    :type points: array_like
    :returns: samples of R_G g; ``extras["phi_projection"]`` holds <Phi, g>
    :rtype: SampledFunction
    """
    grid = default_grid(frame) if grid is None else grid
    g_nodes = np.asarray(g(grid.nodes), dtype=float)
    cum_a, cum_b = _panel_sums(grid, g_nodes)
    warning = _tail_warning(grid, g_nodes, cum_b)
    if points is None:
        points = grid.breakpoints[1:]
        F_p, Phi_p, _, _ = fundamental_system(frame, points)
        values = (Phi_p * cum_a[1:] + F_p * cum_b[1:]) / wronskian(frame)
    else:
        points = np.atleast_1d(np.asarray(points, dtype=float))
        values = _evaluate(grid, g, cum_a, cum_b, points)
    return SampledFunction(points, values, warning, {"phi_projection": float(cum_b[0])})


@functools.lru_cache(maxsize=16)
def _psi_sums(frame):
    grid = default_grid(frame)
    return (grid,) + _panel_sums(grid, grid.Phi)


def psi_kappa(frame, r):
    """Psi_kappa = R_G Phi_kappa, the preimage of Phi_kappa under the shifted Friedrichs operator.

    :param frame: shift frame
    :type frame: ShiftFrame
    :param r: radius or radii
    :type r: float or array_like
    """
    grid, cum_a, cum_b = _psi_sums(frame)
    values = _evaluate(grid, WhittakerProfile(frame), cum_a, cum_b, np.atleast_1d(r))
    return float(values[0]) if np.ndim(r) == 0 else values


@functools.lru_cache(maxsize=64)
def phi_norm_sq(frame):
    """Squared L2 norm of Phi_kappa, computed in the rho = lambda r variable.

    (0, 1] is integrated in one adaptive panel, then doubling panels follow
    until the exponential tail is negligible.
    """
    def integrand(rho):
        return specfun.whittaker_w_value(frame.kappa, rho) ** 2

    total, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
    lo = 1.0
    while True:
        hi = 2.0 * lo
        piece, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
        total += piece
        if hi > 10.0 + 4.0 * abs(frame.kappa) and piece <= 1e-17 * total:
            break
        lo = hi
    return total / frame.lam


def psi_slope(frame):
    """Limit of Psi_kappa(r)/r as r -> 0, equal to Gamma(1-kappa) ||Phi_kappa||^2."""
    return frame.gamma_factor * phi_norm_sq(frame)


def green_residual(frame, g, f, points, rel_step=1e-3):
    """Discrete L2 residual of -f'' + (nu/r) f + eta f - g on a set of check points.

    f'' is a five-point central difference with step rel_step * r.

    :param f: candidate solution, callable on arrays
    :type f: callable
    :returns: (norm, pointwise residuals)
    :rtype: tuple
    """
    points = np.asarray(points, dtype=float)
    h = rel_step * points
    stencil = points[:, None] + np.arange(-2, 3)[None, :] * h[:, None]
    fv = np.asarray(f(stencil.ravel()), dtype=float).reshape(stencil.shape)
    second = (-fv[:, 0] + 16 * fv[:, 1] - 30 * fv[:, 2] + 16 * fv[:, 3] - fv[:, 4]) / (12 * h * h)
    residual = -second + (frame.nu / points + frame.eta) * fv[:, 2] - np.asarray(g(points))
    if points.size > 1:
        norm = math.sqrt(integrate.trapezoid(residual ** 2, points))
    else:
        norm = float(abs(residual[0]))
    return norm, residual


def friedrichs_kernel(frame, r, rho):
    """Green kernel of the Friedrichs resolvent at -eta.

    :math:`-(\\kappa\\Gamma(1-\\kappa)/\\nu)\\,\\mathscr{W}(\\lambda\\max)\\,\\mathscr{M}(\\lambda\\min)`.
    """
    if r <= 0 or rho <= 0:
        raise ParameterError("kernel arguments must be positive")
    lo, hi = min(r, rho), max(r, rho)
    m, _ = specfun.whittaker_m(frame.kappa, frame.lam * lo)
    w = specfun.whittaker_w_value(frame.kappa, frame.lam * hi)
    return m * w / wronskian(frame)


def rank_one_weight(params, frame):
    """1/(alpha - F_{nu,kappa}), zero for the Friedrichs extension.

    :raises SpectralPointError: when -eta is an eigenvalue of H_alpha
    """
    if frame.nu != params.nu:
        raise ParameterError(f"frame nu={frame.nu} does not match params nu={params.nu}")
    if params.alpha is ALPHA_INF:
        return 0.0
    alpha = params.alpha
    gap = alpha - krein_constant(frame.nu, frame.kappa)
    if abs(gap) < SPECTRAL_POINT_TOL * (1.0 + abs(alpha)):
        raise SpectralPointError(
            f"spectral point {-frame.eta:.6g} is an eigenvalue of H_alpha (alpha={alpha})")
    return 1.0 / gap


def krein_resolvent_radial(params, frame, r, rho):
    """Kernel of (H_alpha + eta)^-1 on the half-line."""
    weight = rank_one_weight(params, frame)
    value = friedrichs_kernel(frame, r, rho)
    if weight:
        value += frame.gamma_factor ** 2 / FOUR_PI * weight * phi(frame, r) * phi(frame, rho)
    return value


def g_nu_kappa(frame, x_norm):
    """Gamma(1-kappa) W_{kappa,1/2}(lambda |x|) / (4 pi |x|)."""
    return frame.gamma_factor * phi(frame, x_norm) / (FOUR_PI * x_norm)


def krein_resolvent_3d(params, frame, x_norm, y_norm):
    """s-wave kernel of the three-dimensional resolvent at -eta.

    :returns: (l0_kernel, g_nu_kappa at x)
    :rtype: tuple of float
    """
    weight = rank_one_weight(params, frame)
    g_x = g_nu_kappa(frame, x_norm)
    value = friedrichs_kernel(frame, x_norm, y_norm) / (FOUR_PI * x_norm * y_norm)
    if weight:
        value += weight * g_x * g_nu_kappa(frame, y_norm)
    return value, g_x


def sample_kernel(params, frame, r, rho, which="radial"):
    """Evaluate a kernel and wrap it with the parameters it was evaluated for."""
    if which == "radial":
        value = krein_resolvent_radial(params, frame, r, rho)
        kind = "friedrichs" if params.alpha is ALPHA_INF else "extension"
        return KernelSample(r, rho, value, frame, kind, params.alpha)
    if which == "3d":
        value, g_x = krein_resolvent_3d(params, frame, r, rho)
        return KernelSample(r, rho, value, frame, "3d", params.alpha, g_x)
    raise ParameterError(f"unknown kernel kind {which!r}")


@dataclass
class ResolventApplication:
    """f = R_alpha g split as f = f_F + c Phi_kappa with f_F in the Friedrichs domain."""
    r: np.ndarray
    values: np.ndarray
    friedrichs_part: np.ndarray
    phi_coefficient: float
    warning: str = None


def apply_resolvent(params, frame, g, grid=None, points=None):
    """Apply the resolvent of H_alpha at -eta to g and return its domain decomposition."""
    weight = rank_one_weight(params, frame)
    base = apply_rg(frame, g, grid, points)
    coefficient = frame.gamma_factor ** 2 / FOUR_PI * weight * base.extras["phi_projection"]
    values = base.values + coefficient * phi(frame, base.r)
    return ResolventApplication(base.r, values, base.values, coefficient, base.warning)


def potential_form_partial(frame, g, eps, r_max=None, panel=0.25, order=8):
    """Truncated potential energy integral of |g|^2 / r over [eps, r_max].

    Integrated in t = ln r with composite Gauss-Legendre panels.

    :param eps: lower cut, 0 < eps <= 0.1
    :type eps: float
    """
    if not 0 < eps <= 0.1:
        raise ParameterError(f"eps must lie in (0, 0.1], got {eps}")
    r_max = frame.default_r_max if r_max is None else r_max
    t_lo, t_hi = math.log(eps), math.log(r_max)
    n_panels = max(1, int(math.ceil((t_hi - t_lo) / panel)))
    edges = np.linspace(t_lo, t_hi, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (0.5 * (edges[1:] + edges[:-1]))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    values = np.asarray(g(np.exp(t).ravel()), dtype=float).reshape(t.shape)
    return float(np.sum(weights * values ** 2))
