"""Parameter algebra and boundary machinery of the half-line Coulomb problem.

The operator is :math:`-d^2/dr^2 + \\nu/r` on the half-line. Every extension
is labelled by :math:`\\alpha \\in \\mathbb{R}\\cup\\{\\infty\\}` through the
boundary condition :math:`g_1 = 4\\pi\\alpha g_0` on the short distance
expansion :math:`g = g_0(1 + \\nu r\\ln r) + g_1 r + o(r^{3/2})`.
All formulas of the construction live in a shift frame fixed by an auxiliary
:math:`\\kappa` with :math:`\\mathrm{sign}\\,\\kappa = -\\mathrm{sign}\\,\\nu`.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ParameterError, TraceError

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * math.pi


class Extended(enum.Enum):
    """The point at infinity of the extended real line."""
    INFINITY = "inf"

    def __repr__(self):
        return "ALPHA_INF"

    def __str__(self):
        return "inf"


#: Extension parameter of the Friedrichs extension (and its beta label).
ALPHA_INF = Extended.INFINITY


def parse_extended(value):
    """Turn "inf", math.inf or a number into an extended real.

    :param value: textual or numeric value
    :type value: str or float or Extended
    :returns: a float or :data:`ALPHA_INF`
    """
    if value is ALPHA_INF:
        return value
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "friedrichs"):
            return ALPHA_INF
        try:
            value = float(text)
        except ValueError:
            raise ParameterError(f"Cannot read extended real from {value!r}") from None
    value = float(value)
    if math.isnan(value):
        raise ParameterError("NaN is not an extended real")
    if math.isinf(value):
        if value < 0:
            raise ParameterError("-inf does not label an extension")
        return ALPHA_INF
    return value


def format_extended(value):
    return "inf" if value is ALPHA_INF else repr(float(value))


@dataclass(frozen=True)
class CoulombParams:
    """Coupling nu and extension parameter alpha of one operator H_alpha."""
    nu: float
    alpha: object = ALPHA_INF

    def __post_init__(self):
        nu = float(self.nu)
        if nu == 0 or not math.isfinite(nu):
            raise ParameterError(f"nu must be finite and nonzero, got {self.nu}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "alpha", parse_extended(self.alpha))

    @property
    def is_friedrichs(self):
        return self.alpha is ALPHA_INF


@dataclass(frozen=True)
class ShiftFrame:
    """Auxiliary kappa with lambda = -nu/kappa and shift eta = nu^2/(4 kappa^2)."""
    nu: float
    kappa: float
    lam: float
    eta: float

    @property
    def gamma_factor(self):
        """Gamma(1 - kappa), positive on kappa < 1."""
        return specfun.gamma(1.0 - self.kappa)

    @property
    def default_r_max(self):
        return 40.0 / self.lam + 40.0 / math.sqrt(self.eta)


def make_frame(nu, kappa):
    """Build the shift frame for (nu, kappa).

    :param nu: nonzero coupling
    :type nu: float
    :param kappa: auxiliary parameter with sign(kappa) = -sign(nu), kappa in (-inf, 0) or (0, 1)
    :type kappa: float
    :rtype: ShiftFrame
    """
    nu = float(nu)
    kappa = float(kappa)
    if nu == 0:
        raise ParameterError("nu must be nonzero")
    if kappa == 0 or kappa >= 1:
        raise ParameterError(f"kappa must lie in (-inf, 0) or (0, 1), got {kappa}")
    if math.copysign(1.0, kappa) != -math.copysign(1.0, nu):
        raise ParameterError(f"kappa must have the sign opposite to nu (nu={nu}, kappa={kappa})")
    lam = -nu / kappa
    eta = nu * nu / (4.0 * kappa * kappa)
    return ShiftFrame(nu=nu, kappa=kappa, lam=lam, eta=eta)


def default_frame(nu):
    """Frame with |kappa| = 1/2, the one used when no kappa is requested."""
    return make_frame(nu, -math.copysign(0.5, nu))


def fundamental_system(frame, r):
    """F(r) = M_{kappa,1/2}(lambda r), Phi(r) = W_{kappa,1/2}(lambda r) and r-derivatives.

    :param frame: shift frame
    :type frame: ShiftFrame
    :param r: radius or array of radii, all positive
    :type r: float or array_like
    :returns: (F, Phi, F_prime, Phi_prime), floats for scalar r, arrays otherwise
    """
    radii = np.asarray(r, dtype=float)
    flat = np.atleast_1d(radii).ravel()
    out = np.empty((4, flat.size))
    for i, radius in enumerate(flat):
        pair = specfun.whittaker(frame.kappa, frame.lam * radius)
        out[:, i] = (pair.m, pair.w, frame.lam * pair.m_prime, frame.lam * pair.w_prime)
    if radii.ndim == 0:
        return tuple(float(v) for v in out[:, 0])
    return tuple(row.reshape(radii.shape) for row in out)


def phi(frame, r):
    """Phi_kappa(r) alone (cheaper than the full fundamental system)."""
    radii = np.asarray(r, dtype=float)
    values = np.array([specfun.whittaker_w_value(frame.kappa, frame.lam * x)
                       for x in np.atleast_1d(radii).ravel()])
    if radii.ndim == 0:
        return float(values[0])
    return values.reshape(radii.shape)


def wronskian(frame):
    """Wronskian Phi F' - F Phi' = lambda / Gamma(1 - kappa) of the pair (F, Phi)."""
    return frame.lam * specfun.rgamma(1.0 - frame.kappa)


@dataclass(frozen=True)
class BoundaryTrace:
    """Limits (g0, g1) of the short distance expansion of a function."""
    g0: float
    g1: float
    residual: float = 0.0

    @property
    def alpha_implied(self):
        """The alpha whose boundary condition this trace satisfies."""
        if self.g0 == 0:
            return ALPHA_INF
        return self.g1 / (FOUR_PI * self.g0)


@dataclass(frozen=True)
class ExtensionBeta:
    """Shift-dependent label beta of an extension in a given frame."""
    beta: object
    frame: ShiftFrame

    def __post_init__(self):
        object.__setattr__(self, "beta", parse_extended(self.beta))

    @classmethod
    def from_alpha(cls, alpha, frame, phi_norm_sq):
        return cls(beta_from_alpha(alpha, frame, phi_norm_sq), frame)

    @property
    def is_friedrichs(self):
        return self.beta is ALPHA_INF

    def alpha(self, phi_norm_sq):
        """The frame-independent alpha of the same extension."""
        return alpha_from_beta(self.beta, self.frame, phi_norm_sq)


def _samples(g, r, r_min, decades, samples):
    if r is None:
        r = np.geomspace(r_min, r_min * 10 ** decades, samples)
        values = np.asarray(g(r), dtype=float)
    else:
        r = np.asarray(r, dtype=float)
        values = np.asarray(g, dtype=float)
        window = r <= r.min() * 10 ** decades
        r, values = r[window], values[window]
    if r.size < 4:
        raise TraceError("at least four samples are needed in the fit window")
    return r, values


def boundary_trace(g, nu, r=None, r_min=1e-6, decades=2, samples=41, rtol=1e-6):
    """Extract (g0, g1) from a function near the origin.

    A least-squares fit over the smallest ``decades`` decades of samples of the
    model :math:`g_0\\,(1 + \\nu r\\ln r + \\tfrac{\\nu^2}{2} r^2\\ln r) + g_1 r + c r^2`.
    The r^2 log r coefficient is tied to g0 by the ODE; c is free.

    :param g: callable g(r) accepting arrays, or sampled values when ``r`` is given
    :type g: callable or array_like
    :param nu: coupling
    :type nu: float
    :param r: sample points for array input (geometric grid refining to ~1e-6)
    :type r: array_like or None
    :param r_min: left end of the fit window for callable input
    :type r_min: float
    :param decades: width of the fit window in decades
    :type decades: float
    :param samples: number of samples for callable input
    :type samples: int
    :param rtol: admissible fit residual relative to max |g| on the window
    :type rtol: float
    :returns: the trace, with the root-mean-square relative fit residual
    :rtype: BoundaryTrace
    """
    r, values = _samples(g, r, r_min, decades, samples)
    r_hi = r.max()
    x = r / r_hi
    log_r = np.log(r)
    design = np.column_stack([
        1.0 + nu * r * log_r + 0.5 * nu * nu * r * r * log_r,
        x,
        x * x,
    ])
    coeffs, *_ = np.linalg.lstsq(design, values, rcond=None)
    scale = float(np.max(np.abs(values))) + 1e-300
    residual = float(np.sqrt(np.mean((design @ coeffs - values) ** 2))) / scale
    if residual > rtol:
        raise TraceError(f"not in adjoint domain: fit residual {residual:.3e} exceeds {rtol:.1e}")
    if residual > 0.1 * rtol:
        logger.warning("boundary trace fit residual %.3e is close to the tolerance", residual)
    return BoundaryTrace(g0=float(coeffs[0]), g1=float(coeffs[1] / r_hi), residual=residual)


def krein_constant(nu, kappa):
    """(nu/4pi)(psi(1-kappa) + ln(-nu/kappa) + 2 gamma - 1 + 1/(2 kappa)).

    No frame restriction on kappa is applied, so it can be evaluated at
    kappa = -nu/(2 sqrt|E|) for any eigenvalue E.
    """
    return nu / FOUR_PI * (specfun.digamma(1.0 - kappa) + math.log(-nu / kappa)
                           + 2 * specfun.EULER_GAMMA - 1 + 0.5 / kappa)


def classification_coeffs(frame, phi_norm_sq):
    """Coefficients (c, d) with C1/C0 = c beta + d for the extension labelled by beta.

    :param frame: shift frame
    :type frame: ShiftFrame
    :param phi_norm_sq: squared L2 norm of Phi_kappa
    :type phi_norm_sq: float
    :rtype: tuple of float
    """
    if not phi_norm_sq > 0:
        raise ParameterError("phi_norm_sq must be positive")
    nu, kappa = frame.nu, frame.kappa
    inv_gamma = specfun.rgamma(1.0 - kappa)
    c = phi_norm_sq / inv_gamma
    d = nu * (2 * specfun.digamma(1.0 - kappa) + 2 * math.log(frame.lam)
              + 2 * (2 * specfun.EULER_GAMMA - 1) + 1.0 / kappa) * inv_gamma / 2
    return c, d


def alpha_from_beta(beta, frame, phi_norm_sq):
    """alpha = Gamma(1-kappa)(c beta + d)/(4 pi); beta = inf gives alpha = inf.

    Gamma(1-kappa) d/(4 pi) is the Krein constant of the frame, which is how the
    affine map is evaluated so that beta = 0 lands on it exactly.
    """
    beta = parse_extended(beta)
    if beta is ALPHA_INF:
        return ALPHA_INF
    gamma_factor = frame.gamma_factor
    weight = gamma_factor ** 2 * phi_norm_sq / FOUR_PI
    return krein_constant(frame.nu, frame.kappa) + weight * beta


def beta_from_alpha(alpha, frame, phi_norm_sq):
    """Inverse of :func:`alpha_from_beta`; alpha equal to the Krein constant gives beta = 0."""
    alpha = parse_extended(alpha)
    if alpha is ALPHA_INF:
        return ALPHA_INF
    gamma_factor = frame.gamma_factor
    weight = gamma_factor ** 2 * phi_norm_sq / FOUR_PI
    return (alpha - krein_constant(frame.nu, frame.kappa)) / weight


def ground_state_bound(frame, beta):
    """Upper bound beta - eta for the lowest eigenvalue of the extension labelled by beta."""
    beta = parse_extended(beta)
    if beta is ALPHA_INF:
        return ALPHA_INF
    return beta - frame.eta


def in_extension_domain(trace, params, tol=1e-6, floor=1e-12):
    """Whether a trace satisfies the boundary condition g1 = 4 pi alpha g0.

    :param trace: extracted trace
    :type trace: BoundaryTrace
    :param params: operator parameters
    :type params: CoulombParams
    :param tol: relative tolerance
    :type tol: float
    :param floor: absolute floor of the scale
    :type floor: float
    :rtype: bool
    """
    violation, scale = extension_violation(trace, params, floor)
    return violation <= tol * scale


def extension_violation(trace, params, floor=1e-12):
    """Violation |g1 - 4 pi alpha g0| (|g0| for alpha = inf) and the scale it is measured against."""
    g0, g1 = trace.g0, trace.g1
    if params.alpha is ALPHA_INF:
        return abs(g0), abs(g1) + floor
    alpha = params.alpha
    violation = abs(g1 - FOUR_PI * alpha * g0)
    scale = abs(g1) + FOUR_PI * abs(alpha) * abs(g0) + abs(g0) + floor
    return violation, scale
