"""Real-argument special functions.

Gamma, digamma, Kummer's M, Tricomi's U and the Whittaker functions
:math:`\\mathscr{M}_{\\kappa,1/2}`, :math:`\\mathscr{W}_{\\kappa,1/2}` together
with their first derivatives. Everything is evaluated in double precision;
error estimates are heuristic (size of the last retained term plus rounding
accumulated over the summation).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError, PoleError

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)
EPS = float(np.finfo(float).eps)

# M and U switch from their convergent (or connection) series to the
# large-argument expansions beyond this point.
Z_SWITCH = 40.0
# Below this point U(a, b, z) is summed from the logarithmic series.
Z_SMALL = 2.0

# B_{2k} / (2k) for k = 1..7, the Stirling-type tail of the digamma function
_DIGAMMA_TAIL = (1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
                 1.0 / 132, -691.0 / 32760, 1.0 / 12)
_DIGAMMA_SHIFT = 10.0
_MAX_TERMS = 5000


@dataclass(frozen=True)
class SpecfunResult:
    """Value of a special function with a heuristic absolute error bound."""
    value: float
    abs_err_est: float


@dataclass(frozen=True)
class WhittakerPair:
    """Whittaker functions of second parameter 1/2 and their rho-derivatives."""
    m: float
    w: float
    m_prime: float
    w_prime: float

    @property
    def wronskian(self):
        """w m' - m w', equal to 1/Gamma(1 - kappa) for every rho."""
        return self.w * self.m_prime - self.m * self.w_prime


def is_pole(x):
    """True when x is a nonpositive integer, i.e. a pole of Gamma and digamma."""
    return x <= 0 and float(x).is_integer()


def _check_pole(x, name, nan_at_poles):
    if is_pole(x):
        if nan_at_poles:
            return True
        raise PoleError(f"{name} has a pole at x = {x}")
    return False


def gamma(x, nan_at_poles=False):
    """Gamma function.

    :param x: argument, not a nonpositive integer
    :type x: float
    :param nan_at_poles: return NaN at a pole instead of raising
    :type nan_at_poles: bool
    :returns: :math:`\\Gamma(x)`
    :rtype: float
    """
    if _check_pole(x, "gamma", nan_at_poles):
        return math.nan
    return float(special.gamma(x))


def rgamma(x):
    """Reciprocal Gamma function, an entire function (zero at the poles of Gamma)."""
    return float(special.rgamma(x))


def log_gamma(x, nan_at_poles=False):
    """Logarithm of :math:`|\\Gamma(x)|`."""
    if _check_pole(x, "log_gamma", nan_at_poles):
        return math.nan
    return float(special.gammaln(x))


def digamma(x, nan_at_poles=False):
    """Digamma function :math:`\\psi(x) = \\Gamma'(x)/\\Gamma(x)`.

    The argument is shifted upwards with :math:`\\psi(x+1) = \\psi(x) + 1/x`
    until it exceeds 10, then the asymptotic series is summed. Arguments below
    -50 are reflected first. The upward recurrence keeps full accuracy close
    to the poles because x + k is formed exactly there.

    :param x: argument, not a nonpositive integer
    :type x: float
    :param nan_at_poles: return NaN at a pole instead of raising
    :type nan_at_poles: bool
    :rtype: float
    """
    x = float(x)
    if _check_pole(x, "digamma", nan_at_poles):
        return math.nan
    if x < -50.0:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    shift = 0.0
    while x < _DIGAMMA_SHIFT:
        shift += 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    power = inv2
    for coeff in _DIGAMMA_TAIL:
        tail += coeff * power
        power *= inv2
    return math.log(x) - 0.5 / x - tail - shift


def _pochhammer_ratio_terms(a, b, z):
    """Yield successive terms (a)_k z^k / ((b)_k k!) of the Kummer series."""
    term = 1.0
    k = 0
    yield term
    while k < _MAX_TERMS:
        if a + k == 0:
            return
        term *= (a + k) / (b + k) * z / (k + 1)
        k += 1
        yield term


def _kummer_series(a, b, z):
    total = 0.0
    magnitude = 0.0
    last = 0.0
    for k, term in enumerate(_pochhammer_ratio_terms(a, b, z)):
        total += term
        magnitude += abs(term)
        last = term
        if k > z and abs(term) <= EPS * abs(total):
            break
    else:
        last = 0.0
    return SpecfunResult(total, abs(last) + 2 * EPS * magnitude)


def _kummer_asymptotic(a, b, z):
    prefactor = special.gamma(b) * special.rgamma(a) * math.exp(z) * z ** (a - b)
    total = 1.0
    term = 1.0
    k = 0
    while k < _MAX_TERMS:
        nxt = term * (b - a + k) * (1 - a + k) / ((k + 1) * z)
        if abs(nxt) >= abs(term) or nxt == 0.0:
            break
        term = nxt
        total += term
        k += 1
        if abs(term) <= EPS * abs(total):
            break
    return SpecfunResult(prefactor * total,
                         abs(prefactor) * (abs(term) + 2 * EPS * abs(total)))


def kummer_m(a, b, z):
    """Kummer's confluent hypergeometric function M(a, b, z).

    The power series is used for z <= 40 (and always when a is a nonpositive
    integer, where it terminates), the leading large-z expansion beyond.

    :param a: first parameter
    :type a: float
    :param b: second parameter, not a nonpositive integer
    :type b: float
    :param z: argument, z >= 0
    :type z: float
    :rtype: SpecfunResult
    """
    if is_pole(b):
        raise DomainError(f"kummer_m: b = {b} is a nonpositive integer")
    if z < 0:
        raise DomainError(f"kummer_m: negative argument z = {z}")
    if z <= Z_SWITCH or is_pole(a):
        return _kummer_series(a, b, z)
    return _kummer_asymptotic(a, b, z)


def _integer_b(b):
    if not float(b).is_integer() or b < 1:
        raise DomainError(f"tricomi_u: only integer b >= 1 is supported, got b = {b}")
    return int(b)


def _tricomi_laguerre(m, b, z):
    # U(-m, b, z) = (-1)^m m! L_m^(b-1)(z)
    value = (-1) ** m * math.factorial(m) * special.eval_genlaguerre(m, b - 1, z)
    return SpecfunResult(float(value), 4 * EPS * abs(value) * (m + 1))


def _tricomi_log_series(a, b, z):
    """Logarithmic series for integer b = n + 1 (connection formula)."""
    n = b - 1
    log_z = math.log(z)
    term = 1.0
    total = 0.0
    magnitude = 0.0
    last = 0.0
    k = 0
    while k < _MAX_TERMS:
        bracket = log_z + digamma(a + k) - digamma(1.0 + k) - digamma(n + k + 1.0)
        contribution = term * bracket
        total += contribution
        magnitude += abs(contribution)
        last = contribution
        if k > 2 and abs(contribution) <= EPS * max(abs(total), 1e-300):
            break
        term *= (a + k) * z / ((n + 1 + k) * (k + 1))
        k += 1
        if term == 0.0:
            break
    scale = (-1) ** (n + 1) * rgamma(a - n) / math.factorial(n)
    singular = 0.0
    for j in range(1, n + 1):
        singular += (math.factorial(j - 1) * special.poch(1 - a + j, n - j)
                     / math.factorial(n - j) * z ** (-j))
    singular *= rgamma(a)
    value = scale * total + singular
    err = abs(scale) * (abs(last) + 4 * EPS * magnitude) + 4 * EPS * abs(singular)
    return SpecfunResult(value, err)


def _tricomi_asymptotic(a, b, z):
    total = 1.0
    term = 1.0
    k = 0
    while k < _MAX_TERMS:
        nxt = -term * (a + k) * (a - b + 1 + k) / ((k + 1) * z)
        if abs(nxt) >= abs(term) or nxt == 0.0:
            break
        term = nxt
        total += term
        k += 1
        if abs(term) <= EPS * abs(total):
            break
    scale = z ** (-a)
    return SpecfunResult(scale * total, abs(scale) * (abs(term) + 2 * EPS * abs(total)))


def _tricomi_integral(a, b, z):
    """Laplace-type integral representation, valid for a >= 1 here."""
    def integrand(t):
        return math.exp(-z * t) * t ** (a - 1) * (1.0 + t) ** (b - a - 1)

    value, err = integrate.quad(integrand, 0.0, np.inf, epsabs=0.0,
                                epsrel=1e-13, limit=200)
    scale = rgamma(a)
    return scale * value, abs(scale) * err


def _tricomi_pair(a, b, z):
    """U(a, b, z) and U(a + 1, b, z) in the intermediate range 2 < z <= 40.

    For a < 1 the pair is started at a0 in [1, 2) from the integral
    representation and carried down with the a-recurrence, which is the
    stable direction for U.
    """
    steps = 0
    if a < 1.0:
        steps = int(math.ceil(1.0 - a))
    a0 = a + steps
    upper, upper_err = _tricomi_integral(a0 + 1, b, z)
    current, current_err = _tricomi_integral(a0, b, z)
    err = max(current_err, upper_err)
    level = a0
    for _ in range(steps):
        # U(c-1) = (2c - b + z) U(c) - c (c - b + 1) U(c+1)
        lower = (2 * level - b + z) * current - level * (level - b + 1) * upper
        err *= abs(2 * level - b + z) + abs(level * (level - b + 1))
        upper, current = current, lower
        level -= 1
    return current, upper, err + 4 * EPS * abs(current)


def tricomi_u(a, b, z):
    """Tricomi's confluent hypergeometric function U(a, b, z) for integer b >= 1.

    Nonpositive integer a gives a Laguerre polynomial. Otherwise the
    logarithmic connection series is summed for z <= 2, the integral
    representation (with downward a-recurrence) is used up to z = 40 and the
    asymptotic series :math:`z^{-a}\\sum_k (a)_k (a-b+1)_k/k!\\,(-z)^{-k}`
    beyond, truncated at its smallest term.

    :param a: first parameter
    :type a: float
    :param b: second parameter, an integer >= 1 (2 for the Whittaker case)
    :type b: int
    :param z: argument, z > 0
    :type z: float
    :rtype: SpecfunResult
    """
    b = _integer_b(b)
    if z <= 0:
        raise DomainError(f"tricomi_u: argument must be positive, got z = {z}")
    if is_pole(a):
        return _tricomi_laguerre(int(-a), b, z)
    if z <= Z_SMALL:
        return _tricomi_log_series(a, b, z)
    if z > Z_SWITCH:
        return _tricomi_asymptotic(a, b, z)
    if a >= 1.0:
        value, err = _tricomi_integral(a, b, z)
        return SpecfunResult(value, err + 4 * EPS * abs(value))
    value, _, err = _tricomi_pair(a, b, z)
    return SpecfunResult(value, err)


def _check_rho(rho):
    if rho <= 0:
        raise DomainError(f"Whittaker functions need rho > 0, got {rho}")


def whittaker_w(kappa, rho):
    """:math:`\\mathscr{W}_{\\kappa,1/2}(\\rho)` and its derivative for any real kappa.

    Needed beyond kappa < 1 for eigenfunctions of high levels.

    :returns: (w, w_prime)
    :rtype: tuple of float
    """
    _check_rho(rho)
    a = 1.0 - kappa
    damping = math.exp(-0.5 * rho)
    if Z_SMALL < rho <= Z_SWITCH and not is_pole(a):
        u0, u1, _ = _tricomi_pair(a, 2, rho)
        # z W_k' = (z/2 - k) W_k - W_{k+1}, with W_{k+1} from the a-recurrence
        u_down = (2 * a - 2 + rho) * u0 - a * (a - 1) * u1
        w = damping * rho * u0
        w_up = damping * rho * u_down
        return w, ((0.5 * rho - kappa) * w - w_up) / rho
    u = tricomi_u(a, 2, rho).value
    du = -a * tricomi_u(a + 1, 3, rho).value if a != 0 else 0.0
    w = damping * rho * u
    return w, damping * ((1.0 - 0.5 * rho) * u + rho * du)


def whittaker_w_value(kappa, rho):
    """:math:`\\mathscr{W}_{\\kappa,1/2}(\\rho)` without the derivative."""
    _check_rho(rho)
    return math.exp(-0.5 * rho) * rho * tricomi_u(1.0 - kappa, 2, rho).value


def whittaker_m(kappa, rho):
    """:math:`\\mathscr{M}_{\\kappa,1/2}(\\rho)` and its derivative."""
    _check_rho(rho)
    a = 1.0 - kappa
    damping = math.exp(-0.5 * rho)
    m = kummer_m(a, 2, rho).value
    dm = 0.5 * a * kummer_m(a + 1, 3, rho).value
    return damping * rho * m, damping * ((1.0 - 0.5 * rho) * m + rho * dm)


def whittaker(kappa, rho):
    """Whittaker pair :math:`(\\mathscr{M}_{\\kappa,1/2}, \\mathscr{W}_{\\kappa,1/2})` at rho.

    :math:`\\mathscr{M} = e^{-\\rho/2}\\rho M(1-\\kappa, 2, \\rho)` and
    :math:`\\mathscr{W} = e^{-\\rho/2}\\rho U(1-\\kappa, 2, \\rho)`.

    :param kappa: kappa < 1
    :type kappa: float
    :param rho: rho > 0
    :type rho: float
    :rtype: WhittakerPair
    """
    if kappa >= 1:
        raise DomainError(f"whittaker pair requires kappa < 1, got {kappa}")
    m, m_prime = whittaker_m(kappa, rho)
    w, w_prime = whittaker_w(kappa, rho)
    return WhittakerPair(m, w, m_prime, w_prime)


def whittaker_w_small_r_coeffs(kappa):
    """Leading coefficients of :math:`\\mathscr{W}_{\\kappa,1/2}(\\rho)` as rho -> 0.

    :math:`\\mathscr{W} = c_0 + c_1\\rho\\ln\\rho + c_2\\rho + o(\\rho)`.

    :returns: (c_const, c_rlogr, c_r)
    :rtype: tuple of float
    """
    if kappa >= 1:
        raise DomainError(f"small-argument expansion requires kappa < 1, got {kappa}")
    inv = rgamma(1.0 - kappa)
    c_r = ((2 - 4 * EULER_GAMMA) * kappa - 2 * kappa * digamma(1.0 - kappa) - 1) * inv / 2
    return inv, -kappa * inv, c_r
