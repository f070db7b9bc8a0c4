import math

import numpy as np

from . import specfun
from .errors import ParameterError
from .radial import phi


class Profile:
    """Base class for radial profiles g(r) on the half-line.

    A profile is a callable taking an array of radii and returning the values
    of g there. Profiles are the right-hand sides fed to the resolvents and the
    functions whose boundary trace is extracted.
    """

    def __call__(self, r):
        """The empty profile, identically zero.

        :param r: radii
        :type r: array_like
        :returns: profile values
        :rtype: ndarray
        """
        return np.zeros_like(np.asarray(r, dtype=float))

    def __repr__(self):
        params = ", ".join(f"{key}={value!r}" for key, value in self.params.items())
        return f"{self.__class__.__name__}({params})"

    @property
    def params(self):
        return {}

    @staticmethod
    def radii(r):
        return np.asarray(r, dtype=float)


class GaussianBump(Profile):
    """Gaussian bump height * exp(-(r - centre)^2 / (2 width^2)).

    :param centre: centre of the bump
    :type centre: float
    :param width: standard deviation
    :type width: float
    :param height: peak value
    :type height: float
    """

    def __init__(self, centre=2.0, width=0.5, height=1.0):
        self.centre = centre
        self.width = width
        self.height = height

    @property
    def params(self):
        return {"centre": self.centre, "width": self.width, "height": self.height}

    def __call__(self, r):
        r = self.radii(r)
        return self.height * np.exp(-0.5 * ((r - self.centre) / self.width) ** 2)


class TruncatedPolynomial(Profile):
    """r^2 (cutoff - r)^4 for r < cutoff, zero beyond."""

    def __init__(self, cutoff=3.0):
        self.cutoff = cutoff

    @property
    def params(self):
        return {"cutoff": self.cutoff}

    def __call__(self, r):
        r = self.radii(r)
        return np.where(r < self.cutoff, r ** 2 * (self.cutoff - r) ** 4, 0.0)


class ExponentialProfile(Profile):
    """r^power exp(-rate r)."""

    def __init__(self, power=1, rate=1.0):
        self.power = power
        self.rate = rate

    @property
    def params(self):
        return {"power": self.power, "rate": self.rate}

    def __call__(self, r):
        r = self.radii(r)
        return r ** self.power * np.exp(-self.rate * r)


class WhittakerProfile(Profile):
    """Phi_kappa(r) = W_{kappa,1/2}(lambda r) of a shift frame."""

    def __init__(self, frame):
        self.frame = frame

    @property
    def params(self):
        return {"nu": self.frame.nu, "kappa": self.frame.kappa}

    def __call__(self, r):
        return np.asarray(phi(self.frame, r), dtype=float)


class EigenfunctionProfile(Profile):
    """Decaying solution W_{theta,1/2}(2 sqrt|E| r) of -u'' + (nu/r) u = E u.

    theta = -nu / (2 sqrt|E|) may exceed one, so W is evaluated for
    arbitrary real index.

    :param nu: coupling
    :type nu: float
    :param energy: negative energy
    :type energy: float
    """

    def __init__(self, nu, energy):
        if energy >= 0:
            raise ParameterError(f"energy must be negative, got {energy}")
        self.nu = nu
        self.energy = energy
        self.k = math.sqrt(-energy)
        self.theta = -nu / (2.0 * self.k)

    @property
    def params(self):
        return {"nu": self.nu, "energy": self.energy}

    def __call__(self, r):
        r = self.radii(r)
        flat = np.atleast_1d(r).ravel()
        values = np.array([specfun.whittaker_w(self.theta, 2.0 * self.k * x)[0] for x in flat])
        return values.reshape(r.shape)

    def derivative(self, r):
        r = self.radii(r)
        flat = np.atleast_1d(r).ravel()
        values = np.array([2.0 * self.k * specfun.whittaker_w(self.theta, 2.0 * self.k * x)[1]
                           for x in flat])
        return values.reshape(r.shape)
