from .core import compute_spectrum, fibration, kernel_sample, run_verification, spectral_function_curve, write
from .errors import (ConfigError, DomainError, HydrogenoidError, ParameterError, PoleError,
                     SolverError, SpectralPointError, TraceError)
from .radial import ALPHA_INF, CoulombParams, ShiftFrame, boundary_trace, default_frame, make_frame
from .spectra import alpha_threshold, assemble_spectrum, spectral_function
