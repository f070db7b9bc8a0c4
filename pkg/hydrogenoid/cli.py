"""Command line entry point.

Exit codes: 0 success, 1 bad input, 2 solver failure, 3 spectral point hit by
a resolvent, 4 failed verification.
"""
import json
import logging
import sys
from dataclasses import dataclass, fields

import click
import numpy as np
from clint.textui import progress

from . import core
from .errors import (ConfigError, DomainError, ParameterError, SolverError,
                     SpectralPointError, TraceError)
from .parameter_sets import parameter_sets
from .radial import ALPHA_INF, format_extended, parse_extended
from .spectra import DEFAULT_N_MAX, DEFAULT_TOL

logger = logging.getLogger(__name__)

EXIT_INPUT = 1
EXIT_SOLVER = 2
EXIT_SPECTRAL_POINT = 3
EXIT_VERIFY = 4


@dataclass(frozen=True)
class RunConfig:
    """Settings of one command, merged from a JSON config file and the flags."""
    nu: float = None
    alpha: object = ALPHA_INF
    kappa: float = None
    n_max: int = DEFAULT_N_MAX
    tol: float = DEFAULT_TOL
    e_grid: str = None
    alpha_grid: str = None
    out: str = None
    format: str = None

    def __post_init__(self):
        if self.nu is not None:
            nu = float(self.nu)
            if nu == 0 or not np.isfinite(nu):
                raise ParameterError(f"nu must be finite and nonzero, got {self.nu}")
            object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "alpha", parse_extended(self.alpha))
        if self.kappa is not None:
            object.__setattr__(self, "kappa", float(self.kappa))
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ParameterError(f"n_max must be a positive integer, got {self.n_max}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if not float(self.tol) > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.format not in (None, "csv", "json"):
            raise ParameterError(f"format must be csv or json, got {self.format}")

    def require_nu(self):
        if self.nu is None:
            raise ParameterError("nu is required (flag --nu or config key nu)")
        return self.nu

    def write(self, result):
        """Write to --out (format from --format or the suffix) or to stdout as csv."""
        core.write(result, self.out, self.format)


CONFIG_KEYS = tuple(f.name for f in fields(RunConfig))


def load_config(path):
    """Read a JSON config file; unknown keys are rejected.

    :param path: JSON document with a subset of the RunConfig keys
    :type path: str
    :rtype: dict
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"Unknown config keys {unknown}, allowed keys are {list(CONFIG_KEYS)}")
    return data


def resolve_config(ctx, config_path, **flags):
    """RunConfig from the config file, overridden by flags given on the command line."""
    values = load_config(config_path) if config_path else {}
    for key, value in flags.items():
        source = ctx.get_parameter_source("fmt" if key == "format" else key)
        explicit = source is not None and source.name not in ("DEFAULT", "DEFAULT_MAP")
        if explicit or key not in values:
            values[key] = value
    values = {key: value for key, value in values.items() if value is not None}
    return RunConfig(**values)


def parse_grid(text, geometric=False):
    """Grid from ``lo:hi:count``; a trailing ``:log`` or ``:lin`` selects the spacing."""
    parts = text.split(":")
    if len(parts) == 4:
        geometric = {"log": True, "lin": False}.get(parts[3])
        if geometric is None:
            raise ParameterError(f"grid spacing must be log or lin, got {parts[3]!r}")
        parts = parts[:3]
    if len(parts) != 3:
        raise ParameterError(f"grid must read lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ParameterError(f"grid must read lo:hi:count, got {text!r}") from None
    if count < 1 or (count > 1 and not lo < hi):
        raise ParameterError(f"grid needs lo < hi and count >= 1, got {text!r}")
    if geometric:
        if lo * hi <= 0:
            raise ParameterError(f"log grid endpoints must share their sign, got {text!r}")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def _progress(items):
    return progress.bar(items, expected_size=len(items))


def _common_options(func):
    for option in reversed([
        click.option("--nu", type=float, default=None, help="Coulomb coupling, nonzero (negative is attractive)."),
        click.option("--alpha", type=str, default=None, help='Extension parameter, "inf" for Friedrichs.'),
        click.option("--n-max", "n_max", type=int, default=None, help="Number of gaps solved for nu < 0."),
        click.option("--tol", type=float, default=None, help="Residual tolerance of the root solver."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file, stdout if omitted."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
                     help="Output format, by default from the --out suffix."),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON config file mirroring the flags."),
    ]):
        func = option(func)
    return func


@click.group()
@click.option("-v", "--verbose", count=True, help="Log INFO, repeat for DEBUG.")
def cli(verbose):
    """Spectra and resolvents of the self-adjoint extensions of the hydrogenoid Hamiltonian."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


@cli.command()
@_common_options
@click.pass_context
def spectrum(ctx, nu, alpha, n_max, tol, out, fmt, config_path):
    """Negative eigenvalues of H_alpha."""
    cfg = resolve_config(ctx, config_path, nu=nu, alpha=alpha, n_max=n_max, tol=tol,
                         out=out, format=fmt)
    report = core.compute_spectrum(cfg.require_nu(), cfg.alpha, cfg.n_max, cfg.tol)
    cfg.write(report)
    return 0


@cli.command()
@_common_options
@click.option("--alpha-grid", "alpha_grid", type=str, default=None, help="alpha grid lo:hi:count.")
@click.pass_context
def fibration(ctx, nu, alpha, n_max, tol, out, fmt, config_path, alpha_grid):
    """Eigenvalue curves alpha -> E_n over a grid of alphas (long format)."""
    cfg = resolve_config(ctx, config_path, nu=nu, alpha=alpha, n_max=n_max, tol=tol,
                         out=out, format=fmt, alpha_grid=alpha_grid)
    if cfg.alpha_grid is None:
        raise ParameterError("fibration needs --alpha-grid lo:hi:count")
    table = core.fibration(cfg.require_nu(), parse_grid(cfg.alpha_grid), cfg.n_max, cfg.tol,
                           progress=_progress)
    cfg.write(table)
    failures = table.failures
    if failures:
        lines = [f"alpha={format_extended(row.alpha)} n={row.n}: {row.error}" for row in failures]
        if cfg.out is not None:
            with open(cfg.out + ".warnings.txt", "w", encoding="utf-8", newline="\n") as fh:
                fh.write("\n".join(lines) + "\n")
        for line in lines:
            click.echo(f"warning: {line}", err=True)
    return 0


@cli.command("spectral-function")
@_common_options
@click.option("--e-grid", "e_grid", type=str, default=None,
              help="Energy grid lo:hi:count, geometric unless :lin is appended.")
@click.pass_context
def spectral_function(ctx, nu, alpha, n_max, tol, out, fmt, config_path, e_grid):
    """Samples of the spectral function F_nu(E) between its asymptotes."""
    cfg = resolve_config(ctx, config_path, nu=nu, alpha=alpha, n_max=n_max, tol=tol,
                         out=out, format=fmt, e_grid=e_grid)
    if cfg.e_grid is None:
        raise ParameterError("spectral-function needs --e-grid lo:hi:count")
    curve = core.spectral_function_curve(cfg.require_nu(), parse_grid(cfg.e_grid, geometric=True),
                                         progress=_progress)
    cfg.write(curve)
    return 0


@cli.command()
@_common_options
@click.option("--kappa", type=float, default=None, help="Auxiliary kappa of the shift frame.")
@click.option("--r", "r", type=float, required=True, help="First radius.")
@click.option("--rho", type=float, required=True, help="Second radius.")
@click.option("--kind", type=click.Choice(["radial", "3d"]), default="radial",
              help="Half-line kernel or the s-wave three-dimensional kernel.")
@click.pass_context
def kernel(ctx, nu, alpha, n_max, tol, out, fmt, config_path, kappa, r, rho, kind):
    """Resolvent kernel of H_alpha at the spectral point -nu^2/(4 kappa^2)."""
    cfg = resolve_config(ctx, config_path, nu=nu, alpha=alpha, n_max=n_max, tol=tol,
                         out=out, format=fmt, kappa=kappa)
    sample = core.kernel_sample(cfg.require_nu(), cfg.alpha, cfg.kappa, r, rho, kind)
    cfg.write(sample)
    return 0


@cli.command()
@click.option("--preset", type=click.Choice(sorted(parameter_sets)), default="verify_default",
              help="Named parameter set.")
@click.option("--nu", type=float, default=None, help="Override the coupling of the preset.")
@click.option("--alpha", type=str, default=None, help="Override alpha of the preset.")
@click.option("--kappa", type=float, default=None, help="Override kappa of the preset.")
@click.option("--n-max", "n_max", type=int, default=None, help="Number of eigenvalues checked.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON report file.")
@click.option("--psi-offset", "psi_offset", type=float, default=0.0, hidden=True)
def verify(preset, nu, alpha, kappa, n_max, out, psi_offset):
    """Run the cross-module verification battery and print a JSON report."""
    values = dict(parameter_sets[preset])
    overrides = {"nu": nu, "alpha": alpha, "kappa": kappa, "n_check": n_max}
    values.update({key: value for key, value in overrides.items() if value is not None})
    if nu is not None and kappa is None:
        # the preset kappa belongs to the preset coupling
        values["kappa"] = None
    cfg = RunConfig(nu=values["nu"], alpha=values["alpha"], kappa=values["kappa"],
                    n_max=values["n_check"], out=out, format="json")
    report = core.run_verification(cfg.nu, cfg.alpha, cfg.kappa, cfg.n_max, psi_offset=psi_offset)
    cfg.write(report)
    if not report.passed:
        click.echo(f"verification failed: {', '.join(report.failed)}", err=True)
        return EXIT_VERIFY
    return 0


def main(argv=None):
    """Run the command line and return its exit code.

    :param argv: arguments without the program name, sys.argv[1:] if None
    :type argv: list of str
    :rtype: int
    """
    try:
        code = cli.main(args=argv, prog_name="hydrogenoid", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_INPUT
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_INPUT
    except SpectralPointError as exc:
        click.echo(f"spectral point: {exc}", err=True)
        return EXIT_SPECTRAL_POINT
    except SolverError as exc:
        click.echo(f"solver failure: {exc}", err=True)
        return EXIT_SOLVER
    except (ParameterError, DomainError, TraceError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
