from hydrogenoid import compute_spectrum
from hydrogenoid.oracle import fd_spectrum_extrapolated
from hydrogenoid.radial import CoulombParams

report = compute_spectrum(nu=-1.0, alpha="inf", n_max=4)
fd = fd_spectrum_extrapolated(CoulombParams(-1.0, "inf"), 4)

for point, value in zip(report.points, fd.values):
    print(f"n={point.n_index}  exact={point.E:.12f}  finite volume={value:.12f}")
