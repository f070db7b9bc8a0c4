from hydrogenoid import compute_spectrum, fibration, write
report = compute_spectrum(nu=-1.0, alpha=0.3, n_max=10)
write(report, "perturbed_spectrum.csv")

table = fibration(nu=-1.0, alpha_grid=[-2.0 + 0.1 * i for i in range(41)], n_max=5)
write(table, "fan.csv")
