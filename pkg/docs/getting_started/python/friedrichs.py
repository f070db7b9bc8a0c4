from hydrogenoid import compute_spectrum, write
report = compute_spectrum(nu=-1.0, alpha="inf", n_max=5)
write(report, "friedrichs.csv")
