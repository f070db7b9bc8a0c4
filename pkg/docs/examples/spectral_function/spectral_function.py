import numpy as np
from hydrogenoid import spectral_function_curve, write

curve = spectral_function_curve(nu=-1.0, energies=-np.geomspace(0.005, 2.0, 400))
write(curve, "spectral_function.json")
print("asymptotes at", curve.asymptotes)
