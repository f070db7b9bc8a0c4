parameter_sets = {
    "verify_default" :
    {
    "nu" : -1.0,
    "alpha" : 0.0,
    "kappa" : 0.5,
    "n_check" : 3,
    "note" : "Attractive unit coupling, alpha = 0. Default set of the verification battery."
    },
    "hydrogen_friedrichs" :
    {
        "nu" : -1.0,
        "alpha" : "inf",
        "kappa" : 0.5,
        "n_check" : 5,
        "note" : "Textbook hydrogen ladder E_n = -1/(4 n^2)."
    },
    "attractive_zero" :
    {
        "nu" : -1.0,
        "alpha" : 0.0,
        "kappa" : 0.5,
        "n_check" : 5,
        "note" : "First set of the three-way oracle comparison."
    },
    "attractive_three" :
    {
        "nu" : -1.0,
        "alpha" : 3.0,
        "kappa" : 0.25,
        "n_check" : 5,
        "note" : "Large positive alpha, roots close to the hydrogen levels from below."
    },
    "strong_attractive" :
    {
        "nu" : -2.0,
        "alpha" : -1.0,
        "kappa" : 0.75,
        "n_check" : 5,
        "note" : "Doubled coupling with negative alpha, deep ground state."
    },
    "repulsive_bound" :
    {
        "nu" : 1.0,
        "alpha" : -0.5,
        "kappa" : -0.5,
        "n_check" : 1,
        "note" : "Repulsive coupling below the threshold alpha_1: one negative eigenvalue."
    },
}
