"""Physical constants used throughout the package.

All values are pinned CODATA-2018 so that results are reproducible and do
not drift with the installed scipy version.
"""

# Planck constant [J s]
H = 6.62607015e-34
# Reduced Planck constant [J s]
HBAR = 1.054571817e-34
# Boltzmann constant [J/K]
K_B = 1.380649e-23
# Magnetic flux quantum h/(2e) [Wb]
PHI0 = 2.067833848e-15
# Elementary charge [C]
E_CHARGE = 1.602176634e-19


def constants_report() -> dict:
    """Constants actually used, for provenance blocks in reports."""
    return {
        "h_J_s": H,
        "hbar_J_s": HBAR,
        "k_B_J_per_K": K_B,
        "Phi0_Wb": PHI0,
        "e_C": E_CHARGE,
    }
