"""Physical constants, SI units throughout.

Sources: CODATA 2018 recommended values (exact where the SI redefinition
made them so) and the ISO standard gravitational acceleration. Particle
masses are CODATA 2018; composite masses are sums of constituents, with
binding energies (eV scale) negligible at the precision used here.
"""

# Reduced Planck constant [J s] (exact h / 2 pi, h = 6.62607015e-34 exact)
HBAR = 1.054571817e-34

# Planck constant [J s] (exact)
H_PLANCK = 6.62607015e-34

# Elementary charge [C] (exact); also the J <-> eV conversion factor
E_CHARGE = 1.602176634e-19

# Standard gravitational acceleration [m/s^2] (ISO 80000, exact by convention)
G_EARTH = 9.80665

# Neutron mass [kg] (CODATA 2018)
M_NEUTRON = 1.67492749804e-27

# Hydrogen atom mass [kg]: 1.00782503207 u x 1.66053906660e-27 kg/u
M_HYDROGEN = 1.6735328377e-27

# Muon mass [kg] (CODATA 2018)
M_MUON = 1.883531627e-28

# Electron mass [kg] (CODATA 2018)
M_ELECTRON = 9.1093837015e-31

# Muonium mass [kg]: mu+ plus e-
M_MUONIUM = M_MUON + M_ELECTRON

# Positronium mass [kg]: e+ plus e-
M_POSITRONIUM = 2.0 * M_ELECTRON


def ev_to_joule(e_ev: float) -> float:
    """Exact eV -> J conversion."""
    return e_ev * E_CHARGE


def joule_to_ev(e_j: float) -> float:
    """Exact J -> eV conversion."""
    return e_j / E_CHARGE
