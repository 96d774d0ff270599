"""Hartree atomic units and the Pauli matrices."""

import numpy as np

HBAR = 1.0
M_E = 1.0
# positive elementary charge; the electron carries -E_CHARGE
E_CHARGE = 1.0
BOHR_MAGNETON = E_CHARGE * HBAR / (2.0 * M_E)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_X.flags.writeable = False
SIGMA_Y.flags.writeable = False
SIGMA_Z.flags.writeable = False

PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def to_bohr_magnetons(moment):
    """Convert a magnetic moment from atomic units to Bohr magnetons."""
    return np.asarray(moment, dtype=float) / BOHR_MAGNETON
