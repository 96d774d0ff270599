"""Local observables of Pauli-spinor fields.

Pointwise current and momentum densities of two-component electron fields,
their moments integrated over all space, and a comparison against exact
operator expectation values.
"""

from spinobs.constants import BOHR_MAGNETON, E_CHARGE, HBAR, M_E, PAULI, SIGMA_X, SIGMA_Y, SIGMA_Z
from spinobs.special import (
    assoc_laguerre,
    assoc_laguerre_deriv,
    radial_wavefunction,
    spherical_harmonic,
    spherical_harmonic_derivs,
)
from spinobs.coupling import clebsch_half, coupling_table
from spinobs.states import (
    BasisTerm,
    GaussianPacket,
    HydrogenicState,
    SingularPointError,
    SpinorSample,
    evaluate,
    gaussian_state,
    hydrogenic_state,
    make_coupled_state,
    norm_squared,
    random_superposition,
)
from spinobs.densities import (
    FieldSample,
    equivalent_forms_check,
    fd_oracle_sample,
    moment_density,
    sample_densities,
)
from spinobs.quadrature import (
    SphericalGrid,
    convergence_report,
    default_grid,
    integrate_scalar,
    integrate_vector,
    make_grid,
    pairwise_sum,
)
from spinobs.observables import (
    ConvergenceWarning,
    ObservableReport,
    angular_momentum,
    full_report,
    magnetic_moment,
    operator_oracle,
)

__version__ = "0.1.0"
