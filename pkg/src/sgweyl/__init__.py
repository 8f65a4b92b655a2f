"""sgweyl: a desk-scale laboratory for logarithmic Weyl asymptotics.

Verifies, numerically, the spectral theory of scattering-type (SG)
elliptic operators on R^d around the fully explicit model operator with
symbol <x><xi>: two-term Weyl laws with logarithmic leading term,
regularized-trace formulas for the coefficients, the Laurent dictionary of
the spectral zeta function, and the periodic Hamiltonian flow on the
corner of compactified phase space.
"""

from .asymptotics import (
    LaurentData,
    WeylFit,
    counting_samples,
    fit_log_weyl,
    laurent_diagnostic,
    laurent_from_weyl,
    pole_locations,
    zeta_partial,
)
from .cornerflow import (
    CornerState,
    conserved_angle,
    flow_closed,
    flow_numeric,
    hamiltonian_rhs,
    is_fixed_point,
    periodic_measure_estimate,
    return_time,
    sample_states,
    state_distance,
)
from .errors import (
    NonConvergenceError,
    OutOfWindowError,
    RankDeficientFitError,
    SgweylError,
    ValidationError,
)
from .spectrum import (
    DiscretizationConfig,
    SpectralData,
    assemble_model_matrix,
    compute_spectrum,
    counting_function,
    load_spectrum,
    model_lambda_at_count,
    save_spectrum,
    smoothed_counting,
)
from .symbols import (
    PrincipalSymbolTriple,
    corner_expansion_coeff,
    corner_expansion_value,
    model_symbol,
    swap_roles,
    symbol_power,
)
from .traces import (
    EULER_GAMMA,
    TraceValue,
    digamma,
    gamma1_closed,
    gamma1_finite_sum,
    gamma2_closed,
    gamma_coeffs_general,
    sphere_volume,
    tr_corner,
    wtr_e,
    wtr_psi,
    wtr_theta,
)

__version__ = "0.1.0"
