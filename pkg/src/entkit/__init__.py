"""Geometric measure and relative entropy of entanglement for small registers."""

from entkit.geometric import (
    GmeConfig,
    GmeResult,
    convex_roof_segment,
    e_measures,
    epsilon_symmetric,
    lambda_max_closed_form,
    lambda_max_numeric,
)
from entkit.relent import (
    ErConfig,
    ErResult,
    co_f_two_component,
    conjectured_er_closed,
    er_lower_bound,
    er_numeric,
    f_upper,
    monotone_f,
    plenio_vedral_check,
    theta_star,
)
from entkit.state_zoo import (
    DickeMixture,
    make_closest_separable,
    make_determinant,
    make_determinant_general,
    make_dicke,
    make_dicke_mixture,
    make_generalized_symmetric,
    make_ghz,
    make_product_ansatz,
    make_sigma_theta,
    make_w_superposition,
    two_component,
)
from entkit.tensor_core import (
    DensityMatrix,
    PartyStructure,
    ProductState,
    PureState,
    SeparableEnsemble,
    hermitian_eig,
    kron,
    partial_trace,
    permutation_twirl,
    phase_twirl,
    relative_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"
