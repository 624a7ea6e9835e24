"""Jordan calculus, unitary components and isometries of finite-dimensional JB*-algebra models."""
from .algebra import (
    exponential,
    expi,
    inverse,
    involution,
    is_central,
    is_unitary,
    isotope,
    jordan_product,
    operator_commute,
    q_operator,
    triple_product,
    u_bilinear,
    u_operator,
    unitary_isotope,
)
from .errors import *  # noqa: F401,F403
from .isometry import (
    OneParameterFamily,
    StructuredIsometry,
    align_central_projection,
    build_nonextendable_example,
    check_extendable,
    decompose_isometry,
    decompose_unital_isometry,
    derive_k,
    general_decompose,
    random_structured_isometry,
    stone_parameter,
    verify_inverted_triple_preservation,
)
from .models import (
    Element,
    ModelDescriptor,
    build_model,
    distance,
    random_element,
    random_selfadjoint,
    random_unitary,
)
from .spectral import (
    generalized_inverse,
    is_von_neumann_regular,
    range_tripotent,
    triple_functional_calculus,
    triple_spectrum,
)
from .unitary import (
    UChainFactorization,
    block_windings,
    evaluate_u_chain,
    factor_path,
    factor_step,
    in_principal_component,
    winding_number,
)

__version__ = "0.1.0"
