"""Intersectivity measures and positive-exponential-sum constants of
standard sets in finite abelian groups."""

from .groups import (
    AbelianGroup,
    Element,
    GroupError,
    GroupSpec,
    Homomorphism,
    QuotientGroup,
    StandardSet,
    Subgroup,
    all_standard_sets,
    apply_automorphism,
    difference_set,
    embed,
    full_set,
    product_group,
    product_set,
    quadratic_residue_set,
    quotient_image,
    restrict_to_subgroup,
    set_intersection,
    set_union,
    standard_complement,
    zero_set,
)
from .fourier import (
    ModeError,
    RealFunctionOnGroup,
    Spectrum,
    factor_function,
    fourier_transform,
    inverse_transform,
    lift_function,
    resolve_mode,
    symmetrize,
)
from .delta import (
    CayleyGraph,
    ExtremalWitness,
    delta_bar,
    delta_cap,
    effective_cardinality,
    has_three_term_zero_sum,
    semisidon_select,
)
from .lams import (
    VARIANTS,
    LambdaResult,
    QuantityReport,
    all_quantities,
    dual_witness,
    lambda_constant,
)

__version__ = "0.1.0"
