"""Exact computations with dg-division algebras, dg-Azumaya algebras and their Brauer classes."""

from .brauer import (
    azumaya_report,
    derivation_dims,
    dgbr1_product,
    end_witness_search,
    inverse_class_certificate,
    nontriviality_certificate,
    phi_inflate,
    psi_forget,
    psi_phi_identity,
    separability_idempotent,
)
from .classification import classify_dg_field, make_template, template_grid
from .constructions import (
    FreeDgModule,
    OverBase,
    agr_decompose,
    cycles_over,
    cycles_tensor_comparison,
    end_over,
    extend_scalars,
    induce_from_cycles,
    mu_map,
    opposite_over,
    over_field,
    over_itself,
    point_algebra,
    tensor_over,
    twisted_poly_quotient,
)
from .dg import DgAlgebra, cycles, dg_structure_report, homology, validate_differential, zero_differential
from .graded import (
    Element,
    GradedAlgebra,
    GradedPresentation,
    PreconditionError,
    ValidationError,
    Verdict,
    graded_center,
    graded_division,
    opposite,
    structure_report,
    validate_presentation,
)
from .io import emit, parse_presentation
from .scalars import GF, QQ, Field

__version__ = "0.1.0"
