"""Certificate constructions and the verifier."""

from .abelian import abelian_decompose, abelian_plan, character_certificate
from .circulant import choose_ambient, circulant_decompose, dft_any_decompose
from .core import (
    BinomialSplit,
    Certificate,
    CertificateError,
    VerificationReport,
    binomial_certificate,
    binomial_split,
    diagonalization_transfer,
    kronecker_transfer,
    lift_certificate,
    permute_certificate,
    require_verified,
    restrict_certificate,
    scale_certificate,
    tightened,
    trivial_certificate,
    verify,
)
from .dft import DftBlockPlan, DftBlocks, dft_blocks, dft_decompose
from .finite import conjugate_descent, frobenius_matrix, gwh_finite_field
from .gwh import general_group_fn_decompose, gwh_decompose, gwh_symmetric_decompose
from .product import ProductPlan, productbound_decompose
from .reduction import (
    ReductionData,
    degenerate_reduction,
    product_rank_formula,
    product_sparsity_formula,
    reduction_for_cyclic,
    reduction_for_small_power,
    reduction_product,
)
