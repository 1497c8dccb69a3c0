"""Certified verification that the only k-Pell-Lucas numbers equal to a
product of two repdigits are the small ones in the known solution table.

The pipeline: exact sequence generation and repdigit decomposition
(:mod:`pellrep.bigseq`), certified interval arithmetic and dominant-root
isolation (:mod:`pellrep.interval`, :mod:`pellrep.realalg`), height and
Matveev bound chains (:mod:`pellrep.bounds`), continued-fraction reduction
(:mod:`pellrep.reduction`), and the campaign drivers plus reporting
(:mod:`pellrep.prover`, :mod:`pellrep.report`).
"""

__version__ = "0.1.0"

from .bigseq import (
    Decomposition,
    Repdigit,
    SequenceTable,
    as_repdigit,
    fibonacci,
    fibonacci_overlap,
    pell_lucas_term,
    repdigit_product_decompositions,
    repdigit_value,
)
from .bounds import (
    BoundChainResult,
    LinearFormInstance,
    chain_constants,
    combined_height_small_k,
    digit_length_window,
    large_k_chain,
    linear_form_residual,
    matveev_bound,
    rational_log_height,
    small_k_chain,
)
from .interval import CertifiedReal, InsufficientPrecision
from .prover import (
    CampaignFailure,
    SolutionRecord,
    exhaustive_search,
    large_k_campaign,
    small_k_campaign,
    verify_solution_table,
)
from .realalg import (
    AlgebraicContext,
    binet_residual,
    binet_weight,
    char_poly,
    check_growth_envelope,
    dominant_root,
    golden_approx_checks,
    phi_interval,
)
from .reduction import (
    ContinuedFraction,
    ReductionFailure,
    ReductionProblem,
    continued_fraction,
    convergent_index_bound,
    linearization_factor,
    reduce_homogeneous,
    reduce_inhomogeneous,
)

__all__ = [name for name in dir() if not name.startswith("_")]
