"""Conjugacy-growth workbench.

Small-cancellation presentations via the Rips construction, Dehn's algorithm,
word-metric oracles for the discrete Heisenberg group, growth curves
n -> ln ||Phi^n(c)|| for outer automorphisms of the kernel, length-function
axiom checking, and Lipschitz-metric brackets on Out(N).
"""

__version__ = "0.1.0"

GRAMMAR_VERSION = "1"  # presentation/word text format version

from .words import Alphabet, cyclic_reduce, free_reduce, invert  # noqa: E402,F401
from .presentations import (  # noqa: E402,F401
    Presentation,
    SCReport,
    check_small_cancellation,
    parse_presentation,
    symmetrize,
)
from .dehn import (  # noqa: E402,F401
    DehnContext,
    are_conjugate_bounded,
    are_equal,
    conjugacy_reduce,
    dehn_reduce,
    is_trivial,
)
from .rips import (  # noqa: E402,F401
    OuterAuto,
    RipsOutput,
    RipsScheme,
    apply_outer,
    apply_outer_counts,
    conjugation_rule,
    rips_presentation,
)
from .metrics import (  # noqa: E402,F401
    HeisenbergElement,
    HeisenbergOracle,
    NormEstimate,
    heisenberg_eval,
    heisenberg_length,
    n_norm_bfs_oracle,
    n_norm_upper,
    q_geodesic,
)
from .growth import (  # noqa: E402,F401
    GrowthCurve,
    LengthFunctionZ,
    ProductGroup,
    check_length_function,
    dominates,
    equivalent,
    growth_curve,
    product_growth_curve,
    product_norm,
)
from .lipschitz import LipEstimate, lip_lower, lip_upper  # noqa: E402,F401
