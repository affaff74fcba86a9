"""Finite-evidence testing of convergence modes for real sequences and functions."""

__version__ = "0.1.0"

from .catalog import CATALOG_NAMES, catalog_lookup
from .chains import ChainSequence, PairStream, interleave_chain
from .continuity import (
    DEFAULT_SEED,
    ContinuityReport,
    FunctionUnderTest,
    adversarial_witness,
    classify_continuity,
    compactness_probe,
    extract_p_quasi_cauchy_subsequence,
    preserves_mode,
    uniformity_modulus,
)
from .errors import (
    BudgetExceeded,
    DomainViolation,
    EvaluationError,
    EvaluationOverflow,
    InsufficientTerms,
    InvalidLacunarySchedule,
    InvalidPairStream,
    MalformedMethod,
    OutOfInterval,
    SeqlabError,
    UnboundedEvidence,
    UnknownCatalogName,
)
from .exprlang import ArityError, ParseError, VariableScopeError, parse_function, parse_sequence
from .intervals import Interval
from .modes import (
    HierarchyReport,
    LacunarySchedule,
    ModeVerdict,
    Outcome,
    ToleranceSchedule,
    estimate_statistical_limit,
    hierarchy_report,
    replay_witness,
    test_cauchy,
    test_lacunary_stat_quasi_cauchy,
    test_lacunary_statistical,
    test_p_quasi_cauchy,
    test_slowly_oscillating,
    test_stat_quasi_cauchy,
)
from .sequences import DifferenceGap, RealSequence, delta, eval_prefix, get_budget, repeat_each, seq_product, seq_sum
from .summability import (
    MethodOutput,
    RowFiniteMethod,
    apply_method,
    cesaro_method,
    delta_p_method,
    identity_method,
    method_from_spec,
    regularity_spot_check,
)
