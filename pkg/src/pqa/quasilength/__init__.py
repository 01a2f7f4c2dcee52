"""Quasilength of R/I_t: finite module construction, certificates, search, content."""
from .module import (
    Action,
    FiniteGradedModule,
    NotFinite,
    SequenceSpec,
    Slot,
    build_quotient_module,
    factor_length_bound,
    lower_bound,
)
from .oracle import oracle_quasilength, submodule_elements
from .search import (
    Engine,
    FiltrationCertificate,
    QuasilengthResult,
    exact_quasilength,
    greedy_certificate,
    staircase_certificate,
    verify_certificate,
)
from .content import (
    CONSISTENT,
    INCONCLUSIVE,
    INCONSISTENT,
    ContentEstimate,
    GridPoint,
    content_estimate,
    evaluate_point,
    expand_grid,
)

__all__ = [
    "oracle_quasilength",
    "submodule_elements",
    "Action",
    "FiniteGradedModule",
    "NotFinite",
    "SequenceSpec",
    "Slot",
    "build_quotient_module",
    "factor_length_bound",
    "lower_bound",
    "Engine",
    "FiltrationCertificate",
    "QuasilengthResult",
    "exact_quasilength",
    "greedy_certificate",
    "staircase_certificate",
    "verify_certificate",
    "CONSISTENT",
    "INCONCLUSIVE",
    "INCONSISTENT",
    "ContentEstimate",
    "GridPoint",
    "content_estimate",
    "evaluate_point",
    "expand_grid",
]
