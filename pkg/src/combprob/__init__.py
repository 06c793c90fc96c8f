"""Exact combined (signed) probability on finite symmetric spaces."""

from combprob.bridges import (
    ConventionalMeasure,
    ExtendedMeasure,
    check_extended_axioms,
    check_kolmogorov,
    combined_to_extended,
    conventional_to_combined,
    extended_to_combined,
    restrict_positive,
)
from combprob.errors import (
    CombprobError,
    ConstructionError,
    EventNotInFamilyError,
    HypothesisError,
    NotDigitalizedError,
    UnreducedEventError,
)
from combprob.events import Event, SignedAtom, Space
from combprob.measure import (
    CombinedMeasure,
    classify_normalization,
    decompose,
    evaluate,
    is_complete,
    make_digitalized,
    from_positive_values,
    validate_axioms,
)
from combprob.structures import EventFamily, generate_algebra, is_set_algebra, is_set_field, is_set_ring

__version__ = "0.1.0"

__all__ = [
    "CombinedMeasure", "CombprobError", "ConstructionError", "ConventionalMeasure", "Event",
    "EventFamily", "EventNotInFamilyError", "ExtendedMeasure", "HypothesisError", "NotDigitalizedError",
    "SignedAtom", "Space", "UnreducedEventError", "check_extended_axioms", "check_kolmogorov",
    "classify_normalization", "combined_to_extended", "conventional_to_combined", "decompose", "evaluate",
    "extended_to_combined", "from_positive_values", "generate_algebra", "is_complete", "is_set_algebra",
    "is_set_field", "is_set_ring", "make_digitalized", "restrict_positive", "validate_axioms",
]
