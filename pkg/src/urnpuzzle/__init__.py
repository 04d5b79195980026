"""Exact inference for urns of random composition, with a Monte Carlo
check and a Bayes-net enumeration oracle."""

from .errors import (
    ConditioningError,
    DomainError,
    ParseError,
    SaturationError,
    UrnError,
    ValidationError,
)
from .exact import (
    Rational,
    falling_factorial,
    format_decimal,
    format_rational,
    parse_rational,
    pyramidal,
    rational,
    triangular,
)
from .urn import (
    Color,
    CompositionPrior,
    UrnScenario,
    as_evidence,
    evidence_likelihood,
    evidence_probability,
    litt_answer,
    posterior,
    predictive_next,
    prior_mass,
)

__version__ = "0.1.0"
