"""Urns with a random number of red balls, drawn without replacement.

The composition ``R`` (number of red balls among ``N``) is drawn from a
:class:`CompositionPrior`; draws are then made one at a time without
replacement. Every quantity here is an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConditioningError, DomainError
from .exact import falling_factorial

__all__ = [
    "Color",
    "CompositionPrior",
    "UrnScenario",
    "Evidence",
    "as_evidence",
    "prior_mass",
    "evidence_likelihood",
    "evidence_probability",
    "posterior",
    "predictive_next",
    "litt_answer",
]


class Color(enum.Enum):
    RED = "red"
    GREEN = "green"

    @property
    def complement(self) -> "Color":
        return Color.GREEN if self is Color.RED else Color.RED

    @classmethod
    def coerce(cls, value: "Color | str") -> "Color":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown color {value!r}") from None

    def __str__(self) -> str:
        return self.value


Evidence = tuple  # tuple[Color, ...], ordered as observed


def as_evidence(draws: Iterable[Color | str]) -> tuple[Color, ...]:
    return tuple(Color.coerce(c) for c in draws)


@dataclass(frozen=True)
class CompositionPrior:
    """Distribution of the red-ball count over ``0..balls``.

    Build with :meth:`uniform`, :meth:`point`, :meth:`binomial` or
    :meth:`custom` rather than calling the constructor directly.
    """

    kind: str
    masses: tuple[Fraction, ...]
    param: Fraction | int | None = None
    # masses[r] == weights[r] / total, all integers; lets sums stay in int arithmetic
    _weights: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _total: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.masses:
            raise DomainError("prior needs at least one mass entry")
        if any(m < 0 for m in self.masses):
            raise DomainError("prior masses must be nonnegative")
        if sum(self.masses) != 1:
            raise DomainError("prior masses must sum to exactly 1")
        total = math.lcm(*(m.denominator for m in self.masses))
        object.__setattr__(self, "_total", total)
        object.__setattr__(
            self, "_weights", tuple(m.numerator * (total // m.denominator) for m in self.masses)
        )

    @property
    def balls(self) -> int:
        return len(self.masses) - 1

    @classmethod
    def uniform(cls, balls: int) -> "CompositionPrior":
        _check_balls(balls)
        m = Fraction(1, balls + 1)
        return cls("uniform", (m,) * (balls + 1))

    @classmethod
    def point(cls, balls: int, r: int) -> "CompositionPrior":
        _check_balls(balls)
        if not 0 <= r <= balls:
            raise DomainError(f"point prior needs 0 <= r <= {balls}, got {r}")
        masses = [Fraction(0)] * (balls + 1)
        masses[r] = Fraction(1)
        return cls("point", tuple(masses), r)

    @classmethod
    def binomial(cls, balls: int, p: Fraction) -> "CompositionPrior":
        _check_balls(balls)
        p = Fraction(p)
        if not 0 <= p <= 1:
            raise DomainError(f"binomial prior needs 0 <= p <= 1, got {p}")
        q = 1 - p
        masses = tuple(math.comb(balls, r) * p**r * q ** (balls - r) for r in range(balls + 1))
        return cls("binomial", masses, p)

    @classmethod
    def custom(cls, weights: Sequence[Fraction | int]) -> "CompositionPrior":
        """Normalize nonnegative ``weights`` (one per ``r = 0..N``) exactly."""
        weights = [Fraction(w) for w in weights]
        if len(weights) < 2:
            raise DomainError("custom prior needs N+1 >= 2 weights")
        if any(w < 0 for w in weights):
            raise DomainError("custom prior weights must be nonnegative")
        total = sum(weights)
        if total == 0:
            raise DomainError("custom prior weights must not all be zero")
        return cls("custom", tuple(w / total for w in weights))

    def swapped(self) -> "CompositionPrior":
        """Prior of the green count, i.e. ``r -> N - r``."""
        return CompositionPrior("custom", tuple(reversed(self.masses)))


def _check_balls(balls: int) -> None:
    if not isinstance(balls, int) or balls < 1:
        raise DomainError(f"urn needs at least one ball, got {balls!r}")


@dataclass(frozen=True)
class UrnScenario:
    balls: int = 100
    prior: CompositionPrior | None = None

    def __post_init__(self):
        _check_balls(self.balls)
        if self.prior is None:
            object.__setattr__(self, "prior", CompositionPrior.uniform(self.balls))
        elif self.prior.balls != self.balls:
            raise DomainError(
                f"prior has {len(self.prior.masses)} entries, urn of {self.balls} needs {self.balls + 1}"
            )


def _check_r(scenario: UrnScenario, r: int) -> None:
    if not 0 <= r <= scenario.balls:
        raise DomainError(f"composition r={r} outside 0..{scenario.balls}")


def _check_length(scenario: UrnScenario, evidence: Sequence) -> None:
    if len(evidence) > scenario.balls:
        raise DomainError(f"{len(evidence)} draws from an urn of {scenario.balls}")


def _sequence_count(balls: int, r: int, evidence: Sequence[Color]) -> int:
    # ordered ways to realise the draw sequence; divide by falling_factorial(balls, k)
    reds, greens = r, balls - r
    out = 1
    for c in evidence:
        if c is Color.RED:
            out *= reds
            reds -= 1
        else:
            out *= greens
            greens -= 1
        if out == 0:
            return 0
    return out


def prior_mass(scenario: UrnScenario, r: int) -> Fraction:
    _check_r(scenario, r)
    return scenario.prior.masses[r]


def evidence_likelihood(scenario: UrnScenario, r: int, evidence: Sequence[Color | str]) -> Fraction:
    """P(exact ordered draw sequence | R = r), multiplied out draw by draw."""
    _check_r(scenario, r)
    evidence = as_evidence(evidence)
    _check_length(scenario, evidence)
    n = scenario.balls
    return Fraction(_sequence_count(n, r, evidence), falling_factorial(n, len(evidence)))


def _joint_weights(scenario: UrnScenario, evidence: tuple[Color, ...]) -> list[int]:
    w = scenario.prior._weights
    n = scenario.balls
    return [w[r] * _sequence_count(n, r, evidence) if w[r] else 0 for r in range(n + 1)]


def evidence_probability(scenario: UrnScenario, evidence: Sequence[Color | str]) -> Fraction:
    """Total probability of the ordered evidence, summed over compositions."""
    evidence = as_evidence(evidence)
    _check_length(scenario, evidence)
    num = sum(_joint_weights(scenario, evidence))
    return Fraction(num, scenario.prior._total * falling_factorial(scenario.balls, len(evidence)))


def posterior(scenario: UrnScenario, evidence: Sequence[Color | str]) -> list[Fraction]:
    """Dense posterior over ``r = 0..N`` given the evidence."""
    evidence = as_evidence(evidence)
    _check_length(scenario, evidence)
    joint = _joint_weights(scenario, evidence)
    total = sum(joint)
    if total == 0:
        raise ConditioningError("evidence has probability zero under this prior")
    return [Fraction(j, total) for j in joint]


def predictive_next(
    scenario: UrnScenario, evidence: Sequence[Color | str], next: Color | str = Color.RED
) -> Fraction:
    """P(next draw is ``next`` | evidence)."""
    evidence = as_evidence(evidence)
    next = Color.coerce(next)
    if len(evidence) + 1 > scenario.balls:
        raise DomainError(f"urn of {scenario.balls} exhausted after {len(evidence)} draws")
    base = sum(_joint_weights(scenario, evidence))
    if base == 0:
        raise ConditioningError("evidence has probability zero under this prior")
    extended = sum(_joint_weights(scenario, evidence + (next,)))
    # the shared prior total cancels; one extra draw leaves N - k balls
    return Fraction(extended, base * (scenario.balls - len(evidence)))


def litt_answer(balls: int = 100) -> Fraction:
    """P(second red | first red) for a uniformly composed urn of ``balls``."""
    if not isinstance(balls, int) or balls < 2:
        raise DomainError(f"need at least two balls, got {balls!r}")
    return predictive_next(UrnScenario(balls), (Color.RED,), Color.RED)
