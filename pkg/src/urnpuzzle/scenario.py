"""JSON scenario documents.

Schema (every key optional; omitted keys give the 100-ball, uniform,
one-red-observed puzzle)::

    {"balls": 100,
     "prior": {"type": "uniform" | "point" | "binomial" | "custom",
               "r": 3, "p": "1/3", "weights": ["0", "1", "1"]},
     "evidence": ["red"],
     "query": {"type": "next" | "posterior", "color": "red"}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError, ValidationError
from .exact import format_rational, parse_rational
from .urn import Color, CompositionPrior, UrnScenario

__all__ = ["PriorSpec", "QuerySpec", "ScenarioDocument", "parse_scenario", "emit_scenario"]

PRIOR_TYPES = ("uniform", "point", "binomial", "custom")
QUERY_TYPES = ("next", "posterior")


@dataclass(frozen=True)
class PriorSpec:
    type: str = "uniform"
    r: int | None = None
    p: Fraction | None = None
    weights: tuple[Fraction, ...] | None = None  # already normalized


@dataclass(frozen=True)
class QuerySpec:
    type: str = "next"
    color: Color | None = Color.RED


@dataclass(frozen=True)
class ScenarioDocument:
    balls: int = 100
    prior: PriorSpec = PriorSpec()
    evidence: tuple[Color, ...] = (Color.RED,)
    query: QuerySpec = QuerySpec()

    def scenario(self) -> UrnScenario:
        return UrnScenario(self.balls, build_prior(self.balls, self.prior))

    def to_json(self) -> dict:
        prior = {"type": self.prior.type}
        if self.prior.r is not None:
            prior["r"] = self.prior.r
        if self.prior.p is not None:
            prior["p"] = format_rational(self.prior.p)
        if self.prior.weights is not None:
            prior["weights"] = [format_rational(w) for w in self.prior.weights]
        query = {"type": self.query.type}
        if self.query.color is not None:
            query["color"] = self.query.color.value
        return {
            "balls": self.balls,
            "prior": prior,
            "evidence": [c.value for c in self.evidence],
            "query": query,
        }


def build_prior(balls: int, spec: PriorSpec) -> CompositionPrior:
    if spec.type == "uniform":
        return CompositionPrior.uniform(balls)
    if spec.type == "point":
        return CompositionPrior.point(balls, spec.r)
    if spec.type == "binomial":
        return CompositionPrior.binomial(balls, spec.p)
    return CompositionPrior("custom", spec.weights)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _rational_field(value, field: str) -> Fraction:
    try:
        return parse_rational(value)
    except ParseError as exc:
        raise ValidationError(field, str(exc)) from None


def _object(value, field: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(field, "must be an object")
    return value


def _reject_unknown(obj: dict, allowed, field: str) -> None:
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise ValidationError(f"{field}.{extra[0]}" if field else extra[0], "unknown key")


def _parse_prior(raw, balls: int) -> PriorSpec:
    raw = _object(raw, "prior")
    kind = raw.get("type", "uniform")
    if kind not in PRIOR_TYPES:
        raise ValidationError("prior.type", f"must be one of {', '.join(PRIOR_TYPES)}")
    allowed = {"uniform": (), "point": ("r",), "binomial": ("p",), "custom": ("weights",)}[kind]
    _reject_unknown(raw, ("type",) + allowed, "prior")
    for key in allowed:
        if key not in raw:
            raise ValidationError(f"prior.{key}", f"required for {kind} prior")
    if kind == "point":
        r = raw["r"]
        if not _is_int(r) or not 0 <= r <= balls:
            raise ValidationError("prior.r", f"must be an integer in 0..{balls}")
        return PriorSpec("point", r=r)
    if kind == "binomial":
        p = _rational_field(raw["p"], "prior.p")
        if not 0 <= p <= 1:
            raise ValidationError("prior.p", f"must lie in [0, 1], got {p}")
        return PriorSpec("binomial", p=p)
    if kind == "custom":
        weights = raw["weights"]
        if not isinstance(weights, list):
            raise ValidationError("prior.weights", "must be an array")
        if len(weights) != balls + 1:
            raise ValidationError("prior.weights", f"needs {balls + 1} entries, got {len(weights)}")
        ws = [_rational_field(w, f"prior.weights[{i}]") for i, w in enumerate(weights)]
        for i, w in enumerate(ws):
            if w < 0:
                raise ValidationError(f"prior.weights[{i}]", "must be nonnegative")
        total = sum(ws)
        if total == 0:
            raise ValidationError("prior.weights", "must not all be zero")
        return PriorSpec("custom", weights=tuple(w / total for w in ws))
    return PriorSpec()


def _parse_color(value, field: str) -> Color:
    if not isinstance(value, str):
        raise ValidationError(field, "must be \"red\" or \"green\"")
    try:
        return Color(value)
    except ValueError:
        raise ValidationError(field, f"unknown color {value!r}") from None


def _parse_query(raw) -> QuerySpec:
    raw = _object(raw, "query")
    kind = raw.get("type", "next")
    if kind not in QUERY_TYPES:
        raise ValidationError("query.type", f"must be one of {', '.join(QUERY_TYPES)}")
    _reject_unknown(raw, ("type", "color"), "query")
    if kind == "posterior":
        if "color" in raw:
            raise ValidationError("query.color", "not used by posterior queries")
        return QuerySpec("posterior", None)
    return QuerySpec("next", _parse_color(raw.get("color", "red"), "query.color"))


def parse_scenario(text: str) -> ScenarioDocument:
    """Parse and validate a JSON scenario; blank input yields the default puzzle."""
    if not text.strip():
        return ScenarioDocument()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    raw = _object(raw, "(document)")
    _reject_unknown(raw, ("balls", "prior", "evidence", "query"), "")
    balls = raw.get("balls", 100)
    if not _is_int(balls) or balls < 1:
        raise ValidationError("balls", "must be a positive integer")
    prior = _parse_prior(raw.get("prior", {"type": "uniform"}), balls)
    evidence = raw.get("evidence", ["red"])
    if not isinstance(evidence, list):
        raise ValidationError("evidence", "must be an array")
    colors = tuple(_parse_color(c, f"evidence[{i}]") for i, c in enumerate(evidence))
    if len(colors) > balls:
        raise ValidationError("evidence", f"{len(colors)} draws from an urn of {balls}")
    query = _parse_query(raw.get("query", {"type": "next"}))
    doc = ScenarioDocument(balls, prior, colors, query)
    try:
        doc.scenario()
    except DomainError as exc:
        raise ValidationError("prior", str(exc)) from None
    return doc


def emit_scenario(doc: ScenarioDocument) -> str:
    return json.dumps(doc.to_json(), indent=2) + "\n"
