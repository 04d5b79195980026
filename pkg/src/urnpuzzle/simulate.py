"""Seeded Monte Carlo check of the predictive probability by rejection sampling.

Each trial composes an urn from the prior, draws ``len(evidence) + 1`` balls
without replacement, and is kept only when the leading draws reproduce the
evidence. Accepted trials are split into fixed chunks of ``chunk_size``; chunk
``i`` draws from ``Philox(SeedSequence(seed, spawn_key=(i,)))`` and chunk tallies
are summed in index order, so thread count never changes the result.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConditioningError, DomainError, SaturationError
from .urn import Color, UrnScenario, as_evidence, evidence_probability

__all__ = [
    "SimConfig",
    "SimResult",
    "simulate_predictive",
    "confidence_interval",
    "sample_compositions",
    "chunk_generator",
]

DEFAULT_CHUNK_SIZE = 65536
ATTEMPTS_PER_TRIAL = 1000


@dataclass(frozen=True)
class SimConfig:
    trials: int = 1_000_000
    seed: int = 42
    chunk_size: int = DEFAULT_CHUNK_SIZE
    max_attempts: int | None = None
    threads: int = 1

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.chunk_size, int) or self.chunk_size < 1:
            raise DomainError(f"chunk_size must be a positive integer, got {self.chunk_size!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.max_attempts is None:
            object.__setattr__(self, "max_attempts", ATTEMPTS_PER_TRIAL * self.trials)
        elif self.max_attempts < self.trials:
            raise DomainError("max_attempts must be >= trials")
        if self.threads < 1:
            raise DomainError("threads must be >= 1")


@dataclass(frozen=True)
class SimResult:
    accepted: int
    successes: int
    attempts: int
    estimate: float
    std_error: float

    @classmethod
    def from_counts(cls, accepted: int, successes: int, attempts: int) -> "SimResult":
        if accepted:
            p = successes / accepted
            se = math.sqrt(p * (1.0 - p) / accepted)
        else:
            p = se = float("nan")
        return cls(accepted, successes, attempts, p, se)

    def __add__(self, other: "SimResult") -> "SimResult":
        return SimResult.from_counts(
            self.accepted + other.accepted,
            self.successes + other.successes,
            self.attempts + other.attempts,
        )


def chunk_generator(seed: int, index: int) -> np.random.Generator:
    """Independent substream for chunk ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


class _CompositionSampler:
    """Draws r from the prior; exact integer inversion when weights fit in int64."""

    def __init__(self, scenario: UrnScenario):
        prior = scenario.prior
        self.total = prior._total
        if self.total < 2**62:
            self.cdf = np.cumsum(np.array(prior._weights, dtype=np.int64))
            self.probs = None
        else:
            self.cdf = None
            self.probs = np.array([float(m) for m in prior.masses])
            self.probs /= self.probs.sum()

    def __call__(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.cdf is not None:
            u = rng.integers(0, self.total, size=size, dtype=np.int64)
            return np.searchsorted(self.cdf, u, side="right")
        return rng.choice(len(self.probs), size=size, p=self.probs)


def _run_batch(rng, sampler, balls, evidence, next_red, size):
    reds = sampler(rng, size).astype(np.int64)
    match = np.ones(size, dtype=bool)
    for j, want_red in enumerate(evidence):
        is_red = rng.integers(0, balls - j, size=size) < reds
        reds -= is_red
        match &= is_red == want_red
    is_red = rng.integers(0, balls - len(evidence), size=size) < reds
    return match, is_red == next_red


def _run_chunk(index, target, cap, seed, sampler, balls, evidence, next_red, batch_hint):
    rng = chunk_generator(seed, index)
    accepted = successes = attempts = 0
    while accepted < target and attempts < cap:
        size = min(cap - attempts, max(64, int(batch_hint * (target - accepted)) + 64))
        match, hit = _run_batch(rng, sampler, balls, evidence, next_red, size)
        need = target - accepted
        idx = np.flatnonzero(match)
        if len(idx) >= need:
            last = idx[need - 1]
            accepted += need
            successes += int(hit[idx[:need]].sum())
            attempts += int(last) + 1
        else:
            accepted += len(idx)
            successes += int(hit[idx].sum())
            attempts += size
    return SimResult.from_counts(accepted, successes, attempts)


def simulate_predictive(
    scenario: UrnScenario,
    evidence: Sequence[Color | str],
    next: Color | str = Color.RED,
    config: SimConfig | None = None,
) -> SimResult:
    """Estimate P(next | evidence) from ``config.trials`` accepted trials.

    Raises :class:`ConditioningError` up front when the exact engine says the
    evidence is impossible, and :class:`SaturationError` (carrying the partial
    tally) when ``max_attempts`` runs out first.
    """
    config = config or SimConfig()
    evidence = as_evidence(evidence)
    next = Color.coerce(next)
    balls = scenario.balls
    if len(evidence) + 1 > balls:
        raise DomainError(f"urn of {balls} exhausted after {len(evidence)} draws")
    p_accept = evidence_probability(scenario, evidence)
    if p_accept == 0:
        raise ConditioningError("evidence has probability zero under this prior")

    sampler = _CompositionSampler(scenario)
    ev_red = [c is Color.RED for c in evidence]
    batch_hint = 1.05 / float(p_accept)
    starts = range(0, config.trials, config.chunk_size)
    jobs = []
    for index, start in enumerate(starts):
        target = min(config.chunk_size, config.trials - start)
        cap = config.max_attempts * target // config.trials
        jobs.append((index, target, cap))

    def work(job):
        index, target, cap = job
        return _run_chunk(
            index, target, cap, config.seed, sampler, balls, ev_red, next is Color.RED, batch_hint
        )

    if config.threads == 1 or len(jobs) == 1:
        parts = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            parts = list(pool.map(work, jobs))
    result = SimResult.from_counts(0, 0, 0)
    for part in parts:
        result = result + part
    if result.accepted < config.trials:
        raise SaturationError(
            f"only {result.accepted} of {config.trials} trials accepted "
            f"within {result.attempts} attempts",
            result,
        )
    return result


def confidence_interval(result: SimResult, z: float = 3.0) -> tuple[float, float]:
    """``estimate +/- z * std_error``, clipped to [0, 1]."""
    if result.accepted < 1:
        raise DomainError("no accepted trials")
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    half = z * result.std_error
    return max(0.0, result.estimate - half), min(1.0, result.estimate + half)


def sample_compositions(scenario: UrnScenario, size: int, seed: int = 42) -> np.ndarray:
    """Histogram of ``size`` compositions drawn from the prior (chunk-0 stream)."""
    sampler = _CompositionSampler(scenario)
    r = sampler(chunk_generator(seed, 0), size)
    return np.bincount(r, minlength=scenario.balls + 1)
