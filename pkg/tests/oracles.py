"""Reference computations that share no code with the engine."""

import itertools
import math
from fractions import Fraction


def brute_joint(balls, prior_masses, evidence):
    """{r: P(R=r, evidence)} by enumerating ordered draws of labelled balls.

    Balls ``0..r-1`` are red. Every ordered k-tuple of distinct balls is equally likely.
    """
    k = len(evidence)
    out = {}
    n_seq = math.perm(balls, k)
    for r, mass in enumerate(prior_masses):
        hits = 0
        for seq in itertools.permutations(range(balls), k):
            if all((b < r) == (c == "red") for b, c in zip(seq, evidence)):
                hits += 1
        out[r] = mass * Fraction(hits, n_seq)
    return out


def brute_evidence_probability(balls, prior_masses, evidence):
    return sum(brute_joint(balls, prior_masses, evidence).values())


def brute_posterior(balls, prior_masses, evidence):
    joint = brute_joint(balls, prior_masses, evidence)
    z = sum(joint.values())
    return [joint[r] / z for r in range(balls + 1)]


def brute_predictive(balls, prior_masses, evidence, color):
    return brute_evidence_probability(balls, prior_masses, list(evidence) + [color]) / (
        brute_evidence_probability(balls, prior_masses, evidence)
    )


def color_sequences(max_len):
    for k in range(max_len + 1):
        yield from itertools.product(("red", "green"), repeat=k)
