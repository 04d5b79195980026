"""Exact inference by full-joint enumeration on small discrete networks.

Includes builders for the three puzzles that share the 2/3 answer: the
random-composition urn, Bertrand's box and Monty Hall.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import ConditioningError, DomainError

__all__ = [
    "Variable",
    "CPT",
    "DiscreteNetwork",
    "joint_probability",
    "query",
    "build_monty_hall",
    "build_bertrand_box",
    "build_urn_network",
    "MAX_URN_DEPTH",
]

MAX_URN_DEPTH = 4


@dataclass(frozen=True)
class Variable:
    name: str
    states: tuple[Hashable, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise DomainError(f"variable {self.name!r} has no states")
        if len(set(self.states)) != len(self.states):
            raise DomainError(f"variable {self.name!r} has duplicate states")

    def index(self, state) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise DomainError(f"{state!r} is not a state of {self.name!r}") from None


@dataclass(frozen=True)
class CPT:
    """``rows[parent_states]`` is the child's distribution, aligned with its states.

    ``unreachable`` lists parent combinations that carry a placeholder row.
    """

    child: str
    parents: tuple[str, ...]
    rows: Mapping[tuple, tuple[Fraction, ...]]
    unreachable: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(
            self, "rows", {tuple(k): tuple(Fraction(p) for p in v) for k, v in self.rows.items()}
        )
        for key, row in self.rows.items():
            if any(p < 0 for p in row) or sum(row) != 1:
                raise DomainError(f"CPT row {self.child}|{key} is not a distribution")


class DiscreteNetwork:
    """Immutable DAG of variables with exact CPTs, kept in topological order."""

    def __init__(self, variables: Sequence[Variable], cpts: Sequence[CPT]):
        self.variables = {v.name: v for v in variables}
        if len(self.variables) != len(variables):
            raise DomainError("variable names must be unique")
        self.cpts = {}
        for cpt in cpts:
            if cpt.child not in self.variables:
                raise DomainError(f"CPT for unknown variable {cpt.child!r}")
            if cpt.child in self.cpts:
                raise DomainError(f"two CPTs for {cpt.child!r}")
            self.cpts[cpt.child] = cpt
        missing = set(self.variables) - set(self.cpts)
        if missing:
            raise DomainError(f"no CPT for {sorted(missing)}")
        for cpt in cpts:
            self._check_rows(cpt)
        self.order = self._topological_order()

    def _check_rows(self, cpt: CPT) -> None:
        child = self.variables[cpt.child]
        for p in cpt.parents:
            if p not in self.variables:
                raise DomainError(f"{cpt.child!r} has unknown parent {p!r}")
        combos = set(itertools.product(*(self.variables[p].states for p in cpt.parents)))
        if set(cpt.rows) != combos:
            raise DomainError(f"CPT for {cpt.child!r} must have one row per parent combination")
        for row in cpt.rows.values():
            if len(row) != len(child.states):
                raise DomainError(f"CPT row for {cpt.child!r} has wrong width")

    def _topological_order(self) -> tuple[str, ...]:
        order, done, active = [], set(), set()

        def visit(name):
            if name in done:
                return
            if name in active:
                raise DomainError(f"cycle through {name!r}")
            active.add(name)
            for p in self.cpts[name].parents:
                visit(p)
            active.discard(name)
            done.add(name)
            order.append(name)

        for name in self.variables:
            visit(name)
        return tuple(order)

    def _check_assignment(self, assignment: Mapping) -> None:
        for name, state in assignment.items():
            if name not in self.variables:
                raise DomainError(f"unknown variable {name!r}")
            self.variables[name].index(state)

    def assignments(self):
        names = list(self.variables)
        for states in itertools.product(*(self.variables[n].states for n in names)):
            yield dict(zip(names, states))


def _joint(net: DiscreteNetwork, assignment: Mapping) -> Fraction:
    out = Fraction(1)
    for name in net.order:
        cpt = net.cpts[name]
        row = cpt.rows[tuple(assignment[p] for p in cpt.parents)]
        out *= row[net.variables[name].index(assignment[name])]
        if not out:
            break
    return out


def joint_probability(net: DiscreteNetwork, assignment: Mapping) -> Fraction:
    """Product of the CPT entries selected by a full assignment."""
    net._check_assignment(assignment)
    missing = set(net.variables) - set(assignment)
    if missing:
        raise DomainError(f"assignment misses {sorted(missing)}")
    return _joint(net, assignment)


def query(net: DiscreteNetwork, target: str, observations: Mapping | None = None) -> list[Fraction]:
    """P(target | observations) over the target's states, by enumeration."""
    observations = dict(observations or {})
    if target not in net.variables:
        raise DomainError(f"unknown variable {target!r}")
    if target in observations:
        raise DomainError(f"target {target!r} is observed")
    net._check_assignment(observations)
    hidden = [n for n in net.variables if n not in observations]
    tv = net.variables[target]
    totals = [Fraction(0)] * len(tv.states)
    for states in itertools.product(*(net.variables[n].states for n in hidden)):
        full = dict(observations)
        full.update(zip(hidden, states))
        totals[tv.index(full[target])] += _joint(net, full)
    z = sum(totals)
    if z == 0:
        raise ConditioningError("observations have probability zero")
    return [t / z for t in totals]


DOORS = (1, 2, 3)


def build_monty_hall() -> DiscreteNetwork:
    """``car`` and ``pick`` uniform and independent; ``host`` opens a goat door != pick."""
    third = Fraction(1, 3)
    uniform = {(): (third,) * 3}
    host_rows = {}
    for car, pick in itertools.product(DOORS, DOORS):
        allowed = [d for d in DOORS if d != car and d != pick]
        host_rows[(car, pick)] = tuple(
            Fraction(1, len(allowed)) if d in allowed else Fraction(0) for d in DOORS
        )
    return DiscreteNetwork(
        [Variable("car", DOORS), Variable("pick", DOORS), Variable("host", DOORS)],
        [
            CPT("car", (), uniform),
            CPT("pick", (), uniform),
            CPT("host", ("car", "pick"), host_rows),
        ],
    )


BOXES = ("GG", "GS", "SS")
FACES = ("gold", "silver")


def build_bertrand_box() -> DiscreteNetwork:
    """Pick a box uniformly, look at a random face, ask about the hidden face."""
    half = Fraction(1, 2)
    seen = {("GG",): (1, 0), ("GS",): (half, half), ("SS",): (0, 1)}
    other, unreachable = {}, set()
    for box, face in itertools.product(BOXES, FACES):
        faces = ["gold" if c == "G" else "silver" for c in box]
        if face not in faces:
            other[(box, face)] = (half, half)
            unreachable.add((box, face))
            continue
        faces.remove(face)
        other[(box, face)] = (1, 0) if faces[0] == "gold" else (0, 1)
    return DiscreteNetwork(
        [Variable("box", BOXES), Variable("seen", FACES), Variable("other_side", FACES)],
        [
            CPT("box", (), {(): (Fraction(1, 3),) * 3}),
            CPT("seen", ("box",), seen),
            CPT("other_side", ("box", "seen"), other, frozenset(unreachable)),
        ],
    )


def build_urn_network(
    balls: int, depth: int, prior: Sequence[Fraction] | None = None
) -> DiscreteNetwork:
    """``R`` -> ``draw1`` -> ... -> ``draw{depth}``, each draw conditioned on R and all earlier draws.

    ``prior`` defaults to uniform over ``0..balls``.
    """
    if not isinstance(balls, int) or balls < 1:
        raise DomainError(f"urn needs at least one ball, got {balls!r}")
    if not 1 <= depth <= min(balls, MAX_URN_DEPTH):
        raise DomainError(f"depth must be in 1..{min(balls, MAX_URN_DEPTH)}, got {depth}")
    if prior is None:
        prior = [Fraction(1, balls + 1)] * (balls + 1)
    elif len(prior) != balls + 1:
        raise DomainError(f"prior needs {balls + 1} entries")
    colors = ("red", "green")
    half = Fraction(1, 2)
    variables = [Variable("R", range(balls + 1))]
    cpts = [CPT("R", (), {(): tuple(prior)})]
    for j in range(depth):
        parents = ("R",) + tuple(f"draw{i + 1}" for i in range(j))
        rows, unreachable = {}, set()
        for r in range(balls + 1):
            for seq in itertools.product(colors, repeat=j):
                reds_left = r - seq.count("red")
                greens_left = balls - r - seq.count("green")
                key = (r,) + seq
                if reds_left < 0 or greens_left < 0:
                    rows[key] = (half, half)
                    unreachable.add(key)
                else:
                    left = balls - j
                    rows[key] = (Fraction(reds_left, left), Fraction(greens_left, left))
        name = f"draw{j + 1}"
        variables.append(Variable(name, colors))
        cpts.append(CPT(name, parents, rows, frozenset(unreachable)))
    return DiscreteNetwork(variables, cpts)
