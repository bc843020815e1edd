"""Stochastic hill climbing and a Monte Carlo reach estimator.

The climber is the sampled counterpart of the analytic chain: move to a
uniformly chosen strictly better neighbour when one exists, otherwise to
an equal-fitness neighbour not yet visited, otherwise stop.  The
no-revisit memory defaults to the current plateau excursion (cleared on
every strict improvement); ``memory_scope="climb"`` keeps it for the
whole climb instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FitnessLandscape, neighbour_table
from .errors import ValidationError
from .markov import TransitionPolicy

MEMORY_SCOPES = ("plateau", "climb")


@dataclass(frozen=True)
class ClimbTrace:
    start: int
    path: tuple[int, ...]
    final_fitness: int
    reached_global: bool


@dataclass(frozen=True)
class ReachEstimate:
    p_hat: float
    stderr: float
    f_star: int
    runs: int


def hill_climb(
    landscape: FitnessLandscape,
    start: int,
    rng: np.random.Generator,
    policy: TransitionPolicy = TransitionPolicy.GREEDY_PLATEAU,
    memory_scope: str = "plateau",
) -> ClimbTrace:
    """One seeded climb from ``start``; returns the full path."""
    if memory_scope not in MEMORY_SCOPES:
        raise ValidationError(
            f"memory_scope must be one of {MEMORY_SCOPES}, got {memory_scope!r}"
        )
    size = landscape.size
    if not 0 <= start < size:
        raise ValidationError(f"start index {start} out of range [0, {size})")

    values = landscape.values.tolist()
    nbrs = neighbour_table(landscape.num_vars).tolist()
    allow_equal = policy is TransitionPolicy.GREEDY_PLATEAU

    current = int(start)
    path = [current]
    visited = {current}
    while True:
        value = values[current]
        better = [t for t in nbrs[current] if values[t] > value]
        if better:
            current = better[int(rng.integers(len(better)))]
            path.append(current)
            if memory_scope == "plateau":
                visited = {current}
            else:
                visited.add(current)
            continue
        if allow_equal:
            equal = [
                t
                for t in nbrs[current]
                if values[t] == value and t not in visited
            ]
            if equal:
                current = equal[int(rng.integers(len(equal)))]
                path.append(current)
                visited.add(current)
                continue
        break

    final_fitness = values[current]
    return ClimbTrace(
        start=int(start),
        path=tuple(path),
        final_fitness=int(final_fitness),
        reached_global=final_fitness == landscape.global_maximum(),
    )


def estimate_reach(
    landscape: FitnessLandscape,
    runs: int,
    rng: np.random.Generator,
    policy: TransitionPolicy = TransitionPolicy.GREEDY_PLATEAU,
    memory_scope: str = "plateau",
) -> ReachEstimate:
    """Monte Carlo estimate of the global-optimum reach probability.

    Runs ``runs`` climbs from uniformly random starts; ``p_hat`` is the
    fraction ending at the exact global maximum fitness, ``f_star`` the
    best final fitness observed, and ``stderr`` the binomial standard
    error ``sqrt(p_hat * (1 - p_hat) / runs)``.
    """
    if runs < 1:
        raise ValidationError(f"runs must be >= 1, got {runs}")
    top = landscape.global_maximum()
    hits = 0
    f_star = 0
    size = landscape.size
    for _ in range(runs):
        start = int(rng.integers(size))
        trace = hill_climb(
            landscape, start, rng, policy=policy, memory_scope=memory_scope
        )
        f_star = max(f_star, trace.final_fitness)
        if trace.final_fitness == top:
            hits += 1
    p_hat = hits / runs
    return ReachEstimate(
        p_hat=p_hat,
        stderr=float(np.sqrt(p_hat * (1.0 - p_hat) / runs)),
        f_star=int(f_star),
        runs=runs,
    )
