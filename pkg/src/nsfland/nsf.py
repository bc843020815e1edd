"""Similar-fitness neighbourhood analysis.

For a landscape with realised fitness values ``v`` and difference set
``deltas``, two families of distributions are compared:

* ``p(v, d)`` — the proportion of the whole search space whose fitness
  differs from ``v`` by exactly ``d``;
* ``pn(v, d)`` — the same proportion measured only over the deduplicated
  union of the neighbourhoods of the fitness-``v`` solutions.

The landscape has the similar-fitness neighbourhood property when the
advantage ``pn(v, d) - p(v, d)`` trends downward in ``d`` for every
realised ``v``: neighbours concentrate at small fitness differences at
least as strongly as the space at large.  Three exact checks make that
operational; see :func:`check_nsf`.  All proportions are exact integer
ratios, so the verdict involves no floating-point comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FitnessLandscape, neighbour_table
from .errors import ValidationError

MONOTONICITY = "MONOTONICITY"
SUM = "SUM"


@dataclass(frozen=True)
class ValueDistributions:
    """The per-fitness-value distributions, aligned with the delta set."""

    p: tuple[Fraction, ...]
    pn: tuple[Fraction, ...]


@dataclass(frozen=True)
class Violation:
    """One failed property check; ``delta`` is None for the sum check."""

    value: int
    delta: int | None
    reason: str


@dataclass(frozen=True)
class NsfProfile:
    deltas: tuple[int, ...]
    per_value: "dict[int, ValueDistributions]"
    verdict: bool
    violations: tuple[Violation, ...]

    def to_dict(self) -> dict:
        return {
            "deltas": list(self.deltas),
            "per_value": {
                str(v): {
                    "p": [float(x) for x in dist.p],
                    "pn": [float(x) for x in dist.pn],
                }
                for v, dist in sorted(self.per_value.items())
            },
            "verdict": self.verdict,
            "violations": [
                {"value": w.value, "delta": w.delta, "reason": w.reason}
                for w in self.violations
            ],
        }


def delta_set(landscape: FitnessLandscape) -> tuple[int, ...]:
    """Sorted absolute differences between realised fitness values.

    Always contains 0 (the difference of a value with itself).
    """
    realised = np.unique(landscape.values)
    diffs = np.abs(realised[:, None] - realised[None, :])
    return tuple(int(d) for d in np.unique(diffs))


def _value_histogram(landscape: FitnessLandscape) -> np.ndarray:
    return np.bincount(
        landscape.values, minlength=int(landscape.values.max()) + 1
    )


def _count_at_difference(hist: np.ndarray, v: int, delta: int) -> int:
    """How many histogram entries sit at fitness ``v - delta`` or ``v + delta``."""
    count = 0
    if v + delta < len(hist):
        count += int(hist[v + delta])
    if delta > 0 and v - delta >= 0:
        count += int(hist[v - delta])
    return count


def _check_query(landscape: FitnessLandscape, v: int, delta: int) -> None:
    if delta not in delta_set(landscape):
        raise ValidationError(f"delta {delta} is not a realised difference")
    if not np.any(landscape.values == v):
        raise ValidationError(f"fitness value {v} is not realised")


def proportion_space(
    landscape: FitnessLandscape, v: int, delta: int
) -> Fraction:
    """Share of all solutions whose fitness differs from ``v`` by ``delta``."""
    _check_query(landscape, v, delta)
    hist = _value_histogram(landscape)
    return Fraction(_count_at_difference(hist, v, delta), landscape.size)


def neighbourhood_union(landscape: FitnessLandscape, v: int) -> np.ndarray:
    """Deduplicated union of the neighbourhoods of fitness-``v`` solutions."""
    members = np.flatnonzero(landscape.values == v)
    table = neighbour_table(landscape.num_vars)
    return np.unique(table[members].ravel())


def proportion_neighbours(
    landscape: FitnessLandscape, v: int, delta: int
) -> Fraction:
    """Share of the fitness-``v`` neighbourhood union at difference ``delta``."""
    _check_query(landscape, v, delta)
    union = neighbourhood_union(landscape, v)
    union_values = landscape.values[union]
    hist = np.bincount(union_values, minlength=int(landscape.values.max()) + 1)
    return Fraction(_count_at_difference(hist, v, delta), len(union))


def check_nsf(landscape: FitnessLandscape) -> NsfProfile:
    """Decide the similar-fitness neighbourhood property for a landscape.

    For each realised fitness value ``v`` three exact conditions must
    hold, and the verdict is true iff none is violated anywhere:

    1. *Downward trend* — the neighbourhood union must not sit at larger
       fitness differences, on average, than the rest of the space:
       ``sum_d d * (pn(v, d) - p'(v, d)) <= 0``, where ``p'`` is the
       space distribution with one delta-0 count removed.  A solution is
       never its own neighbour, so the one guaranteed same-fitness hit
       every solution contributes to ``p`` has no counterpart in ``pn``
       and is excluded from the baseline.  A failure is recorded as a
       MONOTONICITY violation at the smallest delta >= 1 carrying the
       largest neighbour excess.
    2. *In-range decay* — over the difference range the neighbourhood
       actually occupies (from 1 up to the largest delta with
       ``pn > 0``), the advantage ``pn - p`` must be non-increasing over
       consecutive deltas; a failure is recorded at the later delta.
       Delta 0 is kept out of this pairwise scan: ``p`` folds the two
       signed differences ``+d`` and ``-d`` into one bucket for
       ``d >= 1`` but has a single bucket at 0, so the 0-to-1 step
       compares unlike quantities.
    3. *Non-negative total* — ``sum_d (pn(v, d) - p(v, d)) >= 0``,
       recorded with a delta of None on failure.

    All comparisons clear denominators and run on integers, so there is
    no floating-point tolerance anywhere.  The profile's ``p`` tables
    keep the full space distribution (self-counts included); the
    self-count correction applies only inside condition 1.
    """
    deltas = delta_set(landscape)
    space_hist = _value_histogram(landscape)
    table = neighbour_table(landscape.num_vars)
    size = landscape.size
    per_value: dict[int, ValueDistributions] = {}
    violations: list[Violation] = []

    for v in (int(x) for x in np.unique(landscape.values)):
        members = np.flatnonzero(landscape.values == v)
        union = np.unique(table[members].ravel())
        union_hist = np.bincount(
            landscape.values[union], minlength=len(space_hist)
        )
        union_size = len(union)

        p_counts = [_count_at_difference(space_hist, v, d) for d in deltas]
        pn_counts = [_count_at_difference(union_hist, v, d) for d in deltas]
        advantage = [
            nc * size - pc * union_size
            for nc, pc in zip(pn_counts, p_counts)
        ]

        # Condition 2: pairwise decay inside the occupied range.
        occupied = [d for d, nc in zip(deltas, pn_counts) if nc > 0]
        span_end = occupied[-1] if occupied else 0
        in_range = [i for i, d in enumerate(deltas) if 1 <= d <= span_end]
        for prev, here in zip(in_range, in_range[1:]):
            if advantage[here] > advantage[prev]:
                violations.append(Violation(v, deltas[here], MONOTONICITY))

        # Condition 1: mean neighbour difference vs the self-free space.
        # Common denominator union_size * (size - 1); numerators only.
        corrected = [
            nc * (size - 1) - (pc - (d == 0)) * union_size
            for d, nc, pc in zip(deltas, pn_counts, p_counts)
        ]
        if sum(d * c for d, c in zip(deltas, corrected)) > 0:
            peak = max(
                (i for i, d in enumerate(deltas) if d >= 1),
                key=lambda i: (corrected[i], -deltas[i]),
            )
            violations.append(Violation(v, deltas[peak], MONOTONICITY))

        # Condition 3: the advantage total must not be negative.
        if sum(advantage) < 0:
            violations.append(Violation(v, None, SUM))

        per_value[v] = ValueDistributions(
            p=tuple(Fraction(pc, size) for pc in p_counts),
            pn=tuple(Fraction(nc, union_size) for nc in pn_counts),
        )

    return NsfProfile(
        deltas=deltas,
        per_value=per_value,
        verdict=not violations,
        violations=tuple(violations),
    )
