"""Random landscape generators for both landscape classes.

``NoNSF`` landscapes draw every fitness value independently and uniformly
from ``{0, ..., V-1}``.  ``NSF`` landscapes are built by visiting the
solutions in a uniformly random order and assigning each a value drawn
uniformly from its remaining feasible interval; after every assignment,
bounds propagation intersects each unassigned solution's interval with
``[v - d, v + d]`` where ``d`` is the Hamming distance to the solution
just assigned.  Because the per-edge constraint (fitness difference at
most 1) is metric, one propagation sweep per assignment keeps every
domain consistent and non-empty, so the construction never backtracks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import FitnessLandscape
from .errors import ValidationError

MAX_NUM_VARS = 16


def default_value_domain(num_vars: int) -> int:
    """Generator-level default domain size: as rich as the search space."""
    return 1 << num_vars


@dataclass(frozen=True)
class GenConfig:
    num_vars: int
    klass: str
    seed: int
    value_domain_size: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.num_vars <= MAX_NUM_VARS:
            raise ValidationError(
                f"num_vars must be in [1, {MAX_NUM_VARS}], got {self.num_vars}"
            )
        if self.klass not in ("NSF", "NoNSF"):
            raise ValidationError(
                f"class must be NSF or NoNSF, got {self.klass!r}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.value_domain_size is not None:
            minimum = 2 if self.klass == "NSF" else 1
            if self.value_domain_size < minimum:
                raise ValidationError(
                    f"value_domain_size must be >= {minimum} for class "
                    f"{self.klass}"
                )

    @property
    def domain_size(self) -> int:
        if self.value_domain_size is not None:
            return self.value_domain_size
        return default_value_domain(self.num_vars)


def derive_seed(master_seed: int, index: int) -> int:
    """Per-landscape seed for batch item ``index``.

    Uses the spawn-key mechanism of :class:`numpy.random.SeedSequence`:
    the derived seed is the first 64-bit word of
    ``SeedSequence(master_seed, spawn_key=(index,))``.  The scheme is
    deterministic, collision-resistant, and independent of the order in
    which batch items are generated.
    """
    if index < 0:
        raise ValidationError("index must be non-negative")
    seq = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(seq.generate_state(1, np.uint64)[0])


def generate(cfg: GenConfig) -> FitnessLandscape:
    """Generate one landscape; a pure function of the config."""
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    size = 1 << cfg.num_vars
    domain = cfg.domain_size

    if cfg.klass == "NoNSF":
        values = rng.integers(0, domain, size=size, dtype=np.int64)
    else:
        values = _generate_constrained(rng, cfg.num_vars, domain)

    return FitnessLandscape(
        num_vars=cfg.num_vars,
        values=values,
        klass=cfg.klass,
        seed=cfg.seed,
        value_domain_size=domain,
    )


def _generate_constrained(
    rng: np.random.Generator, num_vars: int, domain: int
) -> np.ndarray:
    size = 1 << num_vars
    indices = np.arange(size, dtype=np.int64)
    lo = np.zeros(size, dtype=np.int64)
    hi = np.full(size, domain - 1, dtype=np.int64)
    values = np.zeros(size, dtype=np.int64)

    for s in rng.permutation(size):
        v = int(rng.integers(lo[s], hi[s] + 1))
        values[s] = v
        distance = np.bitwise_count(indices ^ s).astype(np.int64)
        np.maximum(lo, v - distance, out=lo)
        np.minimum(hi, v + distance, out=hi)
        if np.any(lo > hi):
            # The constraint system is bounds-consistent, so an empty
            # domain is unreachable; hitting this line is a defect.
            raise AssertionError(
                "bounds propagation emptied a fitness domain"
            )
    return values


def generate_batch(cfg: GenConfig, count: int) -> list[FitnessLandscape]:
    """Generate ``count`` landscapes with per-index derived seeds.

    Item ``i`` is exactly ``generate(cfg with seed=derive_seed(cfg.seed, i))``,
    so any item can be regenerated in isolation from its recorded seed.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    return [
        generate(replace(cfg, seed=derive_seed(cfg.seed, i)))
        for i in range(count)
    ]
