"""Bitstring search spaces, fitness landscapes, and restricted problems.

Solutions over ``n`` binary decision variables are identified by integer
index in ``[0, 2**n)``.  Variable ``b_1`` is the most significant bit of
the index, so the index rendered as an ``n``-character binary string reads
``b_1 b_2 ... b_n`` left to right.  Two solutions are neighbours iff they
differ in exactly one variable (Hamming distance 1), which makes the
search space the ``n``-dimensional hypercube graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import ValidationError

LANDSCAPE_CLASSES = ("NSF", "NoNSF", "external")


def bit_position(variable: int, num_vars: int) -> int:
    """Index bit position holding variable ``variable`` (1-indexed)."""
    if not 1 <= variable <= num_vars:
        raise ValidationError(
            f"variable must be in [1, {num_vars}], got {variable}"
        )
    return num_vars - variable


def index_to_bits(index: int, num_vars: int) -> str:
    """Render a solution index as its variable-value string ``b_1..b_n``."""
    _check_index(index, num_vars)
    return format(index, f"0{num_vars}b")


def bits_to_index(bits: str) -> int:
    """Parse a variable-value string ``b_1..b_n`` back to a solution index."""
    if not bits or any(c not in "01" for c in bits):
        raise ValidationError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


@lru_cache(maxsize=None)
def neighbour_table(num_vars: int) -> np.ndarray:
    """Neighbour indices for every solution, shape ``(2**n, n)``.

    Column ``j`` holds the neighbour obtained by flipping variable
    ``j + 1``.  The table is cached and marked read-only.
    """
    if num_vars < 1:
        raise ValidationError(f"num_vars must be >= 1, got {num_vars}")
    indices = np.arange(1 << num_vars, dtype=np.int64)[:, None]
    flips = np.array(
        [1 << (num_vars - j) for j in range(1, num_vars + 1)], dtype=np.int64
    )
    table = indices ^ flips[None, :]
    table.setflags(write=False)
    return table


def neighbours(index: int, num_vars: int) -> set[int]:
    """The ``n`` solutions at Hamming distance 1 from ``index``."""
    _check_index(index, num_vars)
    return {index ^ (1 << b) for b in range(num_vars)}


def _check_index(index: int, num_vars: int) -> None:
    if num_vars < 1:
        raise ValidationError(f"num_vars must be >= 1, got {num_vars}")
    if not 0 <= index < (1 << num_vars):
        raise ValidationError(
            f"solution index {index} out of range [0, {1 << num_vars})"
        )


@dataclass(frozen=True, eq=False)
class FitnessLandscape:
    """A complete enumeration of integer fitness values over a hypercube.

    ``values[k]`` is the fitness of solution index ``k``.  Landscapes of
    class ``"NSF"`` must satisfy the neighbour constraint: every 1-flip
    edge has fitness difference at most 1 (validated at construction).
    """

    num_vars: int
    values: np.ndarray
    klass: str = "external"
    seed: int | None = None
    value_domain_size: int | None = None

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValidationError(f"num_vars must be >= 1, got {self.num_vars}")
        values = np.asarray(self.values)
        if not np.issubdtype(values.dtype, np.integer):
            raise ValidationError("fitness values must be integers")
        values = values.astype(np.int64, copy=True)
        if values.shape != (1 << self.num_vars,):
            raise ValidationError(
                f"expected {1 << self.num_vars} values for num_vars="
                f"{self.num_vars}, got shape {values.shape}"
            )
        if self.klass not in LANDSCAPE_CLASSES:
            raise ValidationError(
                f"class must be one of {LANDSCAPE_CLASSES}, got {self.klass!r}"
            )
        if values.min() < 0:
            raise ValidationError("fitness values must be non-negative")
        if self.value_domain_size is not None:
            if self.value_domain_size < 1:
                raise ValidationError("value_domain_size must be positive")
            if values.max() >= self.value_domain_size:
                raise ValidationError(
                    "fitness values must lie in [0, value_domain_size)"
                )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.klass == "NSF" and self.max_edge_difference() > 1:
            raise ValidationError(
                "class NSF requires every 1-flip edge difference <= 1; "
                f"found an edge with difference {self.max_edge_difference()}"
            )

    @property
    def size(self) -> int:
        return 1 << self.num_vars

    def max_edge_difference(self) -> int:
        """Largest |fitness difference| over all 1-flip edges."""
        table = neighbour_table(self.num_vars)
        diffs = self.values[table] - self.values[:, None]
        return int(np.abs(diffs).max())

    def global_maximum(self) -> int:
        return int(self.values.max())


def global_maxima(landscape: FitnessLandscape) -> set[int]:
    """All solution indices attaining the maximum fitness (never empty)."""
    top = landscape.values.max()
    return set(int(i) for i in np.flatnonzero(landscape.values == top))


@dataclass(frozen=True)
class Restriction:
    """Fixes some variables of an ``M``-variable problem, leaving ``N`` free.

    ``chosen_mask`` is an ``M``-bit mask over index bit positions whose set
    bits mark the free (chosen) variables; ``fixed_values`` maps each
    remaining variable number to its frozen value.
    """

    total_vars: int
    chosen_mask: int
    fixed_values: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        m = self.total_vars
        if m < 1:
            raise ValidationError("total_vars must be >= 1")
        if not 1 <= self.chosen_mask < (1 << m):
            raise ValidationError(
                f"chosen_mask must select between 1 and {m} variables"
            )
        fixed = dict(self.fixed_values)
        expected_fixed = {
            j for j in range(1, m + 1)
            if not self.chosen_mask >> bit_position(j, m) & 1
        }
        if set(fixed) != expected_fixed:
            raise ValidationError(
                "fixed_values must assign exactly the variables outside the "
                f"chosen set {sorted(expected_fixed)}, got {sorted(fixed)}"
            )
        if any(v not in (0, 1) for v in fixed.values()):
            raise ValidationError("fixed variable values must be 0 or 1")
        object.__setattr__(
            self, "fixed_values", tuple(sorted(fixed.items()))
        )

    @classmethod
    def from_variables(
        cls,
        total_vars: int,
        chosen: "tuple[int, ...] | list[int] | set[int]",
        fixed: "dict[int, int] | None" = None,
    ) -> "Restriction":
        """Build a restriction from 1-indexed variable numbers."""
        mask = 0
        for j in set(chosen):
            mask |= 1 << bit_position(j, total_vars)
        return cls(total_vars, mask, tuple(sorted((fixed or {}).items())))

    @property
    def num_chosen(self) -> int:
        return bin(self.chosen_mask).count("1")

    def chosen_variables(self) -> tuple[int, ...]:
        """Chosen variable numbers in ascending order."""
        m = self.total_vars
        return tuple(
            j for j in range(1, m + 1)
            if self.chosen_mask >> bit_position(j, m) & 1
        )

    def embed(self, sub_index: int) -> int:
        """Map a restricted-problem solution index to the full problem.

        Bit ``i`` of the sub-index (most significant first) supplies the
        value of the ``i``-th chosen variable in ascending variable order;
        fixed variables contribute their frozen values.
        """
        n = self.num_chosen
        _check_index(sub_index, n)
        full = 0
        for sub_var, full_var in enumerate(self.chosen_variables(), start=1):
            bit = sub_index >> bit_position(sub_var, n) & 1
            full |= bit << bit_position(full_var, self.total_vars)
        for var, value in self.fixed_values:
            full |= value << bit_position(var, self.total_vars)
        return full


def restrict(base: FitnessLandscape, r: Restriction) -> FitnessLandscape:
    """The sub-landscape over the chosen variables with the rest frozen."""
    if base.num_vars != r.total_vars:
        raise ValidationError(
            f"restriction is over {r.total_vars} variables but the landscape "
            f"has {base.num_vars}"
        )
    sub_size = 1 << r.num_chosen
    sub_values = np.array(
        [base.values[r.embed(k)] for k in range(sub_size)], dtype=np.int64
    )
    return FitnessLandscape(
        num_vars=r.num_chosen,
        values=sub_values,
        klass="external",
        seed=None,
        value_domain_size=base.value_domain_size,
    )


def landscape_to_dict(landscape: FitnessLandscape) -> dict:
    return {
        "num_vars": landscape.num_vars,
        "class": landscape.klass,
        "seed": landscape.seed,
        "value_domain_size": landscape.value_domain_size,
        "values": [int(v) for v in landscape.values],
    }


def landscape_from_dict(data: dict) -> FitnessLandscape:
    if not isinstance(data, dict):
        raise ValidationError(f"expected a landscape object, got {type(data)}")
    missing = {"num_vars", "values"} - set(data)
    if missing:
        raise ValidationError(f"landscape object missing fields: {missing}")
    return FitnessLandscape(
        num_vars=int(data["num_vars"]),
        values=np.asarray(data["values"], dtype=np.int64),
        klass=data.get("class", "external"),
        seed=None if data.get("seed") is None else int(data["seed"]),
        value_domain_size=(
            None
            if data.get("value_domain_size") is None
            else int(data["value_domain_size"])
        ),
    )


def load_landscapes(path: "str | Path") -> list[FitnessLandscape]:
    """Read a JSON file holding one landscape object or an array of them."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    items = data if isinstance(data, list) else [data]
    if not items:
        raise ValidationError(f"{path}: empty landscape array")
    return [landscape_from_dict(item) for item in items]


def load_landscape(path: "str | Path") -> FitnessLandscape:
    """Read a JSON file expected to hold exactly one landscape."""
    loaded = load_landscapes(path)
    if len(loaded) != 1:
        raise ValidationError(
            f"{path}: expected one landscape, found {len(loaded)}"
        )
    return loaded[0]


def save_landscape(landscape: FitnessLandscape, path: "str | Path") -> None:
    Path(path).write_text(
        json.dumps(landscape_to_dict(landscape)) + "\n", encoding="utf-8"
    )
