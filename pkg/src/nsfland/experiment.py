"""Batch study driver: generate, analyse, aggregate, and report.

For every (size, class) cell the driver generates landscapes from
pre-derived per-landscape seeds, computes both combine-mode reach
probabilities analytically, and writes one CSV row per landscape plus a
JSON report with five-number summaries and per-size two-sample KS tests
between the class samples.  Results are deterministic for a fixed seed
regardless of the worker-process count, because seeds are derived from
the cell coordinates and row order is fixed before execution.
"""

from __future__ import annotations

import concurrent.futures
import csv
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__ as _version
from .errors import ValidationError
from .generate import GenConfig, generate
from .markov import CombineMode, TransitionPolicy, build_chain, summarise_chain
from .stats import KsResult, five_number_summary, ks_two_sample

SUPPORTED_SIZES = (3, 4, 5, 6, 7, 8, 9)
CLASS_CODES = {"NSF": 0, "NoNSF": 1}
CSV_HEADER = (
    "n,class,landscape_id,seed,value_domain_size,num_absorbing,"
    "num_global_optima,p_global_avg,p_global_sum"
)


def default_domain_size(num_vars: int, klass: str) -> int:
    """Per-cell fitness-value-domain size used by the study.

    The constrained class keeps a small fixed domain (4 values) at every
    size: the neighbour constraint then still binds, and the plateaus it
    produces are what give local search its near-certain reach.  The
    unconstrained class gets the same small domain at the smallest size
    (heavy ties are the only way both class medians sit at 1.00 there)
    and a domain quadratically larger than the search space at bigger
    sizes, which keeps duplicate fitness values rare at every size.
    """
    if klass == "NSF":
        return 4
    return 4 if num_vars <= 3 else 4**num_vars


def landscape_seed(master_seed: int, num_vars: int, klass: str, index: int) -> int:
    """Seed of landscape ``index`` of a cell, from the cell coordinates.

    First 64-bit word of ``SeedSequence(master, spawn_key=(n, class_code,
    index))`` with class codes NSF=0, NoNSF=1; independent of execution
    order, so any worker layout produces identical landscapes.
    """
    seq = np.random.SeedSequence(
        master_seed, spawn_key=(num_vars, CLASS_CODES[klass], index)
    )
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...] = SUPPORTED_SIZES
    count: int = 1000
    classes: tuple[str, ...] = ("NSF", "NoNSF")
    seed: int = 0
    policy: TransitionPolicy = TransitionPolicy.GREEDY_PLATEAU
    combine: CombineMode = CombineMode.SUM
    value_domain_size: int | None = None
    out_dir: str | None = None

    def __post_init__(self) -> None:
        sizes = tuple(sorted(set(int(n) for n in self.sizes)))
        if not sizes:
            raise ValidationError("sizes must be non-empty")
        unsupported = [n for n in sizes if n not in SUPPORTED_SIZES]
        if unsupported:
            raise ValidationError(
                f"sizes must be a subset of {SUPPORTED_SIZES}, got {unsupported}"
            )
        object.__setattr__(self, "sizes", sizes)
        classes = tuple(dict.fromkeys(self.classes))
        if not classes or any(k not in CLASS_CODES for k in classes):
            raise ValidationError(
                f"classes must be a non-empty subset of "
                f"{tuple(CLASS_CODES)}, got {self.classes}"
            )
        object.__setattr__(self, "classes", classes)
        if self.count < 1:
            raise ValidationError("count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if isinstance(self.policy, str):
            object.__setattr__(
                self, "policy", TransitionPolicy(self.policy)
            )
        if isinstance(self.combine, str):
            object.__setattr__(self, "combine", CombineMode(self.combine))
        if self.value_domain_size is not None and self.value_domain_size < 2:
            raise ValidationError("value_domain_size must be >= 2")

    def domain_size(self, num_vars: int, klass: str) -> int:
        if self.value_domain_size is not None:
            return self.value_domain_size
        return default_domain_size(num_vars, klass)

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "count": self.count,
            "classes": list(self.classes),
            "seed": self.seed,
            "policy": self.policy.value,
            "combine": self.combine.value,
            "value_domain_size": self.value_domain_size,
            "out_dir": self.out_dir,
        }

    def config_hash(self) -> str:
        payload = self.to_dict()
        payload.pop("out_dir")  # where results land is not part of the science
        canonical = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {
            "sizes",
            "count",
            "classes",
            "seed",
            "policy",
            "combine",
            "value_domain_size",
            "out_dir",
        }
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        kwargs = dict(data)
        if "sizes" in kwargs:
            kwargs["sizes"] = tuple(kwargs["sizes"])
        if "classes" in kwargs:
            kwargs["classes"] = tuple(kwargs["classes"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: "str | Path") -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class CellReport:
    """Aggregates for one (size, class) cell of the study."""

    sample: tuple[float, ...]
    five_number: tuple[float, float, float, float, float]
    mean: float

    @property
    def median(self) -> float:
        return self.five_number[2]


@dataclass(frozen=True)
class SizeKs:
    d: float
    p_value: float
    reject_99: bool


@dataclass(frozen=True)
class ExperimentReport:
    cells: "dict[tuple[int, str], CellReport]"
    ks_by_size: "dict[int, SizeKs]"
    rows: tuple[tuple, ...]
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        cells: dict[str, dict] = {}
        for (n, klass), cell in sorted(self.cells.items()):
            cells.setdefault(str(n), {})[klass] = {
                "sample": list(cell.sample),
                "five_number": list(cell.five_number),
                "median": cell.median,
                "mean": cell.mean,
            }
        return {
            "cells": cells,
            "ks_by_size": {
                str(n): {
                    "d": ks.d,
                    "p_value": ks.p_value,
                    "reject_99": ks.reject_99,
                }
                for n, ks in sorted(self.ks_by_size.items())
            },
            "provenance": self.provenance,
        }


def _analyse_task(task: tuple) -> tuple:
    """Worker: one landscape from its coordinates to its CSV row."""
    num_vars, klass, index, seed, domain, policy_value = task
    landscape = generate(
        GenConfig(
            num_vars=num_vars,
            klass=klass,
            seed=seed,
            value_domain_size=domain,
        )
    )
    model = build_chain(landscape, TransitionPolicy(policy_value))
    summary = summarise_chain(landscape, model)
    return (
        num_vars,
        klass,
        index,
        seed,
        domain,
        summary.num_absorbing,
        summary.num_global_optima,
        summary.p_global_avg,
        summary.p_global_sum,
    )


def run_experiment(
    cfg: ExperimentConfig,
    threads: int = 1,
    out_dir: "str | Path | None" = None,
) -> ExperimentReport:
    """Run the full study and write ``results.csv`` and ``report.json``.

    The CSV body is a pure function of the config: rows are ordered by
    (size, class order, landscape id) and flushed after each completed
    cell.  The JSON report carries the same aggregates plus provenance;
    its timestamp is confined to the provenance block.
    """
    if threads < 1:
        raise ValidationError("threads must be >= 1")
    target_dir = Path(out_dir if out_dir is not None else cfg.out_dir or ".")
    target_dir.mkdir(parents=True, exist_ok=True)
    csv_path = target_dir / "results.csv"
    report_path = target_dir / "report.json"

    started = time.time()
    cells: dict[tuple[int, str], CellReport] = {}
    all_rows: list[tuple] = []

    executor = (
        concurrent.futures.ProcessPoolExecutor(max_workers=threads)
        if threads > 1
        else None
    )
    try:
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_HEADER.split(","))
            for num_vars in cfg.sizes:
                for klass in cfg.classes:
                    domain = cfg.domain_size(num_vars, klass)
                    tasks = [
                        (
                            num_vars,
                            klass,
                            index,
                            landscape_seed(cfg.seed, num_vars, klass, index),
                            domain,
                            cfg.policy.value,
                        )
                        for index in range(cfg.count)
                    ]
                    if executor is None:
                        rows = [_analyse_task(task) for task in tasks]
                    else:
                        chunk = max(1, cfg.count // (threads * 8))
                        rows = list(
                            executor.map(_analyse_task, tasks, chunksize=chunk)
                        )
                    for row in rows:
                        writer.writerow([_csv_cell(x) for x in row])
                    handle.flush()
                    all_rows.extend(rows)
                    sample = tuple(
                        row[8] if cfg.combine is CombineMode.SUM else row[7]
                        for row in rows
                    )
                    cells[(num_vars, klass)] = CellReport(
                        sample=sample,
                        five_number=five_number_summary(sample),
                        mean=float(np.mean(sample)),
                    )
    finally:
        if executor is not None:
            executor.shutdown()

    ks_by_size: dict[int, SizeKs] = {}
    if "NSF" in cfg.classes and "NoNSF" in cfg.classes:
        for num_vars in cfg.sizes:
            result: KsResult = ks_two_sample(
                cells[(num_vars, "NoNSF")].sample,
                cells[(num_vars, "NSF")].sample,
            )
            ks_by_size[num_vars] = SizeKs(
                d=result.d,
                p_value=result.p_value,
                reject_99=result.p_value < 0.01,
            )

    report = ExperimentReport(
        cells=cells,
        ks_by_size=ks_by_size,
        rows=tuple(all_rows),
        provenance={
            "seed": cfg.seed,
            "config": cfg.to_dict(),
            "config_hash": cfg.config_hash(),
            "tool_version": _version,
            "threads": threads,
            "timestamp": time.strftime(
                "%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)
            ),
            "elapsed_seconds": round(time.time() - started, 3),
        },
    )
    report_path.write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    return report


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
