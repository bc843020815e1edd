"""Command-line interface for the landscape toolkit.

Subcommands: ``gen``, ``analyze``, ``oracle``, ``nsf-check``,
``experiment``, ``toy-verify``.  Exit codes: 0 success, 1 validation
error, 2 verification failure (``toy-verify``), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .core import load_landscape, save_landscape
from .errors import NumericalError, ValidationError
from .experiment import ExperimentConfig, run_experiment
from .generate import GenConfig, generate_batch
from .markov import (
    CombineMode,
    TransitionPolicy,
    build_chain,
    p_global,
)
from .nsf import check_nsf
from .search import estimate_reach
from .toycheck import run_toy_verification

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_IO = 3

_POLICIES = {
    "greedy-plateau": TransitionPolicy.GREEDY_PLATEAU,
    "strict": TransitionPolicy.STRICT_IMPROVING,
}
_COMBINES = {"average": CombineMode.AVERAGE, "sum": CombineMode.SUM}
_CLASSES = {"nsf": "NSF", "nonsf": "NoNSF"}


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the validation code."""

    def error(self, message: str) -> "argparse.NoReturn":
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _global_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("global options")
    group.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    group.add_argument(
        "--threads",
        default="1",
        help="worker process count, or 'auto' for the CPU count",
    )
    group.add_argument("--out", default=None, help="output directory")
    group.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="stdout format for analysis-style output",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    shared = [_global_flags()]
    parser = _Parser(
        prog="nsfland",
        description="Bitstring fitness-landscape analysis toolkit",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser(
        "gen", parents=shared, help="generate landscape files"
    )
    gen.add_argument("--n", type=int, required=True, help="variable count")
    gen.add_argument(
        "--class",
        dest="klass",
        choices=sorted(_CLASSES),
        required=True,
        help="landscape class",
    )
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument(
        "--value-domain",
        type=int,
        default=None,
        help="fitness value domain size (default: 2**n)",
    )

    analyze = commands.add_parser(
        "analyze", parents=shared, help="analytic reach probability"
    )
    analyze.add_argument("--in", dest="path", required=True)
    analyze.add_argument(
        "--policy", choices=sorted(_POLICIES), default="greedy-plateau"
    )
    analyze.add_argument(
        "--combine", choices=sorted(_COMBINES), default="average"
    )
    analyze.add_argument(
        "--emit-matrices",
        action="store_true",
        help="include Q, R, the fundamental matrix, and B in the output",
    )

    oracle = commands.add_parser(
        "oracle", parents=shared, help="Monte Carlo reach estimate"
    )
    oracle.add_argument("--in", dest="path", required=True)
    oracle.add_argument("--runs", type=int, default=10000)
    oracle.add_argument(
        "--policy", choices=sorted(_POLICIES), default="greedy-plateau"
    )

    check = commands.add_parser(
        "nsf-check",
        parents=shared,
        help="similar-fitness neighbourhood property verdict",
    )
    check.add_argument("--in", dest="path", required=True)

    experiment = commands.add_parser(
        "experiment", parents=shared, help="run the full landscape study"
    )
    experiment.add_argument(
        "--config", default=None, help="JSON config file (overrides flags)"
    )
    experiment.add_argument("--sizes", default=None, help="e.g. 3,4,5")
    experiment.add_argument("--count", type=int, default=None)
    experiment.add_argument(
        "--classes", default=None, help="comma-separated: nsf,nonsf"
    )
    experiment.add_argument(
        "--policy", choices=sorted(_POLICIES), default=None
    )
    experiment.add_argument(
        "--combine", choices=sorted(_COMBINES), default=None
    )
    experiment.add_argument(
        "--value-domain",
        type=int,
        default=None,
        help="override the per-cell default domain rule",
    )

    toy = commands.add_parser(
        "toy-verify",
        parents=shared,
        help="verify the hand-worked six-state chain end to end",
    )
    toy.set_defaults(format="text")
    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def _dispatch(args: argparse.Namespace) -> int:
    handlers = {
        "gen": _cmd_gen,
        "analyze": _cmd_analyze,
        "oracle": _cmd_oracle,
        "nsf-check": _cmd_nsf_check,
        "experiment": _cmd_experiment,
        "toy-verify": _cmd_toy_verify,
    }
    return handlers[args.command](args)


def _thread_count(args: argparse.Namespace) -> int:
    raw = str(args.threads)
    if raw == "auto":
        return os.cpu_count() or 1
    try:
        threads = int(raw)
    except ValueError:
        raise ValidationError(
            f"--threads must be an integer or 'auto', got {raw!r}"
        ) from None
    if threads < 1:
        raise ValidationError("--threads must be >= 1")
    return threads


def _emit(args: argparse.Namespace, payload: dict, name: str) -> None:
    """Write a result object to --out/<name> or stdout, honouring --format."""
    if args.format == "csv":
        lines = [
            f"{key},{json.dumps(value)}"
            for key, value in payload.items()
            if not isinstance(value, (dict, list))
        ]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        directory = Path(args.out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / name).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise ValidationError("--count must be >= 1")
    klass = _CLASSES[args.klass]
    cfg = GenConfig(
        num_vars=args.n,
        klass=klass,
        seed=args.seed,
        value_domain_size=args.value_domain,
    )
    directory = Path(args.out or ".")
    directory.mkdir(parents=True, exist_ok=True)
    for index, landscape in enumerate(generate_batch(cfg, args.count)):
        save_landscape(
            landscape, directory / f"{klass}_n{args.n}_{index}.json"
        )
    print(f"wrote {args.count} landscape file(s) to {directory}")
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    landscape = load_landscape(args.path)
    model = build_chain(landscape, _POLICIES[args.policy])
    result = p_global(landscape, model, _COMBINES[args.combine])
    payload = {
        "p_global": result.p_global,
        "combine": args.combine,
        "policy": args.policy,
        "num_vars": landscape.num_vars,
        "num_transient": model.num_transient,
        "num_absorbing": model.num_absorbing,
        "num_global_optima": len(result.global_states),
        "reach_by_start": result.reach_by_start.tolist(),
        "absorbing_states": [
            {
                "members": list(members),
                "fitness": model.absorbing_fitness[j],
                "is_global": j in result.global_states,
            }
            for j, members in enumerate(model.absorbing_states)
        ],
    }
    if args.emit_matrices:
        payload["q"] = model.q.tolist()
        payload["r"] = model.r.tolist()
        payload["fundamental"] = result.fundamental.tolist()
        payload["b"] = result.b.tolist()
    _emit(args, payload, "analysis.json")
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    landscape = load_landscape(args.path)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    estimate = estimate_reach(
        landscape, args.runs, rng, policy=_POLICIES[args.policy]
    )
    payload = {
        "p_hat": estimate.p_hat,
        "stderr": estimate.stderr,
        "F_star": estimate.f_star,
        "runs": estimate.runs,
    }
    _emit(args, payload, "oracle.json")
    return EXIT_OK


def _cmd_nsf_check(args: argparse.Namespace) -> int:
    landscape = load_landscape(args.path)
    profile = check_nsf(landscape)
    _emit(args, profile.to_dict(), "nsf_check.json")
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace) -> int:
    if args.config is not None:
        cfg = ExperimentConfig.from_file(args.config)
    else:
        kwargs: dict = {"seed": args.seed}
        if args.sizes is not None:
            kwargs["sizes"] = tuple(
                int(tok) for tok in args.sizes.split(",") if tok
            )
        if args.count is not None:
            kwargs["count"] = args.count
        if args.classes is not None:
            try:
                kwargs["classes"] = tuple(
                    _CLASSES[tok] for tok in args.classes.split(",") if tok
                )
            except KeyError as exc:
                raise ValidationError(
                    f"unknown class {exc.args[0]!r}; use nsf,nonsf"
                ) from None
        if args.policy is not None:
            kwargs["policy"] = _POLICIES[args.policy]
        if args.combine is not None:
            kwargs["combine"] = _COMBINES[args.combine]
        if args.value_domain is not None:
            kwargs["value_domain_size"] = args.value_domain
        cfg = ExperimentConfig(**kwargs)

    report = run_experiment(cfg, threads=_thread_count(args), out_dir=args.out)
    for (num_vars, klass), cell in sorted(report.cells.items()):
        print(
            f"n={num_vars} {klass:<5} median={cell.median:.4f} "
            f"mean={cell.mean:.4f}"
        )
    for num_vars, ks in sorted(report.ks_by_size.items()):
        print(
            f"n={num_vars} KS D={ks.d:.4f} p={ks.p_value:.3e} "
            f"reject_99={ks.reject_99}"
        )
    return EXIT_OK


def _cmd_toy_verify(args: argparse.Namespace) -> int:
    report = run_toy_verification()
    if args.format == "json":
        payload = report.to_dict()
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for line in report.lines():
            print(line)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


if __name__ == "__main__":
    raise SystemExit(main())
