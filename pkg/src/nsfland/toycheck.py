"""End-to-end self-check on a hand-worked six-state absorbing chain.

The chain has five transient states feeding one absorbing state.  Its
fundamental matrix and absorption probabilities were worked out by hand
and are kept here as frozen constants; the check rebuilds them through
the production import/solve path and compares within a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .markov import (
    CombineMode,
    absorption_probabilities,
    fundamental_matrix,
    import_chain,
    p_global,
)

TOLERANCE = 1e-9

TOY_Q = np.array(
    [
        [0.0, 0.25, 0.25, 0.25, 0.25],
        [0.0, 0.0, 0.25, 0.25, 0.25],
        [0.0, 0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0],
        [0.0, 0.0, 0.0, 0.0, 0.5],
        [0.0, 0.0, 0.0, 0.0, 0.0],
    ]
)
TOY_R = np.array([[0.0], [0.25], [1.0 / 3.0], [0.5], [1.0]])
TOY_ABSORBING_FITNESS = (6,)

EXPECTED_FUNDAMENTAL = np.array(
    [
        [1.0, 0.25, 0.3125, 5.0 / 12.0, 0.625],
        [0.0, 1.0, 0.25, 1.0 / 3.0, 0.5],
        [0.0, 0.0, 1.0, 1.0 / 3.0, 0.5],
        [0.0, 0.0, 0.0, 1.0, 0.5],
        [0.0, 0.0, 0.0, 0.0, 1.0],
    ]
)
EXPECTED_ABSORPTION = np.ones((5, 1))


@dataclass(frozen=True, eq=False)
class ToyReport:
    passed: bool
    max_error_fundamental: float
    max_error_absorption: float
    fundamental: np.ndarray
    absorption: np.ndarray
    p_global_average: float
    p_global_sum: float

    def lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        return [
            "six-state absorbing chain self-check",
            f"  fundamental matrix max error: "
            f"{self.max_error_fundamental:.3e} (tolerance {TOLERANCE:.0e})",
            f"  absorption matrix max error:  "
            f"{self.max_error_absorption:.3e} (tolerance {TOLERANCE:.0e})",
            f"  reach probability: average={self.p_global_average:.6f} "
            f"sum={self.p_global_sum:.6f} (unique optimum; both must be 1)",
            f"  result: {status}",
        ]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_error_fundamental": self.max_error_fundamental,
            "max_error_absorption": self.max_error_absorption,
            "fundamental": self.fundamental.tolist(),
            "absorption": self.absorption.tolist(),
            "p_global_average": self.p_global_average,
            "p_global_sum": self.p_global_sum,
            "tolerance": TOLERANCE,
        }


def run_toy_verification(tolerance: float = TOLERANCE) -> ToyReport:
    """Recompute the hand-worked chain and compare against the constants."""
    model = import_chain(
        TOY_Q, TOY_R, absorbing_fitness=TOY_ABSORBING_FITNESS
    )
    fundamental = fundamental_matrix(model)
    absorption = absorption_probabilities(model, fundamental)
    err_n = float(np.abs(fundamental - EXPECTED_FUNDAMENTAL).max())
    err_b = float(np.abs(absorption - EXPECTED_ABSORPTION).max())
    avg = p_global(None, model, CombineMode.AVERAGE).p_global
    total = p_global(None, model, CombineMode.SUM).p_global
    passed = (
        err_n <= tolerance
        and err_b <= tolerance
        and abs(avg - 1.0) <= tolerance
        and abs(total - 1.0) <= tolerance
    )
    return ToyReport(
        passed=passed,
        max_error_fundamental=err_n,
        max_error_absorption=err_b,
        fundamental=fundamental,
        absorption=absorption,
        p_global_average=avg,
        p_global_sum=total,
    )
