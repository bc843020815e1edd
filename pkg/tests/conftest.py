"""Shared fixtures.

The two full-study fixtures are session-scoped because the complete run
(7 sizes x 2 classes x 1000 landscapes) is the expensive part of the
suite; every test that needs study output reads from these.
"""

from __future__ import annotations

import pytest

from nsfland import ExperimentConfig, run_experiment


@pytest.fixture(scope="session")
def full_study_single(tmp_path_factory):
    """Default full study, one worker; returns (out_dir, report)."""
    out = tmp_path_factory.mktemp("study_single")
    report = run_experiment(ExperimentConfig(), threads=1, out_dir=out)
    return out, report


@pytest.fixture(scope="session")
def full_study_threaded(tmp_path_factory):
    """Same study with four workers, for the determinism comparison."""
    out = tmp_path_factory.mktemp("study_threaded")
    report = run_experiment(ExperimentConfig(), threads=4, out_dir=out)
    return out, report
