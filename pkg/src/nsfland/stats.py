"""Descriptive statistics and the two-sample Kolmogorov-Smirnov test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_SERIES_TERM_TOL = 1e-12


def five_number_summary(
    sample,
) -> tuple[float, float, float, float, float]:
    """(min, Q1, median, Q3, max) with linear interpolation of order stats.

    The median of an even-length sample is the midpoint of the two
    central order statistics; quartiles interpolate at ranks
    ``(len - 1) * p``.
    """
    data = np.asarray(sample, dtype=np.float64)
    if data.size == 0:
        raise ValidationError("five_number_summary requires a nonempty sample")
    q = np.quantile(data, [0.0, 0.25, 0.5, 0.75, 1.0])
    return tuple(float(x) for x in q)


@dataclass(frozen=True)
class KsResult:
    d: float
    p_value: float


def kolmogorov_survival(lam: float) -> float:
    """``Q(lam) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lam^2)``.

    The tail probability of the Kolmogorov distribution; the series is
    truncated once a term falls below 1e-12 and the result clamped to
    [0, 1].  Near zero the series does not converge numerically and the
    limit value 1 is returned.
    """
    if lam < 1e-3:
        return 1.0
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        if term < _SERIES_TERM_TOL:
            break
        total += term if k % 2 else -term
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_two_sample(a, b) -> KsResult:
    """Two-sample KS test with an exact statistic and asymptotic p-value.

    ``D`` is the supremum distance between the two empirical distribution
    functions, computed exactly by an integer merge scan with tie
    handling.  The p-value uses the asymptotic Kolmogorov distribution
    with the effective-size correction
    ``lam = D * (sqrt(ne) + 0.12 + 0.11 / sqrt(ne))``,
    ``ne = |a| |b| / (|a| + |b|)``.
    """
    xs = np.sort(np.asarray(a, dtype=np.float64))
    ys = np.sort(np.asarray(b, dtype=np.float64))
    na, nb = len(xs), len(ys)
    if na == 0 or nb == 0:
        raise ValidationError("ks_two_sample requires two nonempty samples")

    # Walk the merged distinct values; after consuming each value from
    # both samples, |i*nb - j*na| is the (scaled) EDF gap just past it.
    i = j = 0
    best = 0
    while i < na or j < nb:
        if j >= nb or (i < na and xs[i] < ys[j]):
            x = xs[i]
        else:
            x = ys[j]
        while i < na and xs[i] == x:
            i += 1
        while j < nb and ys[j] == x:
            j += 1
        best = max(best, abs(i * nb - j * na))

    d = best / (na * nb)
    ne = na * nb / (na + nb)
    lam = d * (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne))
    return KsResult(d=float(d), p_value=kolmogorov_survival(lam))
