"""Agreement and consistency statistics: Cohen's kappa, Cronbach's alpha,
and one-way ANOVA.

Implemented directly from the textbook formulas (sample variance uses the
n-1 denominator throughout) so the test suite can check them against
independent oracles.
"""
from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np


class StatsError(Exception):
    pass


class LengthMismatch(StatsError):
    pass


class DegenerateVariance(StatsError):
    pass


def cohen_kappa(rater_a: Sequence[object], rater_b: Sequence[object]) -> float:
    """Two-rater agreement beyond chance: kappa = (p_o - p_e) / (1 - p_e),
    with p_e from the raters' marginal category frequencies.

    Perfect, fully-degenerate agreement (p_e = 1, p_o = 1) returns 1.0.
    """
    if len(rater_a) != len(rater_b):
        raise LengthMismatch(f"{len(rater_a)} votes vs {len(rater_b)} votes")
    if not rater_a:
        raise StatsError("need at least one item")
    n = len(rater_a)
    observed = sum(1 for a, b in zip(rater_a, rater_b) if a == b) / n
    counts_a = Counter(rater_a)
    counts_b = Counter(rater_b)
    expected = sum(counts_a[cat] * counts_b.get(cat, 0) for cat in counts_a) / (n * n)
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def cronbach_alpha(matrix: Sequence[Sequence[float]]) -> float:
    """Internal consistency over a subjects x items score matrix:
    alpha = k/(k-1) * (1 - sum of item variances / variance of subject totals).
    """
    scores = np.asarray(matrix, dtype=float)
    if scores.ndim != 2:
        raise StatsError("expected a 2-D subjects x items matrix")
    n_subjects, n_items = scores.shape
    if n_items < 2:
        raise StatsError("need at least 2 items")
    if n_subjects < 2:
        raise StatsError("need at least 2 subjects")
    item_variances = scores.var(axis=0, ddof=1)
    total_variance = scores.sum(axis=1).var(ddof=1)
    if total_variance == 0.0:
        raise DegenerateVariance("subject totals have zero variance")
    return (n_items / (n_items - 1)) * (1.0 - item_variances.sum() / total_variance)


def anova_f(groups: Sequence[Sequence[float]]) -> tuple[float, int, int]:
    """One-way ANOVA: F = MS_between / MS_within with the usual degrees of
    freedom (groups-1, N-groups). Returns (F, df_between, df_within)."""
    if len(groups) < 2:
        raise StatsError("need at least 2 groups")
    arrays = [np.asarray(group, dtype=float) for group in groups]
    for position, group in enumerate(arrays):
        if group.ndim != 1 or group.size < 2:
            raise StatsError(f"group {position} needs at least 2 observations")
    n_total = sum(group.size for group in arrays)
    n_groups = len(arrays)
    grand_mean = np.concatenate(arrays).mean()
    ss_between = sum(group.size * (group.mean() - grand_mean) ** 2 for group in arrays)
    ss_within = sum(((group - group.mean()) ** 2).sum() for group in arrays)
    df_between = n_groups - 1
    df_within = n_total - n_groups
    ms_within = ss_within / df_within
    if ms_within == 0.0:
        raise DegenerateVariance("zero within-group variance")
    return float((ss_between / df_between) / ms_within), df_between, df_within
