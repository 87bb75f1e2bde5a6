from __future__ import annotations

import random
from collections import Counter

import numpy as np
import pytest
from scipy import stats as scipy_stats
from sklearn.metrics import cohen_kappa_score

from edu_prompting.reliability import (
    DegenerateVariance,
    LengthMismatch,
    StatsError,
    anova_f,
    cohen_kappa,
    cronbach_alpha,
)


# Pure-Python oracles, written from the definitions with explicit loops so
# they share no code path with the implementations under test.

def kappa_oracle(a, b) -> float:
    n = len(a)
    observed = sum(1 for x, y in zip(a, b) if x == y) / n
    counts_a, counts_b = Counter(a), Counter(b)
    expected = 0.0
    for category in set(a) | set(b):
        expected += (counts_a[category] / n) * (counts_b[category] / n)
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def variance_oracle(values) -> float:
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values) / (len(values) - 1)


def alpha_oracle(matrix) -> float:
    k = len(matrix[0])
    item_var_sum = sum(variance_oracle([row[j] for row in matrix]) for j in range(k))
    totals = [sum(row) for row in matrix]
    return (k / (k - 1)) * (1 - item_var_sum / variance_oracle(totals))


def anova_oracle(groups) -> float:
    all_values = [v for group in groups for v in group]
    grand = sum(all_values) / len(all_values)
    ss_between = sum(len(g) * ((sum(g) / len(g)) - grand) ** 2 for g in groups)
    ss_within = sum(sum((v - sum(g) / len(g)) ** 2 for v in g) for g in groups)
    df_between = len(groups) - 1
    df_within = len(all_values) - len(groups)
    return (ss_between / df_between) / (ss_within / df_within)


def test_kappa_identical_vectors() -> None:
    assert cohen_kappa([1, 2, 3, 1], [1, 2, 3, 1]) == pytest.approx(1.0, abs=1e-12)


def test_kappa_documented_cross_case() -> None:
    # p_o = 0.5 and p_e = 0.5, so kappa is exactly zero.
    assert cohen_kappa([1, 1, 0, 0], [1, 0, 0, 1]) == pytest.approx(0.0, abs=1e-12)


def test_kappa_length_mismatch() -> None:
    with pytest.raises(LengthMismatch):
        cohen_kappa([1], [1, 2])


def test_kappa_needs_at_least_one_item() -> None:
    with pytest.raises(StatsError):
        cohen_kappa([], [])


def test_kappa_symmetric_in_rater_order() -> None:
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(2, 30)
        a = [rng.randint(0, 3) for _ in range(n)]
        b = [rng.randint(0, 3) for _ in range(n)]
        assert cohen_kappa(a, b) == pytest.approx(cohen_kappa(b, a), abs=1e-12)


def test_kappa_invariant_under_category_relabeling() -> None:
    rng = random.Random(2)
    relabel = {0: "w", 1: "x", 2: "y", 3: "z"}
    for _ in range(50):
        n = rng.randint(2, 30)
        a = [rng.randint(0, 3) for _ in range(n)]
        b = [rng.randint(0, 3) for _ in range(n)]
        assert cohen_kappa(a, b) == pytest.approx(
            cohen_kappa([relabel[v] for v in a], [relabel[v] for v in b]), abs=1e-12
        )


def test_kappa_against_oracle_and_sklearn() -> None:
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 40)
        a = [rng.randint(0, 2) for _ in range(n)]
        b = [rng.randint(0, 2) for _ in range(n)]
        ours = cohen_kappa(a, b)
        assert ours == pytest.approx(kappa_oracle(a, b), abs=1e-9)
        if len(set(a)) > 1 or len(set(b)) > 1:  # sklearn nans out on constant votes
            assert ours == pytest.approx(cohen_kappa_score(a, b), abs=1e-9)


def test_alpha_duplicated_columns_is_one() -> None:
    matrix = [[1.0, 1.0], [2.0, 2.0], [4.0, 4.0]]
    assert cronbach_alpha(matrix) == pytest.approx(1.0, abs=1e-12)


def test_alpha_zero_total_variance_is_degenerate() -> None:
    with pytest.raises(DegenerateVariance):
        cronbach_alpha([[1.0, 1.0], [1.0, 1.0]])


def test_alpha_shape_requirements() -> None:
    with pytest.raises(StatsError):
        cronbach_alpha([[1.0], [2.0]])
    with pytest.raises(StatsError):
        cronbach_alpha([[1.0, 2.0]])


def test_alpha_against_loop_oracle() -> None:
    rng = random.Random(4)
    for _ in range(200):
        subjects = rng.randint(2, 12)
        items = rng.randint(2, 8)
        matrix = [[rng.uniform(0, 10) for _ in range(items)] for _ in range(subjects)]
        assert cronbach_alpha(matrix) == pytest.approx(alpha_oracle(matrix), abs=1e-9, rel=1e-9)


def test_anova_equal_group_means_gives_zero_f() -> None:
    f, df_between, df_within = anova_f([[1.0, 3.0], [0.0, 4.0], [2.0, 2.0]])
    assert f == pytest.approx(0.0, abs=1e-12)
    assert (df_between, df_within) == (2, 3)


def test_anova_zero_within_variance_is_degenerate() -> None:
    with pytest.raises(DegenerateVariance):
        anova_f([[0.0, 0.0], [1.0, 1.0]])


def test_anova_shape_requirements() -> None:
    with pytest.raises(StatsError):
        anova_f([[1.0, 2.0]])
    with pytest.raises(StatsError):
        anova_f([[1.0, 2.0], [1.0]])


def test_anova_against_oracle_and_scipy() -> None:
    rng = random.Random(5)
    for _ in range(200):
        groups = [
            [rng.uniform(0, 10) for _ in range(rng.randint(2, 20))]
            for _ in range(rng.randint(2, 5))
        ]
        f, _, _ = anova_f(groups)
        assert f == pytest.approx(anova_oracle(groups), abs=1e-9, rel=1e-9)
        assert f == pytest.approx(scipy_stats.f_oneway(*groups).statistic, abs=1e-9, rel=1e-9)


def test_anova_invariant_under_shift_and_scale() -> None:
    rng = random.Random(6)
    groups = [[rng.uniform(0, 10) for _ in range(8)] for _ in range(3)]
    f, _, _ = anova_f(groups)
    shifted, _, _ = anova_f([[v + 17.5 for v in g] for g in groups])
    scaled, _, _ = anova_f([[v * -3.25 for v in g] for g in groups])
    assert shifted == pytest.approx(f, rel=1e-9, abs=1e-9)
    assert scaled == pytest.approx(f, rel=1e-9, abs=1e-9)


def test_alpha_accepts_numpy_input() -> None:
    matrix = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 9.0], [1.0, 3.0, 2.0]])
    assert cronbach_alpha(matrix) == pytest.approx(alpha_oracle(matrix.tolist()), abs=1e-12)
