"""Reliability statistics on a made-up three-configuration preference study.

Two raters label which system wrote each response, several raters score the
same responses on a 1-5 scale, and three groups of quality scores get a
one-way ANOVA. These are the agreement, consistency, and between-group
statistics a study report needs.
"""
import random

from edu_prompting.reliability import anova_f, cohen_kappa, cronbach_alpha

rng = random.Random(11)

# Two raters assign each of 40 responses to one of three categories; the
# second rater mostly agrees but drifts on a fifth of the items.
rater_a = [rng.randint(0, 2) for _ in range(40)]
rater_b = [vote if rng.random() > 0.2 else rng.randint(0, 2) for vote in rater_a]
print(f"Cohen's kappa (two raters, 3 categories): {cohen_kappa(rater_a, rater_b):.3f}")

# Six raters score the same 12 responses on 1-5; scores share a common
# signal per response plus rater noise, so consistency should be high.
signal = [rng.uniform(1, 5) for _ in range(12)]
matrix = [
    [min(5.0, max(1.0, s + rng.gauss(0, 0.5))) for _ in range(6)]
    for s in signal
]
print(f"Cronbach's alpha (12 responses x 6 raters): {cronbach_alpha(matrix):.3f}")

# Three system configurations, 15 quality scores each, with different means.
groups = [
    [rng.gauss(3.9, 0.5) for _ in range(15)],
    [rng.gauss(3.1, 0.5) for _ in range(15)],
    [rng.gauss(3.4, 0.5) for _ in range(15)],
]
f_stat, df_between, df_within = anova_f(groups)
print(f"one-way ANOVA: F({df_between}, {df_within}) = {f_stat:.2f}")
