"""
Monte Carlo checks at long blocklength
======================================

Seeded simulations of the per-symbol quantities that enter the expansion.
Each estimate is a mean over independent trials with its standard error.
"""

# %%
from syncap import McConfig, binary_entropy
from syncap.montecarlo import (estimate_ab_entropy_rate, estimate_boundary_ambiguity,
                               estimate_length_biased_log_run, estimate_output_length,
                               estimate_zv_stats)

cfg = McConfig(alpha=0.1, n=10**6, trials=10, seed=1)

# %%
# Pattern entropy and output length
e = estimate_ab_entropy_rate(cfg)
print("H(A,B) per symbol", e.mean, "+/-", e.std_error, " exact", binary_entropy(0.1) + 0.1)
e = estimate_output_length(cfg)
print("(|Y| - n) / n   ", e.mean, "+/-", e.std_error)

# %%
# Insertions reversed by the one-per-run modification scale like alpha^2
for alpha in (0.005, 0.01, 0.02):
    z10, z11 = estimate_zv_stats(McConfig(alpha, 10**6, 10, seed=2))
    print(f"alpha={alpha}: {(z10.mean + z11.mean) / alpha**2:.3f} alpha^2")

# %%
# Length-biased log run length of an iid word
print(estimate_length_biased_log_run(McConfig(0.0, 10**6, 5, seed=3)))

# %%
# Segment-length ambiguity.  Normalised per eligible run pair it approaches
# the boundary constant 1.2885; per input symbol it is half of that, since
# interior run pairs occur at half the rate of symbols.
amb = McConfig(0.003, 2 * 10**6, 10, seed=4)
print("per pair  ", estimate_boundary_ambiguity(amb, per="pair"))
print("per symbol", estimate_boundary_ambiguity(amb, per="symbol"))
