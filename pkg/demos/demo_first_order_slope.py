"""
First-order slope of H(Y|X) from exact enumeration
==================================================

Block differences H_{n+1} - H_n of the exact conditional output entropy
remove edge effects, and dividing out h(alpha) leaves the per-symbol
first-order slope.  It is compared with the slope implied by the series
constants used in capacity_expansion.
"""

# %%
from syncap import InputLaw, a1, binary_entropy, e_log_l0, mutual_information

alpha = 1e-4
H = [mutual_information(InputLaw.iid(n), alpha).h_y_given_x for n in range(1, 9)]
slopes = [(H[i + 1] - H[i] - binary_entropy(alpha)) / alpha for i in range(len(H) - 1)]
for n, s in enumerate(slopes, start=1):
    print(f"H_{n + 1} - H_{n}:  slope {s:+.4f}")

# %%
# Candidates: 1 - A1 (one boundary term per run) and the slope built into
# hyx_asymptote, 1 - E[log L0]/2 - A1.
A1, ELOG = a1().value, e_log_l0().value
print(f"1 - A1              {1 - A1:+.4f}")
print(f"1 - E[log L0]/2 - A1 {1 - ELOG / 2 - A1:+.4f}")

# %%
# Each extra symbol adds less than the previous one; the increments shrink
# geometrically, so a simple Aitken step estimates the limit.
s0, s1, s2 = slopes[-3:]
print(f"Aitken extrapolation {s2 - (s2 - s1) ** 2 / ((s2 - s1) - (s1 - s0)):+.4f}")
