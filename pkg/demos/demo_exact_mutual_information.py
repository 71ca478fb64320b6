"""
Exact mutual information at short blocklengths
==============================================

For n <= 8 every input word and every insertion pattern can be enumerated.
The mutual information then splits into output entropy, pattern entropy and
two ambiguity terms, and both bookkeeping identities close to rounding error.
"""

# %%
import itertools

from syncap import InputLaw, channel_law, mutual_information, output_distribution

# %%
# A single input bit is always recovered: the first output bit is the input.
for alpha in (0.01, 0.1, 0.5):
    print(alpha, mutual_information(InputLaw.iid(1), alpha).mutual_information)

# %%
# The full output law of a short word
x = [0, 1, 1]
dist = output_distribution(x, 0.2)
for y, p in sorted(dist.items(), key=lambda t: -t[1])[:8]:
    print("".join(map(str, y)), f"{p:.5f}")
print("sum", dist.total, " H(Y|X=x)", dist.entropy())

# the dynamic program agrees entry by entry
assert all(abs(channel_law(x, y, 0.2) - p) < 1e-14 for y, p in dist.items())

# %%
# The entropy terms for uniform inputs, alpha = 0.05
alpha = 0.05
print(f"{'n':>2s} {'I/n':>9s} {'H(Y)':>9s} {'H(A,B)':>9s} {'H(AB|XYK)':>10s} "
      f"{'H(K|XY)':>9s} {'residual':>9s}")
for n in range(1, 9):
    r = mutual_information(InputLaw.iid(n), alpha)
    print(f"{n:2d} {r.rate:9.6f} {r.h_y:9.5f} {r.h_ab:9.5f} {r.h_ab_given_xyk:10.6f} "
          f"{r.h_k_given_xy:9.6f} {r.residual_decomposition:9.1e}")

# %%
# Markov inputs that favour longer runs lose rate at this alpha
for p in (0.5, 0.4, 0.3):
    r = mutual_information(InputLaw.markov(8, p, p), alpha)
    print(f"switch prob {p}: I/n = {r.rate:.6f}")
