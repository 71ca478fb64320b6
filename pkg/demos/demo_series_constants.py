"""
Series constants and their truncation tails
===========================================

The first-order coefficient G1 of the small-alpha capacity expansion is a
combination of two rapidly converging series.  This script sums them at a
few truncation levels and shows that every step stays inside its tail bound.
"""

# %%
# The three constants at the default truncation
from syncap import a1, e_log_l0, g1

for f in (g1, a1, e_log_l0):
    s = f(1000)
    print(f"{f.__name__:10s} {s.value:.12f}  tail <= {s.tail_bound:.1e}")

# %%
# Convergence in L.  The refinement g1(4L) - g1(L) never exceeds the tail
# bound published with g1(L).
print(f"{'L':>4s} {'g1(L)':>16s} {'|g1(4L)-g1(L)|':>16s} {'tail bound':>12s}")
for L in (2, 5, 10, 20, 40):
    step = abs(g1(4 * L).value - g1(L).value)
    print(f"{L:4d} {g1(L).value:16.12f} {step:16.3e} {g1(L).tail_bound:12.3e}")

# %%
# The boundary double series and the length-biased log-run series have the
# same limit: (b+1) h(1/(b+1)) = (b+1) log(b+1) - b log b, and summing by
# parts against 2^-b recovers sum_l l 2^{-l-1} log l.
for L in (3, 10, 60):
    print(L, a1(L).value, e_log_l0(L).value)

# %%
# The expansion itself, next to the alpha^2 error budget
from syncap import capacity_expansion, epsilon2_bound

for alpha in (1e-4, 1e-3, 1e-2, 5e-2):
    p = capacity_expansion(alpha)
    print(f"alpha={alpha:<7g} 1 + a log a + G1 a = {p.value:.6f}   "
          f"eps2 = {epsilon2_bound(alpha).value:.3e}")
