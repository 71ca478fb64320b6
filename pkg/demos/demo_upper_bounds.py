"""
Blahut-Arimoto upper bounds C_n
===============================

Maximising the block mutual information over all input laws on {0,1}^n
gives C_n, and every C_n bounds the capacity from above.  The sequence is
compared with the small-alpha expansion.
"""

# %%
from syncap import InputLaw, capacity_expansion, mutual_information, upper_bound_sequence

# %%
for alpha in (0.001, 0.01, 0.05):
    seq = upper_bound_sequence(alpha, 8)
    print(f"alpha = {alpha}   expansion {capacity_expansion(alpha).value:.6f}")
    for n, tr in seq:
        iid = mutual_information(InputLaw.iid(n), alpha).rate
        print(f"  n={n}  C_n in [{tr.capacity:.6f}, {tr.upper:.6f}]  "
              f"iid rate {iid:.6f}  iterations {tr.iterations}")

# %%
# The optimising law at n = 6 is close to uniform but not equal to it
import numpy as np

tr = dict(upper_bound_sequence(0.05, 6))[6]
law = np.asarray(tr.law)
print("max / min input probability:", law.max() / law.min())
print("most likely words:", [format(i, "06b") for i in np.argsort(law)[-4:]])
