# # Concurrence three ways
#
# Closed form on g, entrywise on the X-shaped matrix, and the Wootters
# construction as a reference.

# %%
import numpy as np

from xstates.entanglement import compare_methods, triangulate, werner_sweep
from xstates.subalgebra import standard
from xstates.xstate import make_bell, random_x_states

for k in ("phi+", "psi-"):
    print(k, compare_methods(make_bell(k)).concurrences)

# %%
rows = werner_sweep(11)
for r in rows:
    print(f"p={r['p']:.1f}  C={r['C_closed']:.4f}  target={max(0, (3 * r['p'] - 1) / 2):.4f}")

# %%
rng = np.random.default_rng(7)
res = triangulate(random_x_states(standard(), 10_000, rng))
print("worst disagreement", res["max_dev"].max())
print("fraction entangled", (res["C_oracle"] > 0).mean())

# %%
# other two-qubit centers go through a local change of frame first
for center in ("XX", "XY", "YZ"):
    res = triangulate(random_x_states(center, 1000, rng), center)
    print(center, res["max_dev"].max())
