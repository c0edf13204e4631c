# # Channels built from the subalgebra
#
# Kraus operators in the span of {I, X1..X7} map X-states to X-states.

# %%
import numpy as np

from xstates.channels import (
    apply_channel,
    dephasing_channel,
    evolve_trace,
    random_channel,
    rotation_action,
)
from xstates.xstate import is_x_pattern, make_bell, random_x_states

rng = np.random.default_rng(3)
rho = random_x_states("ZZ", 100, rng)
ch = random_channel("ZZ", seed=11, n_kraus=3)
print(ch.completeness_residual(), is_x_pattern(apply_channel(rho, ch)).all())

# %%
# exp(-i theta X6): coefficients 1, 3, 6 stay, the rest turn by 2 theta
act = rotation_action("ZZ", 6, 0.25)
print(act.fixed, act.planes, act.angle)

# %%
# repeated dephasing by X6 decays the coherences and the concurrence together
for t in evolve_trace(make_bell("phi+"), dephasing_channel("ZZ", 0.1, i=6), 8):
    print(t.step, np.round(t.g, 4), round(t.concurrence, 4))
