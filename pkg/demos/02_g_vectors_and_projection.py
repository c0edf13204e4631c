# # g-vectors, projection and sign rules
#
# An X-state of a subalgebra is rho = (I + sum g_i X_i) / 4 with g_i = Tr(rho X_i).

# %%
import numpy as np

from xstates.xstate import (
    conjugation_signs,
    g_from_rho,
    is_x_pattern,
    make_werner,
    project_to_x,
    random_density_matrices,
    rho_from_g,
    spin_flip,
    spin_flip_signs,
    validate,
)

rho = make_werner(0.6)
g = g_from_rho(rho)
print(g.values)
print(np.abs(rho_from_g(g) - rho).max())

# %%
# a general state is not X-shaped; averaging with its conjugate by the center fixes that
rng = np.random.default_rng(1)
general = random_density_matrices(1, rng)[0]
print(is_x_pattern(general), is_x_pattern(project_to_x(general)))
print(validate(project_to_x(general)).ok)

# %%
# conjugation by X_i keeps {1, i, pair(i)} and negates the rest
for i in range(1, 8):
    print(i, conjugation_signs("ZZ", i))

# %%
print("spin flip", spin_flip_signs("ZZ"))
print(np.round(g_from_rho(spin_flip(rho)).values, 12))

# %%
# a center acting on one qubit gives a block-diagonal state
print(np.round(project_to_x(general, "ZI").real, 3))
