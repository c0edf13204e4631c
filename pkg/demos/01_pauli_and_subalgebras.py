# # Pauli strings and the fifteen subalgebras
#
# Two-qubit Pauli strings multiply with a phase i^k. Pick any nontrivial string
# as a center: the six strings commuting with it, plus the center itself, close
# into a seven-element subalgebra.

# %%
import numpy as np

from xstates.pauli import parse
from xstates.subalgebra import canonicalize, enumerate_centers, export_fano_graph, fano

print(parse("YI") * parse("XI"))     # -iZI
print(parse("IZ") * parse("ZI"))     # ZZ

# %%
# the standard set; pairs multiply back to the center
s = canonicalize("ZZ")
print(" ".join(str(e) for e in s.elements))
for a, b in s.pairs:
    print(f"X{a} * X{b} = {s[a] * s[b]}")

# %%
# every center gives the same oriented Fano structure
for sub in enumerate_centers():
    print(f"{sub.name:>2}  local={sub.is_local!s:5}  " + " ".join(str(m) for m in sub.members))

# %%
print(export_fano_graph(fano(s), s))

# %%
# matrices: sigma on the first (slow) index
m = s.matrices()
print(np.real_if_close(m[0]))
