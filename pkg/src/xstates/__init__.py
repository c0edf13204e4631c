"""Algebraic toolkit for two-qubit X-states.

Submodules: :mod:`pauli` (exact Pauli strings), :mod:`linalg4` (4x4 numerical
kernel), :mod:`subalgebra` (the fifteen su(2) x su(2) x u(1) sets and their
Fano structure), :mod:`xstate` (g-vector coordinates and state operations),
:mod:`entanglement` (concurrence), :mod:`channels` (evolution) and
:mod:`cli`.
"""

from .pauli import Axis, PhasedPauli, commutes, multiply, parse, to_matrix
from .subalgebra import Subalgebra, canonicalize, enumerate_centers, fano, standard
from .xstate import (
    GVector,
    g_from_rho,
    is_x_pattern,
    make_bell,
    make_random_x,
    make_werner,
    project_to_x,
    rho_from_g,
    spin_flip,
    validate,
)
from .entanglement import (
    compare_methods,
    concurrence_closed_form,
    concurrence_entrywise,
    concurrence_oracle,
    spectrum_closed_form,
)
from .channels import KrausChannel, apply_channel, evolve_trace, member_unitary, rotation_action

__version__ = "0.1.0"
