"""Two-qubit Pauli strings with exact phase tracking.

A :class:`PhasedPauli` is ``i**phase * (sigma_axis ⊗ tau_axis)``. The first
slot (sigma) acts on the slow index of the 4x4 matrix, so the basis order is
``|uu>, |ud>, |du>, |dd>``. This is the only place the tensor convention is
fixed; everything else goes through :func:`to_matrix`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

__all__ = [
    "Axis",
    "PhasedPauli",
    "PauliParseError",
    "multiply",
    "commutes",
    "to_matrix",
    "parse",
    "format_pauli",
    "bare_strings",
    "nontrivial_strings",
    "rotate",
]


class Axis(enum.Enum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    def __str__(self) -> str:
        return self.name


_SINGLE = {
    Axis.I: np.eye(2, dtype=complex),
    Axis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Axis.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Axis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASE_VALUES = (1, 1j, -1, -1j)
_PHASE_PREFIX = ("", "i", "-", "-i")


def _axis_product(a: Axis, b: Axis) -> tuple[int, Axis]:
    """Single-qubit product a*b as (phase exponent, axis)."""
    if a is Axis.I:
        return 0, b
    if b is Axis.I:
        return 0, a
    if a is b:
        return 0, Axis.I
    c = Axis(6 - a.value - b.value)
    # sigma_j sigma_k = i eps_jkl sigma_l
    cyclic = (b.value - a.value) % 3 == 1
    return (1 if cyclic else 3), c


@dataclass(frozen=True)
class PhasedPauli:
    """``i**phase`` times the Pauli string ``sigma_axis ⊗ tau_axis``."""

    phase: int
    sigma_axis: Axis
    tau_axis: Axis

    def __post_init__(self):
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def bare(cls, sigma_axis: Axis | str, tau_axis: Axis | str) -> PhasedPauli:
        return cls(0, _as_axis(sigma_axis), _as_axis(tau_axis))

    @property
    def axes(self) -> tuple[Axis, Axis]:
        return self.sigma_axis, self.tau_axis

    @property
    def is_identity(self) -> bool:
        return self.sigma_axis is Axis.I and self.tau_axis is Axis.I

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_real(self) -> bool:
        """True when the matrix realization has only real entries."""
        n_y = (self.sigma_axis is Axis.Y) + (self.tau_axis is Axis.Y)
        return (self.phase + n_y) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian strings; raises for imaginary phases."""
        if not self.is_hermitian:
            raise ValueError(f"{self} has an imaginary phase")
        return 1 if self.phase == 0 else -1

    def strip(self) -> PhasedPauli:
        """The same string with phase +1."""
        return PhasedPauli(0, self.sigma_axis, self.tau_axis)

    def with_phase(self, phase: int) -> PhasedPauli:
        return PhasedPauli(phase, self.sigma_axis, self.tau_axis)

    def lex_key(self) -> tuple[int, int]:
        """Ordering I<X<Y<Z, sigma slot first, ignoring phase."""
        return self.sigma_axis.value, self.tau_axis.value

    def __mul__(self, other: PhasedPauli) -> PhasedPauli:
        return multiply(self, other)

    def __neg__(self) -> PhasedPauli:
        return self.with_phase(self.phase + 2)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PhasedPauli({format_pauli(self)!r})"


class PauliParseError(ValueError):
    """Raised for text that is not a two-qubit Pauli string."""


def _as_axis(a: Axis | str) -> Axis:
    if isinstance(a, Axis):
        return a
    try:
        return Axis[a]
    except KeyError:
        raise PauliParseError(f"invalid axis {a!r}") from None


def multiply(a: PhasedPauli, b: PhasedPauli) -> PhasedPauli:
    """Exact product ``a @ b``."""
    ps, s = _axis_product(a.sigma_axis, b.sigma_axis)
    pt, t = _axis_product(a.tau_axis, b.tau_axis)
    return PhasedPauli(a.phase + b.phase + ps + pt, s, t)


def _anticommutes_1q(a: Axis, b: Axis) -> bool:
    return a is not Axis.I and b is not Axis.I and a is not b


def commutes(a: PhasedPauli, b: PhasedPauli) -> bool:
    flips = _anticommutes_1q(a.sigma_axis, b.sigma_axis) + _anticommutes_1q(a.tau_axis, b.tau_axis)
    return flips % 2 == 0


def to_matrix(a: PhasedPauli) -> np.ndarray:
    """4x4 complex matrix, sigma factor on the slow index."""
    return _PHASE_VALUES[a.phase] * _bare_matrix(a.sigma_axis, a.tau_axis)


@lru_cache(maxsize=None)
def _bare_matrix(s: Axis, t: Axis) -> np.ndarray:
    m = np.kron(_SINGLE[s], _SINGLE[t])
    m.setflags(write=False)
    return m


def format_pauli(a: PhasedPauli) -> str:
    return _PHASE_PREFIX[a.phase] + a.sigma_axis.name + a.tau_axis.name


def parse(text: str) -> PhasedPauli:
    """Parse ``[+|-][i]AB`` with A, B in IXYZ (A acts on the first qubit).

    >>> parse("-YY")
    PhasedPauli('-YY')
    """
    if not isinstance(text, str):
        raise PauliParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    phase = 0
    pos = 0
    if s[pos:pos + 1] in ("+", "-"):
        if s[pos] == "-":
            phase = 2
        pos += 1
    if s[pos:pos + 1] == "i":
        phase += 1
        pos += 1
    body = s[pos:]
    for k, ch in enumerate(body):
        if ch not in "IXYZ":
            raise PauliParseError(
                f"invalid character {ch!r} at position {pos + k} in {text!r}")
    if len(body) != 2:
        raise PauliParseError(f"expected two axis letters in {text!r}, got {len(body)}")
    return PhasedPauli(phase, Axis[body[0]], Axis[body[1]])


def bare_strings() -> Iterator[PhasedPauli]:
    """All 16 bare strings in lexicographic order, II first."""
    for s in Axis:
        for t in Axis:
            yield PhasedPauli(0, s, t)


def nontrivial_strings() -> list[PhasedPauli]:
    return [p for p in bare_strings() if not p.is_identity]


def _rotate_axis(axis: Axis, rot: np.ndarray) -> tuple[int, Axis]:
    if axis is Axis.I:
        return 1, Axis.I
    col = rot[:, axis.value - 1]
    (nz,) = np.flatnonzero(col)
    return int(col[nz]), Axis(nz + 1)


def rotate(a: PhasedPauli, sigma_rot: np.ndarray, tau_rot: np.ndarray) -> PhasedPauli:
    """Image of ``a`` under local rotations given as signed 3x3 permutation matrices.

    Column k of ``sigma_rot`` is the image of axis k+1 (X, Y, Z) on the first
    qubit. Proper rotations (det +1) correspond to conjugation by a local
    unitary; improper ones are rejected.
    """
    for r in (sigma_rot, tau_rot):
        r = np.asarray(r)
        if r.shape != (3, 3) or round(np.linalg.det(r)) != 1 or np.count_nonzero(r) != 3:
            raise ValueError("rotation must be a signed permutation matrix with det +1")
    ss, s = _rotate_axis(a.sigma_axis, np.asarray(sigma_rot))
    st, t = _rotate_axis(a.tau_axis, np.asarray(tau_rot))
    return PhasedPauli(a.phase + (0 if ss * st == 1 else 2), s, t)
