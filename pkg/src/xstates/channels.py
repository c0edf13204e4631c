"""Unitary and Kraus evolution generated inside a subalgebra.

A :class:`KrausChannel` stores each Kraus operator as eight complex
coefficients over ``(I, X1, ..., X7)`` of a labeled subalgebra. Since that
span is closed under products and adjoints and every element commutes with
X1, such channels map X-states of the subalgebra to X-states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg4 as la
from .entanglement import concurrence_oracle
from .pauli import multiply, to_matrix
from .subalgebra import Subalgebra, get
from .xstate import GVector, g_from_rho

__all__ = [
    "COMPLETENESS_TOL",
    "IncompleteChannelError",
    "ChannelFormatError",
    "KrausChannel",
    "member_unitary",
    "unitary_channel",
    "identity_channel",
    "dephasing_channel",
    "random_channel",
    "apply_channel",
    "RotationAction",
    "rotation_action",
    "TraceStep",
    "evolve_trace",
    "channel_to_dict",
    "channel_from_dict",
    "dumps_channel",
    "loads_channel",
]

COMPLETENESS_TOL = 1e-10
SPAN_TOL = 1e-12


class IncompleteChannelError(ValueError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"Kraus operators are not complete: max |sum K^H K - I| = {self.residual:.3e}")


class ChannelFormatError(ValueError):
    pass


def _basis(s: Subalgebra) -> np.ndarray:
    """(8, 4, 4) stack: identity then X1..X7."""
    return np.concatenate([np.eye(4, dtype=complex)[None], s.matrices()])


@dataclass(frozen=True, eq=False)
class KrausChannel:
    subalgebra: Subalgebra
    coefficients: np.ndarray  # (k, 8) complex

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coefficients, dtype=complex))
        if c.ndim != 2 or c.shape[1] != 8 or c.shape[0] == 0:
            raise ValueError(f"coefficients must have shape (k, 8), got {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def center(self) -> str:
        return self.subalgebra.name

    def matrices(self) -> np.ndarray:
        return np.einsum("kn,nab->kab", self.coefficients, _basis(self.subalgebra))

    def completeness_residual(self) -> float:
        k = self.matrices()
        total = np.einsum("kba,kbc->ac", k.conj(), k)
        return float(np.abs(total - np.eye(4)).max())

    @classmethod
    def from_matrices(cls, s: Subalgebra | str, kraus) -> KrausChannel:
        """Expand matrices over ``(I, X1..X7)``; reject anything outside that span."""
        s = get(s)
        kraus = la.as_matrix4(kraus)
        if kraus.ndim == 2:
            kraus = kraus[None]
        basis = _basis(s)
        coef = np.einsum("nab,kba->kn", basis, kraus) / 4
        resid = float(np.abs(np.einsum("kn,nab->kab", coef, basis) - kraus).max())
        if resid > SPAN_TOL:
            raise ValueError(f"Kraus operator leaves the span of the {s.name} subalgebra "
                             f"(residual {resid:.3e})")
        return cls(s, coef)


def member_unitary(s: Subalgebra | str, i: int, theta: float) -> np.ndarray:
    """``exp(-i theta X_i) = cos(theta) I - i sin(theta) X_i``."""
    x = to_matrix(get(s)[i])
    return np.cos(theta) * np.eye(4) - 1j * np.sin(theta) * x


def unitary_channel(s: Subalgebra | str, i: int, theta: float) -> KrausChannel:
    s = get(s)
    s[i]  # index check
    c = np.zeros((1, 8), dtype=complex)
    c[0, 0] = np.cos(theta)
    c[0, i] = -1j * np.sin(theta)
    return KrausChannel(s, c)


def identity_channel(s: Subalgebra | str = "ZZ") -> KrausChannel:
    c = np.zeros((1, 8), dtype=complex)
    c[0, 0] = 1.0
    return KrausChannel(get(s), c)


def dephasing_channel(s: Subalgebra | str, p: float, i: int = 1) -> KrausChannel:
    """Apply X_i with probability ``p``; with the default ``i = 1`` X-states are fixed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    s = get(s)
    s[i]  # index check
    c = np.zeros((2, 8), dtype=complex)
    c[0, 0] = np.sqrt(1.0 - p)
    c[1, i] = np.sqrt(p)
    return KrausChannel(s, c)


def random_channel(s: Subalgebra | str, seed: int, n_kraus: int = 2) -> KrausChannel:
    """Normal coefficients, then ``K -> K S^{-1/2}`` with ``S = sum K^H K``.

    ``S^{-1/2}`` stays in the subalgebra span, so the result is still a
    subalgebra channel.
    """
    s = get(s)
    rng = np.random.default_rng(seed)
    coef = rng.normal(size=(n_kraus, 8)) + 1j * rng.normal(size=(n_kraus, 8))
    k = KrausChannel(s, coef).matrices()
    total = np.einsum("kba,kbc->ac", k.conj(), k)
    k = k @ la.psd_inv_sqrt(total)
    return KrausChannel.from_matrices(s, k)


def apply_channel(rho, ch: KrausChannel) -> np.ndarray:
    """``sum_k K rho K^H``; raises if the Kraus set is incomplete."""
    resid = ch.completeness_residual()
    if resid > COMPLETENESS_TOL:
        raise IncompleteChannelError(resid)
    rho = la.as_matrix4(rho)
    k = ch.matrices()
    return np.einsum("kab,...bc,kdc->...ad", k, rho, k.conj())


@dataclass(frozen=True)
class RotationAction:
    """Effect of ``rho -> U rho U^H`` with ``U = exp(-i theta X_i)`` on g.

    Coefficients in ``fixed`` are unchanged. Each plane ``(a, b)`` rotates by
    ``angle = 2 theta``: ``g_a' = cos g_a - sin g_b``, ``g_b' = sin g_a + cos g_b``.
    """

    member: int
    fixed: tuple[int, ...]
    planes: tuple[tuple[int, int], ...]
    angle: float

    def matrix(self) -> np.ndarray:
        """7x7 linear map acting on g (1-based indices shifted to 0-based)."""
        m = np.eye(7)
        c, s = np.cos(self.angle), np.sin(self.angle)
        for a, b in self.planes:
            m[a - 1, a - 1] = c
            m[a - 1, b - 1] = -s
            m[b - 1, a - 1] = s
            m[b - 1, b - 1] = c
        return m

    def apply(self, g):
        if isinstance(g, GVector):
            return GVector(g.values @ self.matrix().T, g.subalgebra)
        return np.asarray(g, dtype=float) @ self.matrix().T


def rotation_action(s: Subalgebra | str, i: int, theta: float) -> RotationAction:
    """Fixed indices and oriented rotation planes for conjugation by ``exp(-i theta X_i)``.

    For A anticommuting with X_i, ``U A U^H = cos(2 theta) A - i sin(2 theta) X_i A``.
    The plane is ordered ``(a, b)`` with ``X_i X_a = +i X_b``.
    """
    s = get(s)
    xi = s[i]
    # the center commutes with every member; others fix only their commuting line
    fixed = list(range(1, 8)) if i == 1 else sorted({1, i, s.pair(i)})
    planes = []
    seen = set(fixed)
    for a in range(2, 8):
        if a in seen:
            continue
        prod = multiply(xi, s[a])
        b = s.index(prod)
        coef = (prod.phase - s[b].phase) % 4
        if coef == 1:
            planes.append((a, b))
        elif coef == 3:
            planes.append((b, a))
        else:
            raise AssertionError(f"X{i} X{a} has a real phase")
        seen.update((a, b))
    return RotationAction(i, tuple(fixed), tuple(planes), 2.0 * theta)


@dataclass
class TraceStep:
    step: int
    g: np.ndarray
    concurrence: float
    rho: np.ndarray


def evolve_trace(rho0, ch: KrausChannel, steps: int) -> list[TraceStep]:
    """Iterate ``ch`` ``steps`` times; rows for step 0 (input) through ``steps``."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rho = la.as_matrix4(rho0)
    out = []
    for k in range(steps + 1):
        if k:
            rho = apply_channel(rho, ch)
        g = g_from_rho(rho, ch.subalgebra).values
        c, _ = concurrence_oracle(rho)
        out.append(TraceStep(k, g, float(c), rho))
    return out


# JSON channel format ---------------------------------------------------------

def channel_to_dict(ch: KrausChannel) -> dict:
    return {
        "center": ch.center,
        "kraus": [[[float(z.real), float(z.imag)] for z in row] for row in ch.coefficients],
    }


def channel_from_dict(obj) -> KrausChannel:
    if not isinstance(obj, dict) or "kraus" not in obj:
        raise ChannelFormatError("channel JSON needs a 'kraus' list")
    s = get(obj.get("center", "ZZ"))
    try:
        arr = np.asarray(obj["kraus"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ChannelFormatError(f"malformed 'kraus': {exc}") from None
    if arr.ndim != 3 or arr.shape[1:] != (8, 2) or arr.shape[0] == 0:
        raise ChannelFormatError(f"'kraus' must be a list of 8 [re, im] pairs per operator, got {arr.shape}")
    return KrausChannel(s, arr[..., 0] + 1j * arr[..., 1])


def dumps_channel(ch: KrausChannel) -> str:
    return json.dumps(channel_to_dict(ch))


def loads_channel(text: str) -> KrausChannel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelFormatError(f"invalid JSON: {exc}") from None
    return channel_from_dict(obj)
