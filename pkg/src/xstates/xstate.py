"""Density matrices invariant under a subalgebra, and their g-vector coordinates.

A state invariant under the subalgebra with center X1 has the form
``rho = (I + sum_i g_i X_i) / 4`` with ``g_i = Tr(rho X_i)``. For the
standard center ZZ this is the familiar X-shaped matrix, nonzero only on the
diagonal and anti-diagonal.

All functions accept a single 4x4 matrix or a stack ``(..., 4, 4)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg4 as la
from .pauli import commutes, parse, to_matrix
from .subalgebra import Subalgebra, get

__all__ = [
    "InvalidStateError",
    "PatternError",
    "StateFormatError",
    "GVector",
    "ValidationReport",
    "ANTI_PATTERN",
    "g_from_rho",
    "rho_from_g",
    "is_x_pattern",
    "project_to_x",
    "conjugate_by_member",
    "conjugation_signs",
    "spin_flip",
    "spin_flip_signs",
    "validate",
    "require_state",
    "make_bell",
    "make_werner",
    "make_random_x",
    "random_x_states",
    "random_density_matrices",
    "center_basis",
    "state_to_dict",
    "state_from_dict",
    "dumps_state",
    "loads_state",
]

IMAG_TOL = 1e-8

# (row, col) positions forced to zero in a standard X-state, 0-based
ANTI_PATTERN = ((0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2))

_SIGMA_Y_TAU_Y = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

_BELL = {
    "phi+": np.array([1, 0, 0, 1]) / np.sqrt(2),
    "phi-": np.array([1, 0, 0, -1]) / np.sqrt(2),
    "psi+": np.array([0, 1, 1, 0]) / np.sqrt(2),
    "psi-": np.array([0, 1, -1, 0]) / np.sqrt(2),
}
_BELL_ALIASES = {"Φ+": "phi+", "Φ-": "phi-", "Ψ+": "psi+", "Ψ-": "psi-",
                 "Φ⁺": "phi+", "Φ⁻": "phi-", "Ψ⁺": "psi+", "Ψ⁻": "psi-"}


class InvalidStateError(ValueError):
    """A matrix or g-vector that is not a valid two-qubit state."""


class PatternError(ValueError):
    """A state that does not commute with the center a method requires."""


class StateFormatError(ValueError):
    """Malformed state JSON."""


@dataclass(frozen=True, eq=False)
class GVector:
    """Seven real coefficients relative to a labeled subalgebra.

    ``values`` has shape ``(..., 7)``; ``values[..., i-1]`` multiplies X_i.
    """

    values: np.ndarray
    subalgebra: Subalgebra = field(default_factory=get)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape[-1:] != (7,):
            raise ValueError(f"g-vector needs 7 components, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def center(self) -> str:
        return self.subalgebra.name

    def __getitem__(self, i: int) -> np.ndarray:
        """1-based component access, ``g[1]`` is the center coefficient."""
        if not 1 <= i <= 7:
            raise IndexError(f"g index must be in 1..7, got {i}")
        return self.values[..., i - 1]

    def is_state(self) -> bool:
        return validate(rho_from_g(self)).ok

    def to_dict(self) -> dict:
        return {"center": self.center, "values": self.values.tolist()}


def g_from_rho(rho, s: Subalgebra | str = "ZZ") -> GVector:
    """``g_i = Tr(rho X_i)``; the imaginary residue must be below ``1e-8``."""
    s = get(s)
    rho = la.as_matrix4(rho)
    g = np.einsum("kab,...ba->...k", s.matrices(), rho)
    worst = float(np.max(np.abs(g.imag), initial=0.0))
    if worst > IMAG_TOL:
        raise InvalidStateError(f"Tr(rho X_i) has imaginary part {worst:.3e}; rho is not Hermitian")
    return GVector(g.real, s)


def rho_from_g(g, s: Subalgebra | str | None = None) -> np.ndarray:
    """``(I + sum g_i X_i) / 4``. Validation is left to :func:`validate`."""
    if isinstance(g, GVector):
        s = g.subalgebra if s is None else get(s)
        values = g.values
    else:
        s = get("ZZ" if s is None else s)
        values = np.asarray(g, dtype=float)
    rho = np.eye(4) + np.einsum("...k,kab->...ab", values, s.matrices())
    return rho / 4


def _center_conjugate(rho, s: Subalgebra) -> np.ndarray:
    x1 = to_matrix(s.center)
    return x1 @ rho @ x1


def project_to_x(rho, s: Subalgebra | str = "ZZ") -> np.ndarray:
    """``(rho + X1 rho X1^H) / 2``: drop every component outside the subalgebra."""
    s = get(s)
    rho = la.as_matrix4(rho)
    return 0.5 * (rho + _center_conjugate(rho, s))


def is_x_pattern(rho, s: Subalgebra | str = "ZZ", tol: float = la.PATTERN_TOL):
    """True when ``rho`` is within ``tol`` (max entry) of its projection.

    For center ZZ the projection residue is exactly the eight off-pattern
    entries, so this tests them against ``tol`` directly.
    """
    s = get(s)
    rho = la.as_matrix4(rho)
    resid = np.abs(rho - project_to_x(rho, s)).max(axis=(-2, -1))
    return resid <= tol


def conjugation_signs(s: Subalgebra | str, i: int) -> np.ndarray:
    """Signs acquired by g under conjugation by X_i: +1 where X_j commutes with X_i."""
    s = get(s)
    xi = s[i]
    return np.array([1.0 if commutes(xi, e) else -1.0 for e in s.elements])


def conjugate_by_member(rho, s: Subalgebra | str, i: int) -> np.ndarray:
    """``X_i rho X_i^H`` for a 1-based member index."""
    s = get(s)
    xi = to_matrix(s[i])
    return xi @ la.as_matrix4(rho) @ la.adjoint(xi)


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y ⊗ tau_y) rho* (sigma_y ⊗ tau_y)``."""
    rho = la.as_matrix4(rho)
    return _SIGMA_Y_TAU_Y @ np.conj(rho) @ _SIGMA_Y_TAU_Y


def spin_flip_signs(s: Subalgebra | str = "ZZ") -> np.ndarray:
    """Signs acquired by g under :func:`spin_flip`.

    Conjugation by YY negates members that anticommute with it; complex
    conjugation negates members with imaginary matrices. For the standard
    set only g3 and g6 change sign.
    """
    s = get(s)
    yy = parse("YY")
    return np.array([
        (1.0 if commutes(e, yy) else -1.0) * (1.0 if e.is_real else -1.0)
        for e in s.elements
    ])


@dataclass
class ValidationReport:
    hermitian_deviation: float
    trace_error: float
    min_eigenvalue: float
    x_pattern: bool
    # ρ11ρ44 - |ρ14|² and ρ22ρ33 - |ρ23|², only for standard X-pattern input
    blocks: dict[str, float] | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def raise_if_invalid(self) -> None:
        if self.failures:
            raise InvalidStateError("; ".join(self.failures))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "hermitian_deviation": self.hermitian_deviation,
            "trace_error": self.trace_error,
            "min_eigenvalue": self.min_eigenvalue,
            "x_pattern": self.x_pattern,
            "blocks": self.blocks,
            "failures": list(self.failures),
        }


def validate(rho) -> ValidationReport:
    """Check Hermiticity, unit trace and positivity of a single 4x4 matrix."""
    rho = la.as_matrix4(rho)
    if rho.ndim != 2:
        raise ValueError("validate takes a single 4x4 matrix")
    herm = float(la.hermitian_deviation(rho))
    tr_err = float(abs(la.trace(rho) - 1.0))
    hpart = 0.5 * (rho + la.adjoint(rho))
    w, _ = la.hermitian_eigs(hpart)
    lo = float(w[0])
    pattern = bool(is_x_pattern(rho, "ZZ"))
    failures = []
    if herm > la.HERMITIAN_TOL:
        failures.append(f"not Hermitian: max |rho - rho^H| = {herm:.3e}")
    if tr_err > la.TRACE_TOL:
        failures.append(f"trace differs from 1 by {tr_err:.3e}")
    blocks = None
    if pattern:
        r = hpart
        blocks = {
            "1-4": float(r[0, 0].real * r[3, 3].real - abs(r[0, 3]) ** 2),
            "2-3": float(r[1, 1].real * r[2, 2].real - abs(r[1, 2]) ** 2),
        }
    if lo < -la.PSD_CLAMP:
        msg = f"not positive semidefinite: min eigenvalue {lo:.3e}"
        if blocks is not None:
            bad = [k for k, v in blocks.items() if v < -la.PSD_CLAMP]
            if bad:
                msg += "; block " + ", ".join(
                    f"{k} (determinant {blocks[k]:.3e})" for k in bad) + " violated"
        failures.append(msg)
    return ValidationReport(herm, tr_err, lo, pattern, blocks, failures)


def require_state(rho) -> np.ndarray:
    """Return ``rho`` as an array if it passes :func:`validate`, else raise."""
    rho = la.as_matrix4(rho)
    validate(rho).raise_if_invalid()
    return rho


def make_bell(kind: str) -> np.ndarray:
    """Projector onto a Bell state: ``phi+``, ``phi-``, ``psi+`` or ``psi-``."""
    key = _BELL_ALIASES.get(kind, kind.lower())
    if key not in _BELL:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {sorted(_BELL)}")
    psi = _BELL[key].astype(complex)
    return np.outer(psi, psi.conj())


def make_werner(p: float) -> np.ndarray:
    """``p |psi-><psi-| + (1 - p) I / 4``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight must lie in [0, 1], got {p}")
    return p * make_bell("psi-") + (1.0 - p) * np.eye(4) / 4


def center_basis(s: Subalgebra | str = "ZZ") -> np.ndarray:
    """Unitary whose columns are (+, -, -, +) eigenvectors of the center.

    For ZZ this is the identity, so the 1-4 and 2-3 blocks of the standard
    X-shape are the +1 and -1 eigenspaces.
    """
    s = get(s)
    x1 = to_matrix(s.center)
    cols = {}
    for sign in (1, -1):
        proj = (np.eye(4) + sign * x1) / 2
        vecs = []
        for k in range(4):
            v = proj[:, k].copy()
            for u in vecs:
                v = v - np.vdot(u, v) * u
            n = np.linalg.norm(v)
            if n > 1e-9:
                vecs.append(v / n)
            if len(vecs) == 2:
                break
        cols[sign] = vecs
    return np.column_stack([cols[1][0], cols[-1][0], cols[-1][1], cols[1][1]])


def random_x_states(s: Subalgebra | str, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` random states invariant under ``s``, shape ``(n, 4, 4)``.

    Diagonal weights come from a flat Dirichlet draw; each block coherence has
    magnitude uniform in ``[0, sqrt(product of its diagonal)]`` and a uniform
    phase, so every sample is positive semidefinite.
    """
    s = get(s)
    d = rng.dirichlet(np.ones(4), size=n)
    m14 = rng.uniform(size=n) * np.sqrt(d[:, 0] * d[:, 3])
    m23 = rng.uniform(size=n) * np.sqrt(d[:, 1] * d[:, 2])
    ph14 = np.exp(2j * np.pi * rng.uniform(size=n))
    ph23 = np.exp(2j * np.pi * rng.uniform(size=n))
    rho = np.zeros((n, 4, 4), dtype=complex)
    idx = np.arange(4)
    rho[:, idx, idx] = d
    rho[:, 0, 3] = m14 * ph14
    rho[:, 3, 0] = m14 * ph14.conj()
    rho[:, 1, 2] = m23 * ph23
    rho[:, 2, 1] = m23 * ph23.conj()
    w = center_basis(s)
    return w @ rho @ w.conj().T


def make_random_x(s: Subalgebra | str = "ZZ", seed: int = 0) -> np.ndarray:
    """One random X-state of ``s`` from ``numpy.random.default_rng(seed)`` (PCG64)."""
    return random_x_states(s, 1, np.random.default_rng(seed))[0]


def random_density_matrices(n: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank Ginibre states ``G G^H / Tr``, no structure imposed."""
    g = rng.normal(size=(n, 4, 4)) + 1j * rng.normal(size=(n, 4, 4))
    rho = g @ la.adjoint(g)
    return rho / la.trace(rho)[:, None, None]


# JSON state format ---------------------------------------------------------

G_AGREEMENT_TOL = 1e-9


def state_to_dict(rho, g: GVector | None = None) -> dict:
    rho = la.as_matrix4(rho)
    out = {
        "basis": "std",
        "rho": [[[float(z.real), float(z.imag)] for z in row] for row in rho],
    }
    if g is not None:
        out["g"] = g.to_dict()
    return out


def state_from_dict(obj) -> np.ndarray:
    """Parse the state JSON object; reject disagreement between ``rho`` and ``g``."""
    if not isinstance(obj, dict):
        raise StateFormatError("state JSON must be an object")
    if obj.get("basis", "std") != "std":
        raise StateFormatError(f"unsupported basis {obj.get('basis')!r}")
    if "rho" not in obj:
        raise StateFormatError("state JSON has no 'rho' field")
    try:
        arr = np.asarray(obj["rho"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"malformed 'rho': {exc}") from None
    if arr.shape != (4, 4, 2):
        raise StateFormatError(f"'rho' must be 4x4 [re, im] pairs, got shape {arr.shape}")
    rho = arr[..., 0] + 1j * arr[..., 1]
    if "g" in obj:
        gobj = obj["g"]
        try:
            s = get(gobj["center"])
            values = np.asarray(gobj["values"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise StateFormatError(f"malformed 'g': {exc}") from None
        if values.shape != (7,):
            raise StateFormatError("'g.values' must have 7 entries")
        dev = float(np.abs(rho_from_g(values, s) - rho).max())
        if dev > G_AGREEMENT_TOL:
            raise StateFormatError(f"'rho' and 'g' disagree by {dev:.3e}")
    return rho


def dumps_state(rho, g: GVector | None = None) -> str:
    return json.dumps(state_to_dict(rho, g))


def loads_state(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}") from None
    return state_from_dict(obj)
