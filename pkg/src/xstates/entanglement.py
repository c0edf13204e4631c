"""Concurrence of X-states by three independent routes.

* closed form in the g-vector, built from the conjugate-pair combinations
  ``1 ± g1``, ``g3 ± g6``, ``g2 ± g5``, ``g4 ± g7``;
* entrywise form on the standard X-shaped matrix;
* the Wootters construction, with the eigenvalues of ``rho rho~`` taken from
  the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)`` via :mod:`linalg4`.

The closed forms are written in the frame of the standard (ZZ) subalgebra.
Other two-qubit centers are carried into that frame by a local unitary (see
:func:`xstates.subalgebra.local_frame`); single-qubit centers have no such
frame and only the oracle applies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg4 as la
from .subalgebra import Subalgebra, get, local_frame, standard
from .xstate import (
    GVector,
    InvalidStateError,
    PatternError,
    g_from_rho,
    is_x_pattern,
    make_werner,
    rho_from_g,
    spin_flip,
)

__all__ = [
    "ClosedFormUnavailable",
    "to_standard_frame",
    "spectrum_closed_form",
    "concurrence_from_spectrum",
    "concurrence_closed_form",
    "spectrum_entrywise",
    "concurrence_entrywise",
    "concurrence_oracle",
    "triangulate",
    "MethodComparison",
    "compare_methods",
    "werner_sweep",
    "g_sweep",
]

AGREEMENT_TOL = 1e-8


class ClosedFormUnavailable(ValueError):
    """The subalgebra is not related to the standard set by a local unitary."""


def to_standard_frame(g: GVector) -> np.ndarray:
    """Values of ``g`` re-expressed against the standard subalgebra's labels."""
    frame = local_frame(g.subalgebra)
    if frame is None:
        raise ClosedFormUnavailable(
            f"center {g.center} acts on a single qubit; no closed form applies")
    perm, signs = frame
    idx = np.asarray(perm) - 1
    return np.asarray(signs, dtype=float) * g.values[..., idx]


def _sqrt_radicand(r: np.ndarray, what: str) -> np.ndarray:
    lo = float(np.min(r, initial=0.0))
    if lo < -la.PSD_CLAMP:
        raise InvalidStateError(f"{what} radicand {lo:.3e} is negative; g is not a state")
    return np.sqrt(np.maximum(r, 0.0))


def spectrum_closed_form(g: GVector) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho rho~``, descending, from g alone."""
    v = to_standard_frame(g)
    g1, g2, g3, g4, g5, g6, g7 = np.moveaxis(v, -1, 0)
    tol = la.PSD_CLAMP
    # diagonal entries are (1 ± g1 ± (g3 ± g6)) / 4 and must be nonnegative
    for a, b in ((1 + g1, g3 + g6), (1 - g1, g3 - g6)):
        bad = np.min(a - np.abs(b), initial=0.0)
        if bad < -tol:
            raise InvalidStateError(f"g gives a negative diagonal entry ({bad / 4:.3e})")
    outer_p = _sqrt_radicand((1 + g1) ** 2 - (g3 + g6) ** 2, "1-4 block")
    outer_m = _sqrt_radicand((1 - g1) ** 2 - (g3 - g6) ** 2, "2-3 block")
    inner_p = np.sqrt((g2 + g5) ** 2 + (g4 + g7) ** 2)
    inner_m = np.sqrt((g2 - g5) ** 2 + (g4 - g7) ** 2)
    sp = 0.25 * np.stack(
        [outer_p + inner_p, outer_p - inner_p, outer_m + inner_m, outer_m - inner_m], axis=-1)
    lo = float(np.min(sp, initial=0.0))
    if lo < -tol:
        raise InvalidStateError(f"g violates positivity (block coherence exceeds bound by {-lo:.3e})")
    return -np.sort(-np.maximum(sp, 0.0), axis=-1)


def concurrence_from_spectrum(sp) -> np.ndarray | float:
    """Largest value minus the other three, floored at zero."""
    sp = -np.sort(-np.asarray(sp, dtype=float), axis=-1)
    c = np.maximum(0.0, sp[..., 0] - sp[..., 1] - sp[..., 2] - sp[..., 3])
    return float(c) if c.ndim == 0 else c


def concurrence_closed_form(g: GVector):
    return concurrence_from_spectrum(spectrum_closed_form(g))


def _require_standard_pattern(rho, tol: float) -> np.ndarray:
    rho = la.as_matrix4(rho)
    ok = is_x_pattern(rho, standard(), tol)
    if not np.all(ok):
        raise PatternError("state is not X-shaped for center ZZ; project it first")
    return rho


def spectrum_entrywise(rho, tol: float = la.PATTERN_TOL) -> np.ndarray:
    """``{sqrt(r11 r44) ± |r14|, sqrt(r22 r33) ± |r23|}``, descending."""
    rho = _require_standard_pattern(rho, tol)
    d = np.maximum(np.diagonal(rho, axis1=-2, axis2=-1).real, 0.0)
    o14 = np.sqrt(d[..., 0] * d[..., 3])
    o23 = np.sqrt(d[..., 1] * d[..., 2])
    c14 = np.abs(rho[..., 0, 3])
    c23 = np.abs(rho[..., 1, 2])
    sp = np.stack([o14 + c14, o14 - c14, o23 + c23, o23 - c23], axis=-1)
    return -np.sort(-np.maximum(sp, 0.0), axis=-1)


def concurrence_entrywise(rho, tol: float = la.PATTERN_TOL):
    """``2 max(0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44))`` for a standard X-state."""
    rho = _require_standard_pattern(rho, tol)
    d = np.maximum(np.diagonal(rho, axis1=-2, axis2=-1).real, 0.0)
    a = np.abs(rho[..., 0, 3]) - np.sqrt(d[..., 1] * d[..., 2])
    b = np.abs(rho[..., 1, 2]) - np.sqrt(d[..., 0] * d[..., 3])
    c = 2.0 * np.maximum(0.0, np.maximum(a, b))
    return float(c) if c.ndim == 0 else c


def concurrence_oracle(rho):
    """Wootters concurrence of any two-qubit state; returns ``(C, spectrum)``."""
    rho = la.as_matrix4(rho)
    root = la.psd_sqrt(rho)
    r = root @ spin_flip(rho) @ root
    r = 0.5 * (r + la.adjoint(r))
    mu, _ = la.hermitian_eigs(r)
    mu = la.clamp_eigenvalues(mu)
    sp = np.sqrt(mu)[..., ::-1]
    return concurrence_from_spectrum(sp), sp


def triangulate(rho, s: Subalgebra | str = "ZZ") -> dict[str, np.ndarray]:
    """Run all applicable methods on a stack of X-states of ``s``.

    Returns per-state arrays keyed ``C_closed``, ``C_entrywise``,
    ``C_oracle``, matching ``spectrum_*`` keys, and ``max_dev``: the largest
    pairwise gap over both spectra and concurrences. Methods that do not
    apply to ``s`` are absent from the result.
    """
    s = get(s)
    rho = la.as_matrix4(rho)
    if not np.all(is_x_pattern(rho, s)):
        raise PatternError(f"state is not invariant under the {s.name} subalgebra")
    out: dict[str, np.ndarray] = {}
    c_o, sp_o = concurrence_oracle(rho)
    out["C_oracle"], out["spectrum_oracle"] = np.asarray(c_o), sp_o
    if local_frame(s) is not None:
        g = g_from_rho(rho, s)
        sp_c = spectrum_closed_form(g)
        out["C_closed"], out["spectrum_closed"] = np.asarray(concurrence_from_spectrum(sp_c)), sp_c
        rho_std = rho_from_g(to_standard_frame(g), standard())
        sp_e = spectrum_entrywise(rho_std)
        out["C_entrywise"] = np.asarray(concurrence_entrywise(rho_std))
        out["spectrum_entrywise"] = sp_e
    names = [k for k in ("closed", "entrywise", "oracle") if f"C_{k}" in out]
    dev = np.zeros(np.shape(out["C_oracle"]))
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            dev = np.maximum(dev, np.abs(out[f"C_{a}"] - out[f"C_{b}"]))
            dev = np.maximum(dev, np.abs(out[f"spectrum_{a}"] - out[f"spectrum_{b}"]).max(axis=-1))
    out["max_dev"] = dev
    return out


@dataclass
class MethodComparison:
    center: str
    spectra: dict[str, list[float]]
    concurrences: dict[str, float]
    max_deviation: float

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "spectra": self.spectra,
            "concurrences": self.concurrences,
            "max_deviation": self.max_deviation,
        }


def compare_methods(state, s: Subalgebra | str | None = None) -> MethodComparison:
    """Compare every applicable method on one state.

    ``state`` is either a 4x4 matrix or a :class:`GVector`; a g-vector is
    checked by the closed form first so an invalid one raises instead of
    producing a number.
    """
    if isinstance(state, GVector):
        s = state.subalgebra
        if local_frame(s) is not None:
            spectrum_closed_form(state)
        rho = rho_from_g(state)
    else:
        s = get("ZZ" if s is None else s)
        rho = la.as_matrix4(state)
    res = triangulate(rho[None], s)
    spectra = {k.removeprefix("spectrum_"): v[0].tolist() for k, v in res.items()
               if k.startswith("spectrum_")}
    conc = {k.removeprefix("C_"): float(v[0]) for k, v in res.items() if k.startswith("C_")}
    return MethodComparison(s.name, spectra, conc, float(res["max_dev"][0]))


def werner_sweep(steps: int = 101) -> list[dict]:
    """Werner family on an even grid ``p = 0 .. 1`` with all three methods."""
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    ps = np.linspace(0.0, 1.0, steps)
    rho = np.stack([make_werner(p) for p in ps])
    res = triangulate(rho, standard())
    return [
        {"p": float(p), "C_closed": float(res["C_closed"][k]),
         "C_entrywise": float(res["C_entrywise"][k]), "C_oracle": float(res["C_oracle"][k]),
         "max_dev": float(res["max_dev"][k])}
        for k, p in enumerate(ps)
    ]


def g_sweep(values, s: Subalgebra | str = "ZZ") -> list[dict]:
    """Triangulate a list of g-vectors of ``s``; each must describe a state."""
    s = get(s)
    values = np.atleast_2d(np.asarray(values, dtype=float))
    g = GVector(values, s)
    if local_frame(s) is not None:
        spectrum_closed_form(g)
    res = triangulate(rho_from_g(g), s)
    rows = []
    for k in range(values.shape[0]):
        rows.append({
            "index": k,
            "C_closed": float(res["C_closed"][k]) if "C_closed" in res else float("nan"),
            "C_entrywise": float(res["C_entrywise"][k]) if "C_entrywise" in res else float("nan"),
            "C_oracle": float(res["C_oracle"][k]),
            "max_dev": float(res["max_dev"][k]),
        })
    return rows
