"""The fifteen su(2) x su(2) x u(1) subalgebras of two-qubit Pauli strings.

Each nontrivial Pauli string, taken as the central u(1) element, commutes with
exactly six others. Together these seven operators close under
multiplication, and their products arrange into a Fano plane: three commuting
lines through the center and four anticommuting lines with a cyclic
orientation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import PhasedPauli, commutes, multiply, nontrivial_strings, parse, rotate, to_matrix

__all__ = [
    "PAIRS",
    "Subalgebra",
    "FanoLine",
    "FanoStructure",
    "SubalgebraError",
    "standard",
    "canonicalize",
    "enumerate_centers",
    "get",
    "fano",
    "export_fano_graph",
    "relabel",
    "local_frame",
]

# slots of the conjugate pairs, 1-based
PAIRS = ((2, 5), (3, 6), (4, 7))

_STANDARD_TEXT = ("ZZ", "YX", "IZ", "-YY", "XY", "ZI", "XX")


class SubalgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Subalgebra:
    """Center X1 plus six ordered members X2..X7, signs included.

    Members are indexed 1..7 with ``s[1]`` the center. Conjugate pairs sit
    in slots (2,5), (3,6), (4,7) and multiply to the center.
    """

    center: PhasedPauli
    members: tuple[PhasedPauli, ...]

    def __post_init__(self):
        _check(self)

    @property
    def elements(self) -> tuple[PhasedPauli, ...]:
        return (self.center,) + self.members

    @property
    def name(self) -> str:
        return str(self.center)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return PAIRS

    def __getitem__(self, i: int) -> PhasedPauli:
        _check_index(i)
        return self.elements[i - 1]

    def pair(self, i: int) -> int:
        """Index of the conjugate partner; the center is its own partner."""
        _check_index(i)
        if i == 1:
            return 1
        for a, b in PAIRS:
            if i == a:
                return b
            if i == b:
                return a
        raise AssertionError

    def index(self, p: PhasedPauli) -> int:
        """1-based slot of a string, ignoring phase."""
        key = p.strip()
        for k, e in enumerate(self.elements, start=1):
            if e.strip() == key:
                return k
        raise KeyError(str(p))

    def matrices(self) -> np.ndarray:
        """Stack of shape (7, 4, 4) holding X1..X7."""
        return np.stack([to_matrix(e) for e in self.elements])

    @property
    def is_local(self) -> bool:
        """True if the center acts on one qubit only."""
        return self.center.sigma_axis.value == 0 or self.center.tau_axis.value == 0

    def __str__(self) -> str:
        return ", ".join(f"X{k}={e}" for k, e in enumerate(self.elements, start=1))


def _check_index(i: int) -> None:
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= 7:
        raise IndexError(f"member index must be in 1..7, got {i!r}")


def _check(s: Subalgebra) -> None:
    c = s.center
    if c.is_identity or c.phase != 0:
        raise SubalgebraError(f"center must be a nontrivial bare string, got {c}")
    if len(s.members) != 6:
        raise SubalgebraError(f"expected 6 members, got {len(s.members)}")
    bare = {e.strip() for e in s.elements}
    if len(bare) != 7 or any(e.is_identity for e in bare):
        raise SubalgebraError("members must be distinct, nontrivial and differ from the center")
    for m in s.members:
        if not m.is_hermitian:
            raise SubalgebraError(f"member {m} is not Hermitian")
        if not commutes(m, c):
            raise SubalgebraError(f"member {m} does not commute with center {c}")
    el = s.elements
    for a, b in PAIRS:
        if multiply(el[a - 1], el[b - 1]) != c:
            raise SubalgebraError(f"X{a}*X{b} = {multiply(el[a - 1], el[b - 1])}, expected {c}")


def _commutant(center: PhasedPauli) -> list[PhasedPauli]:
    return [p for p in nontrivial_strings() if p != center and commutes(p, center)]


def _conjugate_pairs(center: PhasedPauli) -> list[tuple[PhasedPauli, PhasedPauli]]:
    """Signed pairs (a, b) with a*b = +center, a the lexicographically smaller with sign +1."""
    comm = _commutant(center)
    pairs = []
    for a in comm:
        for b in comm:
            if a.lex_key() < b.lex_key() and multiply(a, b).strip() == center:
                prod = multiply(a, b)
                # a*b = i^k center; partner sign makes the product exactly +center
                pairs.append((a, b.with_phase(-prod.phase)))
    pairs.sort(key=lambda ab: ab[0].lex_key())
    return pairs


def _labelings(center: PhasedPauli):
    """Candidate labelings in a fixed order: slot permutations, then in-pair swaps."""
    pairs = _conjugate_pairs(center)
    for perm in itertools.permutations(range(3)):
        for swaps in itertools.product((False, True), repeat=3):
            members = [None] * 6
            for slot, (k, swap) in enumerate(zip(perm, swaps)):
                a, b = pairs[k]
                first, second = (b, a) if swap else (a, b)
                members[slot] = first
                members[slot + 3] = second
            yield Subalgebra(center, tuple(members))


@lru_cache(maxsize=None)
def standard() -> Subalgebra:
    """The usual X-state set built on the center ZZ."""
    el = [parse(t) for t in _STANDARD_TEXT]
    return Subalgebra(el[0], tuple(el[1:]))


@lru_cache(maxsize=None)
def canonicalize(center: PhasedPauli | str) -> Subalgebra:
    """Deterministic labeled subalgebra for a center.

    Within each pair the lexicographically smaller string carries sign +1.
    Pairs go to slots in lexicographic order of their smaller element; the
    first candidate labeling (slot permutations, then in-pair order) whose
    oriented Fano structure equals that of :func:`standard` is returned, so
    all fifteen share one index pattern. The center ZZ returns
    :func:`standard` itself.
    """
    if isinstance(center, str):
        center = parse(center)
    if center.is_identity or center.phase != 0:
        raise SubalgebraError(f"center must be a nontrivial bare string, got {center}")
    std = standard()
    if center == std.center:
        return std
    target = fano(std)
    for cand in _labelings(center):
        if fano(cand) == target:
            return cand
    raise SubalgebraError(f"no labeling of {center} matches the standard structure")


def get(center: PhasedPauli | str | Subalgebra = "ZZ") -> Subalgebra:
    """Resolve a center name, string or subalgebra to a :class:`Subalgebra`."""
    if isinstance(center, Subalgebra):
        return center
    return canonicalize(center)


def enumerate_centers() -> list[Subalgebra]:
    """One canonical subalgebra per nontrivial bare string, in lexicographic order."""
    return [canonicalize(c) for c in nontrivial_strings()]


@dataclass(frozen=True)
class FanoLine:
    """Three member indices on a line.

    ``commuting`` lines carry no orientation. For anticommuting lines
    ``orientation = (a, b, c)`` means ``Xa Xb = +i Xc`` (and cyclically).
    """

    points: tuple[int, int, int]
    commuting: bool
    orientation: tuple[int, int, int] | None = None


@dataclass(frozen=True)
class FanoStructure:
    lines: tuple[FanoLine, ...]

    def line_through(self, a: int, b: int) -> FanoLine:
        for line in self.lines:
            if a in line.points and b in line.points:
                return line
        raise KeyError((a, b))

    @property
    def commuting_lines(self) -> list[tuple[int, int, int]]:
        return [ln.points for ln in self.lines if ln.commuting]

    @property
    def anticommuting_lines(self) -> list[tuple[int, int, int]]:
        return [ln.points for ln in self.lines if not ln.commuting]


def _rotate_min_first(t: tuple[int, int, int]) -> tuple[int, int, int]:
    k = t.index(min(t))
    return t[k:] + t[:k]


def fano(s: Subalgebra) -> FanoStructure:
    """Derive lines, line types and orientations from pairwise products."""
    el = s.elements
    found: dict[tuple[int, int, int], FanoLine] = {}
    for a, b in itertools.combinations(range(1, 8), 2):
        prod = multiply(el[a - 1], el[b - 1])
        try:
            c = s.index(prod)
        except KeyError:
            raise SubalgebraError(f"X{a}*X{b} = {prod} leaves the set") from None
        pts = tuple(sorted((a, b, c)))
        if pts in found:
            continue
        coef = (prod.phase - el[c - 1].phase) % 4  # Xa Xb = i^coef Xc
        if commutes(el[a - 1], el[b - 1]):
            if coef != 0:
                raise SubalgebraError(f"commuting product X{a}*X{b} has phase i^{coef}")
            found[pts] = FanoLine(pts, True)
        else:
            if coef == 1:
                orient = (a, b, c)
            elif coef == 3:
                orient = (b, a, c)
            else:
                raise SubalgebraError(f"anticommuting product X{a}*X{b} has real phase")
            found[pts] = FanoLine(pts, False, _rotate_min_first(orient))
    lines = tuple(sorted(found.values(), key=lambda ln: (not ln.commuting, ln.points)))
    return FanoStructure(lines)


def export_fano_graph(f: FanoStructure, s: Subalgebra | None = None) -> str:
    """Line-oriented text: one ``node`` record per index, one ``line`` per Fano line.

    Anticommuting lines list their oriented cycle as ``a->b->c``.
    """
    out = []
    if s is not None:
        out.append(f"center {s.center}")
    for k in range(1, 8):
        label = f" {s[k]}" if s is not None else ""
        out.append(f"node {k}{label}")
    for ln in f.lines:
        pts = " ".join(str(p) for p in ln.points)
        if ln.commuting:
            out.append(f"line {pts} commuting")
        else:
            a, b, c = ln.orientation
            out.append(f"line {pts} anticommuting {a}->{b}->{c}")
    return "\n".join(out) + "\n"


def relabel(s: Subalgebra, sigma_rot, tau_rot) -> Subalgebra:
    """Apply a local rotation (signed permutation of x, y, z per qubit) to every member."""
    el = [rotate(e, sigma_rot, tau_rot) for e in s.elements]
    if el[0].phase != 0:
        raise SubalgebraError("rotation maps the center to a negative string")
    return Subalgebra(el[0], tuple(el[1:]))


@lru_cache(maxsize=None)
def _proper_signed_permutations() -> tuple[np.ndarray, ...]:
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            r = np.zeros((3, 3), dtype=int)
            for col, (row, sg) in enumerate(zip(perm, signs)):
                r[row, col] = sg
            if round(np.linalg.det(r)) == 1:
                r.setflags(write=False)
                out.append(r)
    return tuple(out)


@lru_cache(maxsize=None)
def local_frame(s: Subalgebra) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Relate ``s`` to the standard set through a local unitary, if one exists.

    Returns ``(perm, signs)`` with ``U X_i^std U^H = signs[i-1] * X^s_{perm[i-1]}``
    for some product unitary U, or None when the center acts on one qubit.
    A state's g-vector in the standard frame is then
    ``g_std[i] = signs[i] * g_s[perm[i]]``.
    """
    if s.is_local:
        return None
    std = standard()
    for ra in _proper_signed_permutations():
        for rb in _proper_signed_permutations():
            if rotate(std.center, ra, rb) != s.center:
                continue
            perm, signs = [], []
            for e in std.elements:
                img = rotate(e, ra, rb)
                k = s.index(img)
                perm.append(k)
                signs.append(1 if img == s[k] else -1)
            return tuple(perm), tuple(signs)
    return None
