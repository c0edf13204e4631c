"""Acceptance suite: one test per criterion; conftest prints a PASS/FAIL line for each."""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from xstates import pauli, subalgebra
from xstates.channels import apply_channel, dumps_channel, random_channel
from xstates.entanglement import triangulate, werner_sweep
from xstates.subalgebra import canonicalize, enumerate_centers, fano, standard
from xstates.xstate import (
    ANTI_PATTERN,
    g_from_rho,
    make_bell,
    project_to_x,
    random_density_matrices,
    random_x_states,
    rho_from_g,
    spin_flip_signs,
    validate,
)

from conftest import pauli_matrix

YY = pauli_matrix("YY")


def member_matrices(s):
    """Member matrices rebuilt from their printed strings, independent of the library."""
    return np.stack([(1j ** e.phase) * pauli_matrix(str(e.strip())) for e in s.elements])


def traces(rho, mats):
    return np.einsum("kab,nba->nk", mats, rho).real


def expm_herm(h, theta):
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * theta * w)) @ v.conj().T


# 1 ------------------------------------------------------------------------------

@pytest.mark.criterion(1, "subalgebra census")
def test_census():
    for fn in (subalgebra.standard, subalgebra.canonicalize, subalgebra.local_frame,
               subalgebra._proper_signed_permutations, pauli._bare_matrix):
        fn.cache_clear()
    t0 = time.perf_counter()
    subs = enumerate_centers()
    structures = [fano(s) for s in subs]
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"census took {elapsed:.3f} s"

    assert len(subs) == 15 and len({str(s.center) for s in subs}) == 15
    for s, f in zip(subs, structures):
        assert len(s.elements) == 7
        mats = member_matrices(s)
        # closure: every product is ± or ±i times an element or the identity
        basis = np.concatenate([np.eye(4)[None], mats])
        for a, b in itertools.product(range(7), repeat=2):
            prod = mats[a] @ mats[b]
            coef = np.einsum("kab,ba->k", basis.conj().transpose(0, 2, 1), prod) / 4
            k = int(np.argmax(np.abs(coef)))
            assert np.abs(coef[k]) == pytest.approx(1) and np.allclose(prod, coef[k] * basis[k])
        # Fano incidence: 7 lines, 3 per point, one line per pair of points
        assert len(f.lines) == 7
        for p in range(1, 8):
            assert sum(p in ln.points for ln in f.lines) == 3
        for a, b in itertools.combinations(range(1, 8), 2):
            assert sum(a in ln.points and b in ln.points for ln in f.lines) == 1


# 2 ------------------------------------------------------------------------------

@pytest.mark.criterion(2, "standard-set golden data")
def test_standard_golden():
    s = canonicalize("ZZ")
    assert [str(e) for e in s.elements] == ["ZZ", "YX", "IZ", "-YY", "XY", "ZI", "XX"]
    assert s.pairs == ((2, 5), (3, 6), (4, 7))
    assert sorted(fano(s).commuting_lines) == [(1, 2, 5), (1, 3, 6), (1, 4, 7)]
    mats = member_matrices(s)
    for a, b in s.pairs:
        np.testing.assert_array_equal(mats[a - 1] @ mats[b - 1], mats[0])


# 3 ------------------------------------------------------------------------------

def _doubled_map(rho):
    r = lambda i, j: rho[..., i - 1, j - 1]
    return np.real(np.stack([
        (r(1, 1) + r(4, 4)) - (r(2, 2) + r(3, 3)),
        2j * (r(1, 4) - r(4, 1) + r(3, 2) - r(2, 3)),
        (r(1, 1) - r(4, 4)) - (r(2, 2) - r(3, 3)),
        2 * (r(1, 4) + r(4, 1) - r(3, 2) - r(2, 3)),
        2j * (r(1, 4) - r(4, 1) - r(3, 2) + r(2, 3)),
        (r(1, 1) - r(4, 4)) + (r(2, 2) - r(3, 3)),
        2 * (r(1, 4) + r(4, 1) + r(3, 2) + r(2, 3)),
    ], axis=-1))


@pytest.mark.criterion(3, "g-vector round trip and coefficient-map consistency")
def test_round_trip(rng):
    subs = enumerate_centers()
    g = rng.uniform(-1, 1, size=(10_000, 7))
    which = np.arange(10_000) % 15
    worst = 0.0
    for k, s in enumerate(subs):
        gk = g[which == k]
        rho = rho_from_g(gk, s)
        worst = max(worst, np.abs(g_from_rho(rho, s).values - gk).max())
        # the map also matches the trace definition with independently built matrices
        worst = max(worst, np.abs(traces(rho, member_matrices(s)) - gk).max())
    assert worst <= 1e-12, worst

    # the doubled-coefficient expansion fails round trip; the trace map passes
    rho = random_x_states(standard(), 1000, rng)
    ok = np.abs(rho_from_g(g_from_rho(rho).values) - rho).max()
    bad = np.abs(rho_from_g(_doubled_map(rho)) - rho).max()
    assert ok <= 1e-12 and bad > 1e-2


# 4 ------------------------------------------------------------------------------

@pytest.mark.criterion(4, "projection onto the X pattern")
def test_projection(rng):
    rho = random_density_matrices(1000, rng)
    p = project_to_x(rho, "ZZ")
    rows, cols = zip(*ANTI_PATTERN)
    assert len(ANTI_PATTERN) == 8
    assert np.abs(p[:, rows, cols]).max() <= 1e-12
    assert np.abs(np.trace(p, axis1=1, axis2=2) - np.trace(rho, axis1=1, axis2=2)).max() <= 1e-12
    assert np.linalg.eigvalsh(p).min() >= -1e-12
    assert np.abs(project_to_x(p, "ZZ") - p).max() <= 1e-14
    q = project_to_x(rho, "ZI")
    assert np.abs(q[:, :2, 2:]).max() <= 1e-12 and np.abs(q[:, 2:, :2]).max() <= 1e-12


# 5 ------------------------------------------------------------------------------

@pytest.mark.criterion(5, "conjugation and spin-flip sign rules")
def test_sign_rules(rng):
    assert list(spin_flip_signs("ZZ")) == [1, 1, -1, 1, 1, -1, 1]
    worst = 0.0
    for s in enumerate_centers():
        mats = member_matrices(s)
        rho = random_x_states(s, 1000, rng)
        g = traces(rho, mats)
        for i in range(1, 8):
            fixed = set(range(1, 8)) if i == 1 else {1, i, s.pair(i)}
            expected = g * np.array([1 if k in fixed else -1 for k in range(1, 8)])
            out = traces(mats[i - 1] @ rho @ mats[i - 1].conj().T, mats)
            worst = max(worst, np.abs(out - expected).max())
        flipped = YY @ rho.conj() @ YY
        worst = max(worst, np.abs(traces(flipped, mats) - g * spin_flip_signs(s)).max())
        if s.name == "ZZ":
            worst = max(worst, np.abs(traces(flipped, mats) - g * [1, 1, -1, 1, 1, -1, 1]).max())
    assert worst <= 1e-12, worst


# 6 ------------------------------------------------------------------------------

@pytest.mark.criterion(6, "concurrence triangulation")
def test_triangulation(rng):
    t0 = time.perf_counter()
    rho = random_x_states(standard(), 10_000, rng)
    res = triangulate(rho, standard())
    assert res["max_dev"].max() <= 1e-8
    assert np.mean(res["C_oracle"] > 0) > 0.05  # the sample exercises entangled states

    rows = werner_sweep(101)
    assert len(rows) == 101
    for r in rows:
        target = max(0.0, (3 * r["p"] - 1) / 2)
        for k in ("C_closed", "C_entrywise", "C_oracle"):
            assert abs(r[k] - target) <= 1e-8

    bells = np.stack([make_bell(k) for k in ("phi+", "phi-", "psi+", "psi-")])
    res = triangulate(bells, standard())
    for k in ("C_closed", "C_entrywise", "C_oracle"):
        assert np.abs(res[k] - 1).max() <= 1e-10
    assert time.perf_counter() - t0 < 10.0


# 7 ------------------------------------------------------------------------------

@pytest.mark.criterion(7, "channels preserve the X pattern")
def test_channel_preservation(rng):
    subs = enumerate_centers()
    for n in range(1000):
        s = subs[n % 15]
        ch = random_channel(s, seed=n, n_kraus=1 + n % 4)
        rho = random_x_states(s, 4, rng)
        out = apply_channel(rho, ch)
        mats = member_matrices(s)
        # invariance under the center: the off-pattern part vanishes
        off = out - 0.5 * (out + mats[0] @ out @ mats[0])
        assert np.abs(off).max() <= 1e-10
        for r in out:
            assert validate(r).ok


# 8 ------------------------------------------------------------------------------

@pytest.mark.criterion(8, "rotation geometry of member conjugation")
def test_rotation_geometry(rng):
    for s in enumerate_centers():
        mats = member_matrices(s)
        rho = random_x_states(s, 1, rng)
        g = traces(rho, mats)[0]
        for i in range(1, 8):
            fixed = set(range(1, 8)) if i == 1 else {1, i, s.pair(i)}
            others = [k for k in range(1, 8) if k not in fixed]
            # planes: each a is coupled to the b with X_i X_a proportional to X_b
            planes = []
            for a in others:
                prod = mats[i - 1] @ mats[a - 1]
                b = 1 + int(np.argmax([abs(np.trace(m.conj().T @ prod)) for m in mats]))
                phase = np.trace(mats[b - 1].conj().T @ prod) / 4
                if phase == pytest.approx(1j):
                    planes.append((a, b))
            assert len(planes) == len(others) // 2
            for theta in rng.uniform(-np.pi, np.pi, size=100):
                u = expm_herm(mats[i - 1], theta)
                out = traces((u @ rho @ u.conj().T), mats)[0]
                for k in fixed:
                    assert abs(out[k - 1] - g[k - 1]) <= 1e-10
                c, sn = np.cos(2 * theta), np.sin(2 * theta)
                for a, b in planes:
                    ga, gb = g[a - 1], g[b - 1]
                    assert abs(out[a - 1] - (c * ga - sn * gb)) <= 1e-10
                    assert abs(out[b - 1] - (sn * ga + c * gb)) <= 1e-10
                    assert abs(np.hypot(out[a - 1], out[b - 1]) - np.hypot(ga, gb)) <= 1e-10


# 9 ------------------------------------------------------------------------------

def _cli(args, stdin=""):
    return subprocess.run([sys.executable, "-m", "xstates", *args], input=stdin,
                          capture_output=True, text=True)


@pytest.mark.criterion(9, "CLI round trip and exit codes")
def test_cli(tmp_path):
    for center in ("ZZ", "XY", "ZI"):
        made = _cli(["xstate", "make", "--random", "11", "--center", center])
        assert made.returncode == 0
        params = _cli(["xstate", "params", "--center", center], made.stdout)
        assert params.returncode == 0
        back = _cli(["xstate", "reconstruct"], params.stdout)
        assert back.returncode == 0
        a = np.array(json.loads(made.stdout)["rho"])
        b = np.array(json.loads(back.stdout)["rho"])
        assert np.abs(a - b).max() <= 1e-9

    state = _cli(["xstate", "make", "--werner", "0.6"]).stdout
    ch = tmp_path / "ch.json"
    ch.write_text(dumps_channel(random_channel("ZZ", 3)))
    g_path = tmp_path / "g.json"
    g_path.write_text(json.dumps([[0.1] * 7]))
    valid = [
        (["subalgebras", "list"], ""),
        (["subalgebras", "list", "--format", "json"], ""),
        (["subalgebras", "fano", "--center", "XX"], ""),
        (["subalgebras", "fano", "--center", "XX", "--graph"], ""),
        (["xstate", "make", "--bell", "psi-"], ""),
        (["xstate", "params"], state),
        (["xstate", "project", "--center", "XY"], state),
        (["xstate", "validate"], state),
        (["concurrence", "--method", "all"], state),
        (["concurrence", "--method", "closed"], state),
        (["concurrence", "--method", "entrywise"], state),
        (["concurrence", "--method", "oracle", "--verbose"], state),
        (["sweep", "werner", "--steps", "11"], ""),
        (["sweep", "custom", "--g-path", str(g_path)], ""),
        (["evolve", "--channel", str(ch), "--steps", "3"], state),
    ]
    for args, stdin in valid:
        r = _cli(args, stdin)
        assert r.returncode == 0, (args, r.stderr)

    invalid = [
        (["subalgebras", "fano", "--center", "II"], ""),
        (["xstate", "make", "--werner", "2"], ""),
        (["xstate", "params"], "not json"),
        (["xstate", "reconstruct"], json.dumps({"values": [3, 0, 0, 0, 0, 0, 0]})),
        (["xstate", "validate"], json.dumps({"basis": "std", "rho": [[[0, 0]] * 4] * 4})),
        (["concurrence", "--method", "nope"], state),
        (["sweep", "werner", "--steps", "0"], ""),
        (["evolve", "--channel", str(tmp_path / "missing"), "--steps", "2"], state),
    ]
    for args, stdin in invalid:
        r = _cli(args, stdin)
        assert r.returncode != 0, args
        err = json.loads(r.stderr.strip().splitlines()[-1])
        assert "error" in err and "message" in err
