"""
Acceptance suite: each test is one numbered criterion, run at its stated
tolerance. The conftest prints a PASS/FAIL line per criterion.
"""

import math
import os

import numpy as np
import pytest

import draws
import oracles
from golden_cases import CASES, GOLDEN_DIR
from btzdirac import cli
from btzdirac import spectral as S
from btzdirac.dirac_radial import (
    IntegrationOptions,
    ModeParams,
    integrate_radial,
    local_basis,
    potential_eigenvalues,
    potential_matrix,
    potential_eigenvalues_hbar,
)
from btzdirac.geometry import BTZParams, lapse_sq_offset, tortoise, tortoise_inverse
from btzdirac.klein_gordon import hj_potentials, kg_eigenvalues
from btzdirac.level_crossing import kg_verify_no_crossing, phi_plus, verify_no_crossing


def crossing_draws(seed, n=100, n_extremal=15):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        p = draws.background(rng, extremal=i < n_extremal)
        out.append((p, draws.mode(rng, p)))
    return out


def test_criterion_01_horizon_closed_form():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        p = draws.background(rng)
        rp, rm = oracles.horizon_bisection(p.M, p.J, p.l)
        worst = max(worst, abs(p.r_plus - rp) / rp)
        if rm > 0:
            worst = max(worst, abs(p.r_minus - rm) / rm)
        else:
            assert p.r_minus == 0.0
    assert worst <= 1e-10, worst


def test_criterion_02_potential_eigenvalues():
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(10_000):
        p = draws.background(rng, extremal=rng.random() < 0.1)
        m = draws.mode(rng, p, ml_range=(0.0, 3.0))
        r = float(draws.radii(rng, p, 1)[0])
        # eigvalsh on the matrix itself: near r_+ the lapse is only known to
        # ~eps r_+ / (r - r_+) from its inputs, which is not what is tested here
        v = np.array(potential_matrix(p, m, r).as_array(), dtype=float)
        ref = oracles.sym_eigenvalues(v)
        got = potential_eigenvalues(p, m, r)
        scale = max(1.0, np.linalg.norm(v, 2))
        worst = max(worst, abs(got[0] - ref[0]) / scale, abs(got[1] - ref[1]) / scale)
    assert worst <= 1e-12, worst


def test_criterion_03_horizon_degeneracy():
    # Known to fail: near a non-degenerate horizon N ~ sqrt(r - r_+), so at
    # r = r_+(1 + 1e-12) the eigenvalues sit ~1e-6 * (spin/mass scale) away
    # from phi_+, which exceeds the stated tolerance for most draws.
    failures = []
    for p, m in crossing_draws(103):
        r = p.r_plus * (1.0 + 1e-12)
        fp = phi_plus(p, m.k)
        lm, lp = potential_eigenvalues(p, m, r)
        err = max(abs(lp - fp), abs(lm - fp))
        if err > 1e-6 * (1.0 + abs(fp)):
            failures.append(err / (1e-6 * (1.0 + abs(fp))))
    assert not failures, f"{len(failures)}/100 draws over tolerance, worst ratio {max(failures):.3g}"


def test_criterion_04_no_crossing_dirac():
    cases = crossing_draws(104)
    assert sum(p.extremal for p, _ in cases) >= 10
    for p, m in cases:
        rep = verify_no_crossing(p, m)
        assert len(rep.grid) == 1000
        assert rep.grid[-1] == pytest.approx(1e3 * p.r_plus)
        assert np.all(rep.lambda_plus > rep.phi_plus), (p, m)
        assert np.all(rep.lambda_minus < rep.phi_plus), (p, m)
        if m.k != 0:
            assert rep.bound_violations == 0, (p, m)
        assert rep.no_crossing


def test_criterion_05_no_crossing_kg():
    cases = crossing_draws(105)
    for p, m in cases:
        assert m.mu != 0
        rep = kg_verify_no_crossing(p, m)
        assert np.all(rep.lambda_plus > rep.phi_plus), (p, m)
        assert np.all(rep.lambda_minus < rep.phi_plus), (p, m)
        if m.k != 0:
            assert rep.bound_violations == 0, (p, m)
        assert rep.no_crossing


def test_criterion_06_self_adjointness_threshold():
    p = BTZParams(1.0, 0.0, 1.0)
    expected = {0.1: S.LCC, 0.3: S.LCC, 0.49: S.LCC, 0.5: S.LPC, 0.6: S.LPC, 1.0: S.LPC, 2.0: S.LPC}
    for ml, verdict in expected.items():
        m = ModeParams(ml / p.l, 1)
        assert S.classify_infinity(m, p).verdict == verdict, ml
        e = S.lpc_E_criterion(p, m, 2.0 * p.r_plus)
        assert (S.LPC if e.verdict == S.DIVERGENT else S.LCC) == verdict, (ml, e.verdict)


def test_criterion_07_frobenius_decay():
    p = BTZParams(1.0, 0.0, 1.0)
    rs = np.geomspace(1e2, 1e4, 60)
    for ml in (0.5, 1.0, 2.0):
        m = ModeParams(ml / p.l, 1, 0.0)
        g0 = S.frobenius_decaying_data(p, m, 1e2)
        tr = integrate_radial(p, m, 1e2, 1e4, g0, IntegrationOptions(rtol=1e-12, atol=1e-300), r_eval=rs)
        slope = np.polyfit(np.log(tr.points), np.log(np.linalg.norm(tr.states, axis=1)), 1)[0]
        assert abs(slope + ml) <= 0.02 * ml, (ml, slope)


def test_criterion_08_tortoise_consistency():
    rng = np.random.default_rng(108)
    worst_fd = worst_rt = 0.0
    for i in range(100):
        p = draws.background(rng, extremal=i % 2 == 0)
        u = p.r_plus * np.geomspace(1e-6, 99.0, 1000)
        r = p.r_plus + u
        h = 1e-4 * u
        dy = (tortoise(p, r + h) - tortoise(p, r - h)) / ((r + h) - (r - h))
        exact = -1.0 / lapse_sq_offset(p, u)
        worst_fd = max(worst_fd, float(np.max(np.abs(dy / exact - 1.0))))
        y = tortoise(p, r)
        back = np.array([tortoise_inverse(p, float(v)) for v in y[::10]])
        worst_rt = max(worst_rt, float(np.max(np.abs(back - r[::10]) / r[::10])))
    assert worst_fd <= 1e-6, worst_fd
    assert worst_rt <= 1e-10, worst_rt


def test_criterion_09_wronskian_constancy():
    rng = np.random.default_rng(109)
    for _ in range(20):
        p = draws.background(rng)
        m = draws.mode(rng, p, lam=float(rng.uniform(-1, 1)))
        g0, h0 = local_basis(p, m, 50 * p.r_plus)
        tr = integrate_radial(p, m, 50 * p.r_plus, 1.5 * p.r_plus, g0,
                              IntegrationOptions(rtol=1e-12, atol=1e-300), companion=h0)
        assert tr.wronskian_variation() <= 1e-8, (p, m, tr.wronskian_variation())


def test_criterion_10_levinson_premise():
    rng = np.random.default_rng(110)
    for _ in range(20):
        p = draws.background(rng)
        m = draws.mode(rng, p)
        rep = S.levinson_check(p, m)
        for row in rep.entry_reports:
            for entry in row:
                assert entry.convergent, (p, m)
                last = entry.partial[-1]
                assert abs(last - entry.partial[-2]) <= 1e-6 * abs(last), (p, m)
        assert max(rep.drift) <= 1e-4, (p, m, rep.drift)
        assert not rep.normalizable


def test_criterion_11_discreteness():
    rng = np.random.default_rng(111)
    for _ in range(10):
        p = draws.background(rng)
        m = draws.mode(rng, p)
        r0 = 2.0 * p.r_plus
        ratio = S.discreteness_ratio(p, m, r0, 1e6 * r0)
        assert abs(ratio - 1.0) <= 0.01, (p, m, ratio)


def test_criterion_12_classical_limit_chain():
    rng = np.random.default_rng(112)
    for i in range(10):
        p = draws.background(rng, extremal=i == 0)
        m = draws.mode(rng, p, ml_range=(0.0, 3.0))
        r = draws.radii(rng, p, 10_000)
        dirac0 = potential_eigenvalues_hbar(p, m, r, hbar=0.0)
        kg = kg_eigenvalues(p, m, r)
        hj = hj_potentials(p, m, r)
        for a, b, c in zip(dirac0, kg, hj):
            scale = np.maximum(1.0, np.abs(b))
            assert np.max(np.abs(a - b) / scale) <= 1e-12
            assert np.max(np.abs(b - c) / scale) <= 1e-12


def test_criterion_13_cli_determinism(tmp_path):
    assert len(CASES) == 18
    for name, argv in sorted(CASES.items()):
        _, ext = os.path.splitext(name)
        out = tmp_path / ("run" + ext)
        assert cli.main([*argv, "--out", str(out)]) == 0, name
        with open(os.path.join(GOLDEN_DIR, name), "rb") as fh:
            assert out.read_bytes() == fh.read(), name
