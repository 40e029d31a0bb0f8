import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from btzdirac.dirac_radial import ModeParams, potential_eigenvalues
from btzdirac.errors import DomainError, InvalidParameters, NotExtremal, ZeroK
from btzdirac.geometry import BTZParams
from btzdirac.level_crossing import (
    BC_DEPENDENT_NOTE,
    CROSSING_CANDIDATE,
    NO_CROSSING,
    ZERO_MASS_NOTE,
    GridOptions,
    bound_constant,
    crossing_bounds,
    extremal_touch_point,
    kg_verify_no_crossing,
    phi_plus,
    verify_no_crossing,
)

STATIC = BTZParams(1.0, 0.0, 1.0)
ROT = BTZParams(1.0, 1.0, 2.0)
EXTREMAL = BTZParams(1.0, 1.0, 1.0)


def test_bounds_example():
    g_minus, g_plus = crossing_bounds(STATIC, ModeParams(1.0, 2), 2.0)
    assert g_plus == pytest.approx(2 - 2 / 4, rel=1e-15)
    assert g_minus == pytest.approx(-1.5, rel=1e-15)


@pytest.mark.parametrize("p", [STATIC, ROT, EXTREMAL, BTZParams(2.0, -1.5, 0.9)])
@pytest.mark.parametrize("k", [-3, 1, 2])
def test_bounds_meet_phi_plus_at_horizon(p, k):
    g_minus, g_plus = crossing_bounds(p, ModeParams(1.0, k), p.r_plus * (1 + 1e-15))
    assert g_plus == pytest.approx(phi_plus(p, k), abs=1e-12)
    assert g_minus == pytest.approx(phi_plus(p, k), abs=1e-12)


def test_bound_constant_positive_off_extremality():
    rng = np.random.default_rng(1)
    for _ in range(200):
        M, l = rng.uniform(0.1, 5), rng.uniform(0.2, 4)
        p = BTZParams(M, rng.uniform(-0.9999, 0.9999) * M * l, l)
        for k in (-2, -1, 1, 3):
            assert bound_constant(p, k) > 0


def test_bounds_errors():
    with pytest.raises(ZeroK):
        crossing_bounds(STATIC, ModeParams(1.0, 0), 2.0)
    with pytest.raises(DomainError):
        crossing_bounds(STATIC, ModeParams(1.0, 1), 1.0)


def test_g_plus_monotone():
    p = BTZParams(2.0, 1.2, 1.5)
    r = p.r_plus * (1 + np.geomspace(1e-8, 1e3, 500))
    for k in (-2, 1, 3):
        g_minus, g_plus = crossing_bounds(p, ModeParams(1.0, k), r)
        assert np.all(np.diff(g_plus) >= 0)
        assert np.all(np.diff(g_minus) <= 0)


def test_static_scan():
    rep = verify_no_crossing(STATIC, ModeParams(1.0, 2))
    assert rep.verdict == NO_CROSSING
    assert rep.min_upper_margin > 0 and rep.max_lower_margin < 0
    assert rep.bound_violations == 0
    assert rep.phi_plus == 0.0
    far = rep.grid >= 2.0
    assert np.all(rep.lambda_plus[far] >= math.sqrt(6) * (1 - 1e-14))
    assert np.all(rep.g_plus[rep.grid <= 2.0] <= 1.5)
    assert rep.rows().shape == (1000, 6)


def test_extremal_scan():
    rep = verify_no_crossing(EXTREMAL, ModeParams(1.0, 1))
    assert rep.verdict == NO_CROSSING
    assert rep.bound_violations == 0
    assert rep.regime_note == ""


def test_low_mass_scan_carries_note():
    rep = verify_no_crossing(STATIC, ModeParams(0.3, 1))
    assert BC_DEPENDENT_NOTE in rep.regime_note
    assert rep.verdict in (NO_CROSSING, CROSSING_CANDIDATE)


def test_k_zero_scan():
    rep = verify_no_crossing(ROT, ModeParams(1.0, 0))
    assert rep.verdict == NO_CROSSING
    assert np.all(np.isnan(rep.g_plus))
    assert np.all(rep.lambda_plus - rep.lambda_minus > 0)


def test_kg_scans():
    assert kg_verify_no_crossing(STATIC, ModeParams(1.0, 1)).verdict == NO_CROSSING
    rep = kg_verify_no_crossing(ROT, ModeParams(1.0, -3))
    assert rep.verdict == NO_CROSSING and rep.field_name == "kg"
    assert ZERO_MASS_NOTE in kg_verify_no_crossing(ROT, ModeParams(0.0, 1)).regime_note


def test_kg_and_dirac_share_bounds():
    m = ModeParams(0.8, 2)
    a = verify_no_crossing(ROT, m, GridOptions(points=50))
    b = kg_verify_no_crossing(ROT, m, GridOptions(points=50))
    assert np.array_equal(a.g_plus, b.g_plus) and np.array_equal(a.g_minus, b.g_minus)


def test_touch_point_examples():
    t = extremal_touch_point(EXTREMAL, ModeParams(1.0, 1))
    assert t.r_star is None and not t.inside_domain
    p = BTZParams(1.0, -1.0, 1.0)
    t = extremal_touch_point(p, ModeParams(2.0, -1))
    assert t.r_star == pytest.approx(math.sqrt(1 / 8), rel=1e-15)
    assert t.r_star < p.r_plus and not t.inside_domain
    with pytest.raises(NotExtremal):
        extremal_touch_point(ROT, ModeParams(1.0, 1))


def test_touch_point_inside_only_below_threshold():
    p = BTZParams(1.0, -1.0, 1.0)
    for mu in np.linspace(0.05, 3.0, 60):
        t = extremal_touch_point(p, ModeParams(mu, -2))
        if t.inside_domain:
            assert mu * p.l < 0.5
        else:
            assert mu * p.l >= 0.5 - 1e-12


def test_touch_point_is_where_gap_vanishes():
    p = BTZParams(1.0, -1.0, 1.0)
    m = ModeParams(0.2, -1)
    t = extremal_touch_point(p, m)
    assert t.inside_domain
    _, g_plus = crossing_bounds(p, m, t.r_star)
    assert potential_eigenvalues(p, m, t.r_star)[1] == pytest.approx(g_plus, abs=1e-14)


def test_lambda_plus_grows_linearly():
    rep = verify_no_crossing(ROT, ModeParams(1.0, 1), GridOptions(r_max=1e6))
    far = rep.grid > 1e4
    slope = np.polyfit(np.log(rep.grid[far]), np.log(rep.lambda_plus[far]), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.01)


def test_joint_flip():
    p, q = BTZParams(1.0, 0.6, 1.0), BTZParams(1.0, -0.6, 1.0)
    a = kg_verify_no_crossing(p, ModeParams(1.0, 2))
    b = kg_verify_no_crossing(q, ModeParams(1.0, -2))
    assert np.array_equal(a.lambda_plus, b.lambda_plus) and a.phi_plus == b.phi_plus
    c = verify_no_crossing(p, ModeParams(1.0, 2))
    d = verify_no_crossing(q, ModeParams(1.0, -2))
    assert c.phi_plus == d.phi_plus and np.array_equal(c.g_plus, d.g_plus)
    assert c.verdict == d.verdict == NO_CROSSING


def test_grid_options_validation():
    with pytest.raises(InvalidParameters):
        GridOptions(points=1)
    with pytest.raises(InvalidParameters):
        GridOptions(offset=0.0)
    with pytest.raises(DomainError):
        verify_no_crossing(STATIC, ModeParams(1.0, 1), GridOptions(r_max=1.0))
    lin = verify_no_crossing(STATIC, ModeParams(1.0, 1), GridOptions(points=10, log=False, r_max=5.0))
    assert np.allclose(np.diff(lin.grid), np.diff(lin.grid)[0])


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(-1.0, 1.0), st.floats(0.3, 3.0), st.floats(0.5, 3.0),
       st.integers(-4, 4))
def test_no_crossing_property(M, a, l, ml, k):
    p = BTZParams(M, a * M * l, l)
    m = ModeParams(ml / l, k)
    opts = GridOptions(points=200)
    assert verify_no_crossing(p, m, opts).verdict == NO_CROSSING
    assert kg_verify_no_crossing(p, m, opts).verdict == NO_CROSSING
