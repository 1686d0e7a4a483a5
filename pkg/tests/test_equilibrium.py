from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agropolicy.equilibrium import (
    METRICS,
    EquilibriumError,
    LinearDemand,
    MarketCalibration,
    WelfareReport,
    calibrate_demand,
    policy_wedge,
    run_at_wedge,
    run_policy_welfare,
    solve_equilibrium,
    sweep_elasticities,
    welfare_decompose,
)


def closed_form_dwl(t, b, d):
    return -0.5 * t * t * b * d / (b + d)


def grid_rent(d_cf, d_if, total_land, wedge, hi, step):
    """Rent on a uniform grid where excess demand is closest to zero."""
    r = np.arange(0.0, hi + step, step)
    excess = d_cf.intercept + d_cf.slope * r + d_if.intercept + d_if.slope * (r + wedge) - total_land
    return float(r[np.argmin(np.abs(excess))])


# -- calibrate_demand ---------------------------------------------------------


def test_calibrate_small():
    d = calibrate_demand(100, 50, -1)
    assert (d.intercept, d.slope) == (200, -2)
    assert d(50) == 100


def test_calibrate_enterprise_scale():
    d = calibrate_demand(20.7e6, 1600, -0.5)
    assert d.intercept == pytest.approx(31.05e6, rel=1e-12)
    assert d.slope == pytest.approx(-6468.75, rel=1e-12)


@given(
    st.floats(1, 1e8),
    st.floats(1, 1e5),
    st.floats(-5, -1e-3),
)
def test_calibrated_demand_passes_through_observation(land, rent, eps):
    d = calibrate_demand(land, rent, eps)
    assert d(rent) == pytest.approx(land, rel=1e-9)
    # point elasticity at the observation
    assert d.slope * rent / d(rent) == pytest.approx(eps, rel=1e-9)


@pytest.mark.parametrize("eps", [0.0, 0.3])
def test_calibrate_rejects_upward_demand(eps):
    with pytest.raises(EquilibriumError):
        calibrate_demand(10, 10, eps)


# -- solve_equilibrium --------------------------------------------------------

SYM_CF = LinearDemand(200, -2)
SYM_IF = LinearDemand(200, -2)


def test_symmetric_no_wedge():
    eq = solve_equilibrium(SYM_CF, SYM_IF, 200, 0)
    assert (eq.rent, eq.land_cf, eq.land_if) == (50, 100, 100)


def test_symmetric_with_wedge():
    eq = solve_equilibrium(SYM_CF, SYM_IF, 200, 10)
    assert (eq.rent, eq.land_cf, eq.land_if) == (45, 110, 90)
    assert grid_rent(SYM_CF, SYM_IF, 200, 10, 100, 1e-4) == pytest.approx(45, abs=1e-4)


def test_rejects_non_negative_slope():
    with pytest.raises(EquilibriumError):
        LinearDemand(10, 0.0)


def test_rejects_negative_wedge():
    with pytest.raises(EquilibriumError):
        solve_equilibrium(SYM_CF, SYM_IF, 200, -1)


def test_corner_solution_flagged():
    eq = solve_equilibrium(SYM_CF, SYM_IF, 200, 150)
    assert eq.corner
    assert (eq.land_cf, eq.land_if) == (200, 0)
    assert eq.rent == 0
    taxed = welfare_decompose(solve_equilibrium(SYM_CF, SYM_IF, 200, 0), eq, 150, SYM_IF)
    assert taxed.identity_residual == pytest.approx(0, abs=1e-9 * 200 * 50)
    assert taxed.dwl >= 0


def test_negative_rent_flagged_degenerate():
    eq = solve_equilibrium(LinearDemand(150, -1), LinearDemand(100, -1), 300, 0)
    assert eq.degenerate and eq.rent < 0


# -- welfare ------------------------------------------------------------------


def test_symmetric_welfare():
    base = solve_equilibrium(SYM_CF, SYM_IF, 200, 0)
    taxed = solve_equilibrium(SYM_CF, SYM_IF, 200, 10)
    w = welfare_decompose(base, taxed, 10)
    assert (w.d_surplus_cf, w.d_surplus_if, w.d_landowners, w.budget_revenue, w.dwl) == (
        525,
        -475,
        -1000,
        900,
        50,
    )
    assert w.dwl == closed_form_dwl(10, -2, -2)
    assert w.land_reallocated == 10


def test_zero_wedge_zero_report():
    base = solve_equilibrium(SYM_CF, SYM_IF, 200, 0)
    w = welfare_decompose(base, base, 0)
    assert all(getattr(w, m) == 0 for m in (*WelfareReport.MONEY, "land_reallocated"))


@st.composite
def instances(draw):
    """A calibrated market and a wedge that keeps the solution interior."""
    total = draw(st.floats(10, 1e8))
    share = draw(st.floats(0.05, 0.95))
    rent = draw(st.floats(1, 1e4))
    d_cf = calibrate_demand(total * share, rent, draw(st.floats(-3, -0.01)))
    d_if = calibrate_demand(total * (1 - share), rent, draw(st.floats(-3, -0.01)))
    b, d = d_cf.slope, d_if.slope
    t_max = total * (1 - share) * (b + d) / (b * d)  # IF land hits zero
    t = draw(st.floats(0.01, 0.95)) * abs(t_max)
    return d_cf, d_if, total, t


@settings(max_examples=300)
@given(instances())
def test_market_properties(inst):
    d_cf, d_if, total, t = inst
    base = solve_equilibrium(d_cf, d_if, total, 0)
    taxed = solve_equilibrium(d_cf, d_if, total, t)
    assert not taxed.corner
    assert abs(d_cf(taxed.rent) + d_if(taxed.rent + t) - total) < 1e-9 * total
    assert taxed.land_cf + taxed.land_if == pytest.approx(total, rel=1e-12)
    w = welfare_decompose(base, taxed, t)
    scale = max(abs(w.d_surplus_cf), abs(w.d_surplus_if), abs(w.d_landowners), abs(w.budget_revenue))
    assert abs(w.identity_residual) <= 1e-9 * scale
    assert w.dwl > 0
    assert w.dwl == pytest.approx(closed_form_dwl(t, d_cf.slope, d_if.slope), rel=1e-9)
    assert w.dwl == pytest.approx(-0.5 * t * (taxed.land_if - base.land_if), rel=1e-9)
    # comparative statics: rent falls, land moves from IF to CF
    assert taxed.rent <= base.rent
    assert taxed.land_if <= base.land_if
    assert taxed.land_cf >= base.land_cf


def test_zero_wedge_fixed_point():
    d_cf = calibrate_demand(20.7e6, 1600, -0.5)
    d_if = calibrate_demand(15.8e6, 1600, -0.2)
    eq = solve_equilibrium(d_cf, d_if, 36.5e6, 0)
    assert eq.rent == pytest.approx(1600, rel=1e-12)
    assert eq.land_cf == pytest.approx(20.7e6, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_grid_search_oracle(seed):
    rng = np.random.default_rng(seed)
    d_cf = calibrate_demand(rng.uniform(20, 80), rng.uniform(5, 50), rng.uniform(-2, -0.2))
    d_if = calibrate_demand(rng.uniform(20, 80), d_cf.choke_rent / 3, rng.uniform(-2, -0.2))
    total = d_cf(d_cf.choke_rent / 3) + d_if(d_cf.choke_rent / 3)
    t = rng.uniform(0, 2)
    eq = solve_equilibrium(d_cf, d_if, total, t)
    step = 1e-3
    r_grid = grid_rent(d_cf, d_if, total, t, max(d_cf.choke_rent, d_if.choke_rent), step)
    assert abs(r_grid - eq.rent) <= step


# -- policy runs --------------------------------------------------------------


def test_no_policy_zero_report(defaults, no_bill):
    w = run_policy_welfare(defaults.market, no_bill, defaults.params, defaults.bases)
    assert w.wedge == 0 and w.dwl == 0 and w.budget_revenue == 0


def test_policy_wedges(defaults, bill3131, bill3131d):
    m, p, b = defaults.market, defaults.params, defaults.bases
    assert policy_wedge(m, bill3131, p, b) == 1260
    assert policy_wedge(m, bill3131d, p, b) == 560
    # the unregistered-only wedge
    assert policy_wedge(replace(m, registered_household_share=0.0), bill3131d, p, b) == 1120


def test_sweep_singleton_equals_point(defaults, bill3131):
    m, p, b = defaults.market, defaults.params, defaults.bases
    s = sweep_elasticities(m, bill3131, p, b, grid=[(-0.5, -0.2)])
    point = run_policy_welfare(m.with_elasticities(-0.5, -0.2), bill3131, p, b)
    for metric in METRICS:
        assert s.minimum[metric] == s.maximum[metric] == getattr(point, metric)


def test_sweep_two_points_envelope(defaults, bill3131):
    m, p, b = defaults.market, defaults.params, defaults.bases
    grid = [(-0.3, -0.1), (-0.7, -0.3)]
    s = sweep_elasticities(m, bill3131, p, b, grid=grid)
    runs = [run_policy_welfare(m.with_elasticities(*g), bill3131, p, b) for g in grid]
    for metric in METRICS:
        values = [getattr(r, metric) for r in runs]
        assert s.minimum[metric] == min(values)
        assert s.maximum[metric] == max(values)


def test_sweep_order_independent(defaults, bill3131):
    m, p, b = defaults.market, defaults.params, defaults.bases
    grid = list(m.elasticity_grid)
    a = sweep_elasticities(m, bill3131, p, b, grid=grid)
    z = sweep_elasticities(m, bill3131, p, b, grid=grid[::-1])
    assert a.minimum == z.minimum and a.maximum == z.maximum


def test_sweep_rejects_empty_or_positive_grid(defaults, bill3131):
    m, p, b = defaults.market, defaults.params, defaults.bases
    with pytest.raises(EquilibriumError):
        sweep_elasticities(m, bill3131, p, b, grid=[])
    with pytest.raises(EquilibriumError):
        sweep_elasticities(m, bill3131, p, b, grid=[(0.2, -0.1)])


def test_corner_in_sweep(defaults):
    w = run_at_wedge(defaults.market, 1e6)
    assert w.corner
    assert w.land_reallocated == pytest.approx(defaults.market.household_land)
    assert w.budget_revenue == 0
    assert math.isclose(w.identity_residual, 0, abs_tol=1e-9 * abs(w.d_landowners))


def test_calibration_invariants():
    with pytest.raises(EquilibriumError):
        MarketCalibration(10, 12, 1, 1, -0.5, -0.2)
    with pytest.raises(EquilibriumError):
        MarketCalibration(10, 5, 0, 1, -0.5, -0.2)
