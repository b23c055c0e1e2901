import numpy as np
import pytest

import pqsingular as pq
from conftest import benchmark_field
from oracles import (
    FROZEN_EPS1_FIXED_POINT,
    eps_fixed_point,
    singular_constant,
)


def test_schedule_validation():
    s = pq.RegularizationSchedule()
    assert s.eps_values[0] == 1.0
    assert s.eps_values[-1] == pytest.approx(2.0 ** -20)
    with pytest.raises(ValueError):
        pq.RegularizationSchedule(eps_values=[])
    with pytest.raises(ValueError):
        pq.RegularizationSchedule(eps_values=[2.0, 1.0])
    with pytest.raises(ValueError):
        pq.RegularizationSchedule(eps_values=[0.5, 0.5])
    with pytest.raises(ValueError):
        pq.RegularizationSchedule(eps_values=[0.5, -0.1])


def test_solve_auxiliary_constant_oracle(bench_ef, mesh50):
    # g = 1, eps = 1: u solves u^2 = 2^{-1/2}
    g = pq.GridFunction.constant(mesh50, 1.0)
    rep = pq.solve_auxiliary(bench_ef, mesh50, g, 1.0)
    assert rep.converged
    assert rep.u.values == pytest.approx(2.0 ** -0.25, abs=1e-8)


def test_solve_auxiliary_validates(bench_ef, mesh50):
    g = pq.GridFunction.constant(mesh50, 1.0)
    with pytest.raises(ValueError):
        pq.solve_auxiliary(bench_ef, mesh50, g, 0.0)
    bad = pq.ExponentField(pq.constant(3), pq.constant(2), pq.constant(0.5),
                           pq.constant(0.0), pq.constant(5))
    with pytest.raises(ValueError):
        pq.solve_auxiliary(bad, mesh50, g, 1.0)


def test_regularized_fixed_point_eps1(bench_ef, mesh50):
    # fixed point solves u^2 (u+1)^{1/2} = 1
    assert eps_fixed_point(1.0) == pytest.approx(FROZEN_EPS1_FIXED_POINT,
                                                 abs=1e-14)
    rep = pq.solve_regularized(bench_ef, mesh50, 1.0)
    assert rep.converged
    assert rep.u.values == pytest.approx(FROZEN_EPS1_FIXED_POINT, abs=1e-8)


def test_regularized_independent_of_start(bench_ef, mesh50):
    a = pq.solve_regularized(bench_ef, mesh50, 0.25,
                             u_init=pq.GridFunction.constant(mesh50, 0.01))
    ramp = pq.GridFunction.from_callable(mesh50, lambda z: 3.0 + 2.0 * z)
    b = pq.solve_regularized(bench_ef, mesh50, 0.25, u_init=ramp)
    assert a.converged and b.converged
    assert np.abs(a.u.values - b.u.values).max() <= 1e-8


def test_pure_singular_constant_closed_form(mesh50):
    for c in (1.0, 2.0, 5.0):
        ef = benchmark_field(xi=c)
        sol = pq.solve_pure_singular(ef, mesh50)
        err = np.abs(sol.u_bar.values - singular_constant(c)).max()
        assert err <= 1e-8
        assert sol.u_bar.min() > 0
        assert sol.final_residual <= 1e-10


def test_pure_singular_eps_monotone(bench_ef, mesh50):
    sol = pq.solve_pure_singular(bench_ef, mesh50)
    assert sol.monotonicity_violation <= 1e-8
    assert len(sol.per_eps_solutions) >= 2


def test_pure_singular_matches_eps_oracle_along_schedule(bench_ef, mesh50):
    sched = pq.RegularizationSchedule(eps_values=[1.0, 0.5, 0.25])
    sol = pq.solve_pure_singular(bench_ef, mesh50, sched)
    for eps, u in zip([1.0, 0.5, 0.25], sol.per_eps_solutions):
        assert u.values == pytest.approx(eps_fixed_point(eps), abs=1e-8)


def test_pure_singular_rejects_invalid_data(mesh50):
    bad = pq.ExponentField(pq.constant(2), pq.constant(3), pq.constant(0.5),
                           pq.constant(1), pq.constant(5))
    with pytest.raises(ValueError):
        pq.solve_pure_singular(bad, mesh50)
