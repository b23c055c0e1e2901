import numpy as np
import pytest

import pqsingular as pq
from oracles import singular_constant


def _positive_sample(mesh, rng, lo=0.5, hi=2.0):
    return pq.GridFunction(mesh, rng.uniform(lo, hi, mesh.n_nodes))


def _all_specs(ef, reaction, mesh):
    u_lo = pq.GridFunction.constant(mesh, 0.6)
    u_hi = pq.GridFunction.constant(mesh, 1.8)
    base = pq.SingularBase(ef, reaction, 0.1)
    return {
        "none": pq.EnergySpec(ef),
        "exact": pq.EnergySpec(ef, singular_mode="exact"),
        "regularized": pq.EnergySpec(ef, singular_mode="regularized", eps=0.25),
        "frozen": pq.EnergySpec(ef, singular_mode="frozen", frozen_g=u_lo,
                                eps=0.5),
        "full": pq.EnergySpec(ef, reaction=reaction, lam=0.1,
                              singular_mode="exact"),
        "truncated": pq.EnergySpec(
            ef, truncation=pq.truncate_reaction(u_lo, u_hi, base)),
        "shifted": pq.EnergySpec(ef, singular_mode="frozen", frozen_g=u_lo,
                                 eps=0.5, xi_shift=2.0),
    }


def test_gradient_consistency_all_modes(bench_ef, bench_reaction, rng):
    mesh = pq.build_uniform_mesh(0.0, 1.0, 12)
    for name, spec in _all_specs(bench_ef, bench_reaction, mesh).items():
        worst = max(pq.gradient_check(spec, _positive_sample(mesh, rng))
                    for _ in range(5))
        assert worst <= 1e-6, f"mode {name}: gradient error {worst}"


def test_gradient_consistency_variable_exponents(var_ef, rng):
    mesh = pq.build_uniform_mesh(0.0, 1.0, 12)
    rx = pq.power_reaction(var_ef.r)
    spec = pq.EnergySpec(var_ef, reaction=rx, lam=0.2, singular_mode="exact")
    assert pq.gradient_check(spec, _positive_sample(mesh, rng)) <= 1e-6


def test_constant_solution_has_zero_residual(mesh50):
    # xi = c: u = c^{-1/(p-1+eta)} solves the purely singular equation exactly
    for c in (1.0, 2.0):
        ef = pq.ExponentField(pq.constant(3), pq.constant(2), pq.constant(0.5),
                              pq.constant(c), pq.constant(5))
        spec = pq.EnergySpec(ef, singular_mode="exact")
        u = pq.GridFunction.constant(mesh50, singular_constant(c))
        assert np.abs(pq.assemble_residual(spec, u)).max() < 1e-12


def test_exact_mode_raises_on_nonpositive(bench_ef, mesh50):
    spec = pq.EnergySpec(bench_ef, singular_mode="exact")
    u = pq.GridFunction.constant(mesh50, 0.0)
    with pytest.raises(pq.DomainError):
        pq.assemble_residual(spec, u)


def test_energy_eval_raises_on_overflow(bench_ef, mesh50):
    rx = pq.power_reaction(bench_ef.r)
    spec = pq.EnergySpec(bench_ef, reaction=rx, lam=1.0, singular_mode="exact")
    u = pq.GridFunction.constant(mesh50, 1e300)
    with pytest.raises(ValueError):
        pq.energy_eval(spec, u)


def test_spec_validation(bench_ef, mesh50):
    with pytest.raises(ValueError):
        pq.EnergySpec(bench_ef, singular_mode="bogus")
    with pytest.raises(ValueError):
        pq.EnergySpec(bench_ef, singular_mode="regularized")
    with pytest.raises(ValueError):
        pq.EnergySpec(bench_ef, singular_mode="regularized", eps=2.0)
    with pytest.raises(ValueError):
        pq.EnergySpec(bench_ef, singular_mode="frozen")
    with pytest.raises(ValueError):
        pq.EnergySpec(bench_ef, lam=-1.0)
    with pytest.raises(ValueError):
        pq.EnergySpec(bench_ef, singular_mode="frozen",
                      frozen_g=pq.GridFunction.constant(mesh50, -1.0), eps=0.5)


def test_truncation_bounds_validation(bench_ef, mesh50):
    base = pq.SingularBase(bench_ef)
    lo = pq.GridFunction.constant(mesh50, 2.0)
    hi = pq.GridFunction.constant(mesh50, 1.0)
    with pytest.raises(ValueError):
        pq.truncate_reaction(lo, hi, base)


def test_truncation_clamps_outside(bench_ef, mesh50):
    base = pq.SingularBase(bench_ef)
    lo = pq.GridFunction.constant(mesh50, 1.0)
    hi = pq.GridFunction.constant(mesh50, 2.0)
    tr = pq.truncate_reaction(lo, hi, base)
    x = np.full_like(mesh50.quad_points, 0.5)
    np.testing.assert_allclose(tr.value(mesh50, x),
                               base.value(mesh50, np.ones_like(x)))
    np.testing.assert_array_equal(tr.derivative(mesh50, x), 0.0)
    x = np.full_like(mesh50.quad_points, 5.0)
    np.testing.assert_allclose(tr.value(mesh50, x),
                               base.value(mesh50, 2.0 * np.ones_like(x)))


def test_tridiag_against_dense(rng):
    n = 15
    diag = rng.uniform(2.0, 3.0, n)
    off = rng.uniform(-0.5, 0.5, n - 1)
    T = pq.Tridiag(diag, off)
    b = rng.standard_normal(n)
    np.testing.assert_allclose(T.solve(b), np.linalg.solve(T.to_dense(), b),
                               rtol=1e-10)
    np.testing.assert_allclose(T.matvec(b), T.to_dense() @ b, rtol=1e-12)


def test_jacobian_matches_residual_differences(bench_ef, bench_reaction, rng):
    mesh = pq.build_uniform_mesh(0.0, 1.0, 10)
    spec = pq.EnergySpec(bench_ef, reaction=bench_reaction, lam=0.1,
                         singular_mode="exact")
    u = _positive_sample(mesh, rng, 0.8, 1.5)
    J = pq.assemble_jacobian(spec, u).to_dense()
    h = 1e-6
    for i in range(mesh.n_nodes):
        vp, vm = u.values.copy(), u.values.copy()
        vp[i] += h
        vm[i] -= h
        col = (pq.assemble_residual(spec, u.with_values(vp))
               - pq.assemble_residual(spec, u.with_values(vm))) / (2 * h)
        np.testing.assert_allclose(J[:, i], col, rtol=1e-4, atol=1e-6)


def test_minimize_energy_frozen_unique(bench_ef, mesh50):
    g = pq.GridFunction.constant(mesh50, 1.0)
    spec = pq.EnergySpec(bench_ef, singular_mode="frozen", frozen_g=g, eps=1.0)
    # constant oracle: u^2 = 2^{-1/2}
    target = 2.0 ** -0.25
    for start in (0.1, 5.0):
        rep = pq.minimize_energy(spec, pq.GridFunction.constant(mesh50, start))
        assert rep.converged
        assert rep.u.values == pytest.approx(target, abs=1e-8)


def test_minimize_energy_rejects_infeasible_start(bench_ef, mesh50):
    spec = pq.EnergySpec(bench_ef, singular_mode="exact")
    with pytest.raises(ValueError):
        pq.minimize_energy(spec, pq.GridFunction.constant(mesh50, -1.0))


def test_solve_newton_reaches_saddle(bench_ef, bench_reaction, mesh50):
    spec = pq.EnergySpec(bench_ef, reaction=bench_reaction, lam=0.1,
                         singular_mode="exact")
    rep = pq.solve_newton(spec, pq.GridFunction.constant(mesh50, 3.0))
    assert rep.converged
    from oracles import scalar_roots
    assert rep.u.values == pytest.approx(scalar_roots(0.1)[1], abs=1e-8)
