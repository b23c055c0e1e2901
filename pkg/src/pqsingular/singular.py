"""The purely singular problem: frozen solves, fixed point, eps -> 0 limit."""

import numpy as np

from .energy import EnergySpec, SolveReport, assemble_residual, minimize_energy, solve_newton
from .exponents import validate_h0_h1i
from .mesh import GridFunction

__all__ = [
    "RegularizationSchedule",
    "SingularSolution",
    "solve_auxiliary",
    "solve_regularized",
    "solve_pure_singular",
]


class RegularizationSchedule:
    """Decreasing eps sequence plus the solver tolerances."""

    def __init__(self, eps_values=None, inner_tol=1e-10, fixed_point_tol=1e-10,
                 max_outer=200):
        if eps_values is None:
            eps_values = [0.5 ** k for k in range(21)]
        eps_values = [float(e) for e in eps_values]
        if not eps_values or eps_values[0] > 1 or any(e <= 0 for e in eps_values):
            raise ValueError("eps values must lie in (0, 1]")
        if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
            raise ValueError("eps values must be strictly decreasing")
        self.eps_values = eps_values
        self.inner_tol = float(inner_tol)
        self.fixed_point_tol = float(fixed_point_tol)
        self.max_outer = int(max_outer)


class SingularSolution:
    """Limit solution of the eps-continuation with its diagnostics."""

    def __init__(self, u_bar, per_eps_solutions, monotonicity_violation,
                 final_residual):
        self.u_bar = u_bar
        self.per_eps_solutions = list(per_eps_solutions)
        self.monotonicity_violation = float(monotonicity_violation)
        self.final_residual = float(final_residual)


def _require_valid(ef, mesh):
    report = validate_h0_h1i(ef, mesh)
    if not report.passed:
        raise ValueError(f"field data fails validation: {report.violations}")


def solve_auxiliary(ef, mesh, g, eps, tol=1e-10, u_init=None, max_iter=200):
    """Solve the frozen problem with right-hand side (g + eps)^{-eta}.

    The operator is strictly monotone, so the solution is independent of the
    initial guess.
    """
    _require_valid(ef, mesh)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    spec = EnergySpec(ef, singular_mode="frozen", frozen_g=g, eps=eps)
    if u_init is None:
        u_init = GridFunction.constant(mesh, 0.5)
    return minimize_energy(spec, u_init, tol=tol, max_iter=max_iter)


def solve_regularized(ef, mesh, eps, u_init=None, fixed_point_tol=1e-10,
                      inner_tol=1e-10, max_outer=200):
    """Fixed point of the frozen-solution map, by Picard iteration.

    Cycling (the fixed point map is not known to be a contraction) triggers
    a direct Newton solve on the regularized residual; both routes target
    the same unique solution.
    """
    _require_valid(ef, mesh)
    if u_init is None:
        u_init = GridFunction.constant(mesh, 0.5)
    u = u_init.with_values(np.maximum(u_init.values, 0.0))
    reg_spec = EnergySpec(ef, singular_mode="regularized", eps=eps)

    prev_step = np.inf
    total_inner = 0
    for k in range(max_outer):
        rep = solve_auxiliary(ef, mesh, u, eps, tol=inner_tol, u_init=u)
        total_inner += rep.iterations
        if not rep.converged:
            return SolveReport(rep.u, False, rep.residual_inf, k,
                               rep.energy, message="inner solve failed")
        step = float(np.abs(rep.u.values - u.values).max())
        u = rep.u
        if step <= fixed_point_tol:
            r = assemble_residual(reg_spec, u)
            return SolveReport(u, True, float(np.abs(r).max()), k + 1,
                               rep.energy, flags={"inner_iterations": total_inner})
        if step > 0.5 * prev_step and step < 1e-4:
            # slow tail or two-cycle: finish with Newton on the residual
            rep2 = minimize_energy(reg_spec, u, tol=inner_tol)
            if rep2.converged:
                rep2.flags["picard_fallback"] = True
                return rep2
        prev_step = step
    return SolveReport(u, False, np.inf, max_outer, 0.0,
                       message="max_outer exceeded")


def solve_pure_singular(ef, mesh, schedule=None):
    """Monotone eps -> 0 continuation, finished by an exact-mode polish.

    Consecutive regularized solutions must be nodewise nondecreasing as eps
    decreases; the recorded violation is the largest observed decrease.
    """
    _require_valid(ef, mesh)
    if schedule is None:
        schedule = RegularizationSchedule()
    exact_spec = EnergySpec(ef, singular_mode="exact")

    per_eps = []
    violation = 0.0
    u = None
    for eps in schedule.eps_values:
        rep = solve_regularized(ef, mesh, eps, u_init=u,
                                fixed_point_tol=schedule.fixed_point_tol,
                                inner_tol=schedule.inner_tol,
                                max_outer=schedule.max_outer)
        if not rep.converged:
            raise RuntimeError(f"regularized solve failed at eps={eps}: "
                               f"{rep.message}")
        if u is not None:
            violation = max(violation,
                            float((u.values - rep.u.values).max()))
        u = rep.u
        per_eps.append(u)
        if len(per_eps) >= 2:
            diff = float(np.abs(per_eps[-1].values - per_eps[-2].values).max())
            r_exact = assemble_residual(exact_spec, u)
            if (diff <= schedule.fixed_point_tol
                    and float(np.abs(r_exact).max()) <= schedule.inner_tol):
                break

    # the schedule leaves an O(eps) defect in the exact residual; remove it
    # with Newton on the exact-mode residual (iterates stay positive, they
    # start above the eps = 1 solution)
    rep = solve_newton(exact_spec, u, tol=schedule.inner_tol)
    if not rep.converged:
        raise RuntimeError("exact-mode polish failed to converge: "
                           f"{rep.message}")
    u_bar = rep.u
    if u_bar.min() <= 0:
        raise RuntimeError("singular solution lost strict positivity")
    return SingularSolution(u_bar, per_eps, violation, rep.residual_inf)
