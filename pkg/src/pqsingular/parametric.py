"""Fixed-lambda solves: minimal solution by monotone iteration and a second
solution by a discretized mountain-pass search."""

import numpy as np

from .energy import (
    EnergySpec,
    SingularBase,
    SolveReport,
    assemble_residual,
    energy_eval,
    minimize_energy,
    solve_newton,
    truncate_reaction,
)
from .exponents import field_bounds
from .mesh import GridFunction
from .reaction import shifted_monotone_probe

__all__ = [
    "LambdaProblem",
    "MountainPassReport",
    "VerificationReport",
    "solve_upper_hat",
    "lambda0_estimate",
    "minimal_solution_iterate",
    "mountain_pass",
    "verify_solution",
]


class LambdaProblem:
    """All data of one parametric solve at a fixed lambda > 0."""

    def __init__(self, ef, mesh, reaction, lam, u_bar, shift_xi_hat=None,
                 cap=None, tol=1e-10, max_iter=2000):
        if lam < 0:
            raise ValueError("lambda must be >= 0")
        if u_bar.min() <= 0:
            raise ValueError("u_bar must be strictly positive")
        self.ef = ef
        self.mesh = mesh
        self.reaction = reaction
        self.lam = float(lam)
        self.u_bar = u_bar
        self.cap = float(cap) if cap is not None else 1e6 * u_bar.sup_norm()
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        if shift_xi_hat is None:
            shift_xi_hat = _default_shift(self)
        if shift_xi_hat < 0:
            raise ValueError("shift_xi_hat must be >= 0")
        self.shift_xi_hat = float(shift_xi_hat)

    def exact_spec(self):
        return EnergySpec(self.ef, reaction=self.reaction, lam=self.lam,
                          singular_mode="exact")


def _default_shift(prob):
    """Shift making the frozen right-hand side map nondecreasing.

    The reaction part is handled by doubling candidates through the
    monotonicity probe; the singular part needs at least the slope of
    x^{-eta} at the smallest value the iterates can take (they stay >= u_bar).
    """
    mesh = prob.mesh
    u_min = prob.u_bar.min()
    grid = np.concatenate([[0.0], np.geomspace(1e-8, prob.cap, 200)])
    z_samples = mesh.nodes[:: max(1, mesh.n_cells // 8)]
    candidate = 1.0
    while candidate < 1e12 and not shifted_monotone_probe(
            prob.reaction, prob.ef, prob.cap, candidate, grid, z_samples):
        candidate *= 2.0
    eta_vals = np.asarray(prob.ef.eta(mesh.nodes), dtype=float)
    sing_slope = float((eta_vals * u_min ** (-eta_vals - 1.0)).max())
    return candidate + sing_slope


class MountainPassReport:
    def __init__(self, u_hat, m_level, path_energy_profile, converged,
                 message=""):
        self.u_hat = u_hat
        self.m_level = float(m_level)
        self.path_energy_profile = list(path_energy_profile)
        self.converged = bool(converged)
        self.message = message


class VerificationReport:
    def __init__(self, residual_inf, lower_bound_ok, positive_ok):
        self.residual_inf = float(residual_inf)
        self.lower_bound_ok = bool(lower_bound_ok)
        self.positive_ok = bool(positive_ok)

    def __repr__(self):
        return (f"VerificationReport(residual={self.residual_inf:.3e}, "
                f"lower_bound_ok={self.lower_bound_ok}, "
                f"positive_ok={self.positive_ok})")


def _frozen_shifted_solve(ef, mesh, rhs_qp, xi_shift, u_init, tol, max_iter=200):
    spec = EnergySpec(ef, singular_mode="frozen", frozen_rhs=rhs_qp,
                      xi_shift=xi_shift)
    return minimize_energy(spec, u_init, tol=tol, max_iter=max_iter)


def solve_upper_hat(ef, mesh, u_bar, tol=1e-10):
    """Solve the frozen problem with right-hand side u_bar^{-eta} + 1."""
    if u_bar.min() <= 0:
        raise ValueError("u_bar must be strictly positive")
    s = ef.on(mesh)
    rhs = u_bar.values_qp() ** (-s.eta) + 1.0
    rep = _frozen_shifted_solve(ef, mesh, rhs, 0.0, u_bar, tol)
    if rep.converged:
        rep.flags["upper_ordering_ok"] = bool(
            np.all(rep.u.values >= u_bar.values - 10 * tol))
    return rep


def lambda0_estimate(u_hat, reaction, mesh):
    """1 / max f(z, u_hat(z)); the truncation argument applies for lam below it."""
    fmax = float(np.max(reaction.f(mesh.quad_points, u_hat.values_qp())))
    return np.inf if fmax <= 0 else 1.0 / fmax


def minimal_solution_iterate(prob, u_start=None):
    """Monotone iteration from u_bar under the shifted frozen map.

    Each step solves V(u) + xi_hat K_p(u) = u_k^{-eta} + lam f(z, u_k)
    + xi_hat u_k^{p-1}; the iterates are nodewise nondecreasing. Outcomes:
    'converged' (sup-step below tol), 'diverged' (cap exceeded), 'stalled'.
    """
    ef, mesh = prob.ef, prob.mesh
    s = ef.on(mesh)
    u = u_start if u_start is not None else prob.u_bar
    if np.any(u.values < prob.u_bar.values - 10 * prob.tol):
        raise ValueError("iteration start must dominate u_bar")
    inner_tol = 0.1 * prob.tol
    monotone_violation = 0.0

    for k in range(prob.max_iter):
        uq = u.values_qp()
        with np.errstate(over="ignore"):
            rhs = (uq ** (-s.eta)
                   + prob.lam * prob.reaction.f(mesh.quad_points, uq)
                   + prob.shift_xi_hat * uq ** (s.p - 1.0))
        if not np.all(np.isfinite(rhs)):
            return SolveReport(u, False, np.inf, k, 0.0,
                               message="right-hand side overflow",
                               flags={"outcome": "diverged"})
        rep = _frozen_shifted_solve(ef, mesh, rhs, prob.shift_xi_hat, u,
                                    inner_tol)
        if not rep.converged:
            # inner failures happen when the iterates blow up; classify by
            # whether they already left the admissible range
            out = "diverged" if rep.u.max() > prob.cap else "stalled"
            return SolveReport(rep.u, False, np.inf, k, 0.0,
                               message=f"inner solve failed: {rep.message}",
                               flags={"outcome": out})
        step = float(np.abs(rep.u.values - u.values).max())
        monotone_violation = max(monotone_violation,
                                 float((u.values - rep.u.values).max()))
        u = rep.u
        if u.max() > prob.cap or not u.is_finite():
            return SolveReport(u, False, np.inf, k + 1, 0.0,
                               message="iterates exceeded the cap",
                               flags={"outcome": "diverged"})
        if step <= prob.tol:
            spec = prob.exact_spec()
            polish = solve_newton(spec, u, tol=prob.tol)
            if polish.converged and (
                    float(np.abs(polish.u.values - u.values).max())
                    <= 100 * prob.tol):
                u = polish.u
            r = assemble_residual(spec, u)
            return SolveReport(
                u, True, float(np.abs(r).max()), k + 1,
                energy_eval(spec, u),
                flags={"outcome": "converged",
                       "monotone_violation": monotone_violation})
    return SolveReport(u, False, np.inf, prob.max_iter, 0.0,
                       message="max_iter without convergence or divergence",
                       flags={"outcome": "stalled"})


def _path_reparametrize(path, n_path):
    """Re-space the polyline by arc length in the nodal sup metric."""
    d = np.concatenate(
        [[0.0], np.abs(np.diff(path, axis=0)).max(axis=1)])
    t = np.cumsum(d)
    if t[-1] == 0:
        return path
    t /= t[-1]
    tt = np.linspace(0.0, 1.0, n_path)
    out = np.empty((n_path, path.shape[1]))
    for j in range(path.shape[1]):
        out[:, j] = np.interp(tt, t, path[:, j])
    out[0] = path[0]
    out[-1] = path[-1]
    return out


def mountain_pass(prob, u0, n_path=21, tol=None, max_sweeps=2000):
    """Second solution above u0, via a discretized mountain-pass search.

    Works with the functional whose reaction is truncated below at u0; a
    piecewise-linear path from u0 to a low-energy endpoint is pulled down at
    its maximal-energy point until that point sits on a critical point.
    """
    if tol is None:
        tol = prob.tol
    ef, mesh = prob.ef, prob.mesh
    base = SingularBase(ef, prob.reaction, prob.lam)
    vspec = EnergySpec(ef, truncation=truncate_reaction(u0, None, base))
    v0 = energy_eval(vspec, u0)

    # endpoint with energy below the local minimum (guaranteed to exist by
    # the superlinear growth of the reaction)
    t = max(1.0, 2.0 * u0.sup_norm())
    e = None
    for _ in range(60):
        cand = GridFunction.constant(mesh, t)
        if energy_eval(vspec, cand) < v0 - 1.0:
            e = cand
            break
        t *= 2.0
    if e is None:
        return MountainPassReport(u0, v0, [], False,
                                  message="no low-energy endpoint found")

    path = np.linspace(u0.values, e.values, n_path)
    step0 = 0.05 * float(np.abs(e.values - u0.values).max())
    energies = [energy_eval(vspec, u0.with_values(p)) for p in path]

    for sweep in range(max_sweeps):
        i = int(np.argmax(energies))
        if i == 0:
            return MountainPassReport(
                u0, v0, energies, False,
                message="path collapsed onto the minimal solution")
        if i == n_path - 1:
            i = n_path - 2
        ui = u0.with_values(path[i])
        r = assemble_residual(vspec, ui)
        rn = float(np.abs(r).max())
        if rn <= tol or sweep % 5 == 0:
            polish = solve_newton(vspec, ui, tol=tol)
            cand = polish.u
            if (polish.converged
                    and float(np.abs(cand.values - u0.values).max()) > 10 * tol
                    and np.all(cand.values >= u0.values - 10 * tol)):
                m = energy_eval(vspec, cand)
                return MountainPassReport(cand, m, energies, True)
        # one descent step on the maximal-energy point
        d = -r / max(rn, 1e-30)
        step = step0
        moved = False
        while step > 1e-14:
            trial = path[i] + step * d
            etrial = energy_eval(vspec, u0.with_values(trial))
            if etrial < energies[i]:
                path[i] = trial
                moved = True
                step0 = min(2.0 * step, 0.5 * float(np.abs(e.values - u0.values).max()))
                break
            step *= 0.5
        if not moved:
            step0 = max(step0 * 0.5, 1e-12)
        path = _path_reparametrize(path, n_path)
        energies = [energy_eval(vspec, u0.with_values(p)) for p in path]
    return MountainPassReport(u0.with_values(path[int(np.argmax(energies))]),
                              max(energies), energies, False,
                              message="sweep budget exhausted")


def verify_solution(prob, u, slack=1e-8):
    """Exact-mode residual plus ordering and positivity flags for u."""
    try:
        r = assemble_residual(prob.exact_spec(), u)
        rinf = float(np.abs(r).max())
    except Exception:
        rinf = np.inf
    lower_ok = bool(np.all(u.values >= prob.u_bar.values - slack))
    positive_ok = u.min() > 0
    return VerificationReport(rinf, lower_ok, positive_ok)
