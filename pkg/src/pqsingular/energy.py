"""Discrete energies, weak-form residuals, Jacobians, and descent solvers.

Everything is assembled on P1 elements with the Neumann condition imposed
variationally (no boundary rows are modified).
"""

import numpy as np
from scipy.linalg import solve_banded

from .mesh import GridFunction, eval_with_gradient, integrate_qp

__all__ = [
    "DomainError",
    "EnergySpec",
    "TruncatedReaction",
    "SingularBase",
    "SolveReport",
    "Tridiag",
    "truncate_reaction",
    "energy_eval",
    "assemble_residual",
    "assemble_jacobian",
    "minimize_energy",
    "solve_newton",
    "gradient_check",
]


class DomainError(ValueError):
    """The singular term was evaluated at a nonpositive point."""


class SolveReport:
    """Outcome of a nonlinear solve."""

    def __init__(self, u, converged, residual_inf, iterations, energy,
                 message="", flags=None):
        self.u = u
        self.converged = bool(converged)
        self.residual_inf = float(residual_inf)
        self.iterations = int(iterations)
        self.energy = float(energy)
        self.message = message
        self.flags = dict(flags or {})

    def __repr__(self):
        status = "converged" if self.converged else "failed"
        return (f"SolveReport({status}, residual={self.residual_inf:.3e}, "
                f"iterations={self.iterations})")


class SingularBase:
    """The untruncated right-hand side x -> x^{-eta(z)} + lam f(z, x)."""

    def __init__(self, ef, reaction=None, lam=0.0):
        self.ef = ef
        self.reaction = reaction
        self.lam = float(lam)

    def value(self, mesh, x):
        s = self.ef.on(mesh)
        if np.any(x <= 0):
            raise DomainError("singular right-hand side needs x > 0")
        out = x ** (-s.eta)
        if self.reaction is not None and self.lam != 0.0:
            out = out + self.lam * self.reaction.f(mesh.quad_points, x)
        return out

    def derivative(self, mesh, x):
        s = self.ef.on(mesh)
        out = -s.eta * x ** (-s.eta - 1.0)
        if self.reaction is not None and self.lam != 0.0:
            out = out + self.lam * self.reaction.df(mesh.quad_points, x)
        return out

    def primitive(self, mesh, x):
        """Integral of the base from 0 to x (finite at 0 despite the pole)."""
        s = self.ef.on(mesh)
        xp = np.maximum(x, 0.0)
        out = xp ** (1.0 - s.eta) / (1.0 - s.eta)
        if self.reaction is not None and self.lam != 0.0:
            out = out + self.lam * self.reaction.F(mesh.quad_points, xp)
        return out


class TruncatedReaction:
    """Right-hand side clamped to [lower(z), upper(z)]; constant outside."""

    def __init__(self, lower, upper, base):
        if lower is not None and upper is not None:
            if np.any(lower.values > upper.values):
                raise ValueError("truncation bounds must satisfy lower <= upper")
        self.lower = lower
        self.upper = upper
        self.base = base

    def _bounds_qp(self, mesh):
        lo = self.lower.values_qp() if self.lower is not None else None
        hi = self.upper.values_qp() if self.upper is not None else None
        return lo, hi

    def _clamp(self, mesh, x):
        lo, hi = self._bounds_qp(mesh)
        c = np.asarray(x, dtype=float)
        if lo is not None:
            c = np.maximum(c, lo)
        if hi is not None:
            c = np.minimum(c, hi)
        return c, lo, hi

    def value(self, mesh, x):
        c, _, _ = self._clamp(mesh, x)
        return self.base.value(mesh, c)

    def derivative(self, mesh, x):
        _, lo, hi = self._clamp(mesh, x)
        inside = np.ones_like(np.asarray(x, dtype=float), dtype=bool)
        if lo is not None:
            inside &= x > lo
        if hi is not None:
            inside &= x < hi
        out = np.zeros_like(np.asarray(x, dtype=float))
        if np.any(inside):
            der = self.base.derivative(mesh, np.where(inside, x, 1.0))
            out = np.where(inside, der, 0.0)
        return out

    def primitive(self, mesh, x):
        lo, hi = self._bounds_qp(mesh)
        x = np.asarray(x, dtype=float)
        if lo is None:
            # untruncated below: the base primitive itself
            B = self.base.primitive(mesh, np.minimum(x, hi) if hi is not None else x)
            if hi is not None:
                bhi = self.base.value(mesh, hi)
                B = np.where(x > hi, B + bhi * (x - hi), B)
            return B
        blo = self.base.value(mesh, lo)
        Plo = self.base.primitive(mesh, lo)
        mid = np.clip(x, lo, hi) if hi is not None else np.maximum(x, lo)
        B = np.where(x <= lo,
                     blo * x,
                     blo * lo + self.base.primitive(mesh, mid) - Plo)
        if hi is not None:
            bhi = self.base.value(mesh, hi)
            Bhi = blo * lo + self.base.primitive(mesh, hi) - Plo
            B = np.where(x > hi, Bhi + bhi * (x - hi), B)
        return B


def truncate_reaction(lower, upper, base):
    """Clamp a right-hand side between two grid functions (either optional)."""
    return TruncatedReaction(lower, upper, base)


class EnergySpec:
    """Which terms enter the energy / residual, and with which data.

    singular_mode is one of 'none', 'exact', 'regularized', 'frozen'; a
    truncation, when present, replaces the singular and reaction terms
    entirely. xi_shift adds a constant to the potential (used by the shifted
    monotone iteration). frozen mode takes either (frozen_g, eps) or a
    precomputed per-quadrature right-hand side frozen_rhs.
    """

    def __init__(self, ef, reaction=None, lam=0.0, singular_mode="none",
                 eps=None, frozen_g=None, frozen_rhs=None, truncation=None,
                 xi_shift=0.0):
        if singular_mode not in ("none", "exact", "regularized", "frozen"):
            raise ValueError(f"unknown singular_mode {singular_mode!r}")
        if singular_mode == "regularized":
            if eps is None or not 0 < eps <= 1:
                raise ValueError("regularized mode requires eps in (0, 1]")
        if singular_mode == "frozen":
            if frozen_rhs is None:
                if frozen_g is None or eps is None:
                    raise ValueError("frozen mode requires (frozen_g, eps) "
                                     "or frozen_rhs")
                if np.any(frozen_g.values < 0):
                    raise ValueError("frozen g must be nonnegative nodewise")
        if lam < 0:
            raise ValueError("lambda must be >= 0")
        self.ef = ef
        self.reaction = reaction
        self.lam = float(lam)
        self.singular_mode = singular_mode
        self.eps = None if eps is None else float(eps)
        self.frozen_g = frozen_g
        self.frozen_rhs = frozen_rhs
        self.truncation = truncation
        self.xi_shift = float(xi_shift)

    def _frozen_rhs_qp(self, mesh):
        if self.frozen_rhs is not None:
            return np.asarray(self.frozen_rhs, dtype=float)
        s = self.ef.on(mesh)
        return (self.frozen_g.values_qp() + self.eps) ** (-s.eta)


def _sing_terms(spec, mesh, uq, want_S, want_rhs, want_drhs):
    """(S, rhs, drhs) at the quadrature points for the configured mode."""
    s = spec.ef.on(mesh)
    zq = mesh.quad_points
    S = rhs = drhs = None
    zero = np.zeros_like(uq)

    if spec.truncation is not None:
        tr = spec.truncation
        S = tr.primitive(mesh, uq) if want_S else None
        rhs = tr.value(mesh, uq) if want_rhs else None
        drhs = tr.derivative(mesh, uq) if want_drhs else None
        return S, rhs, drhs

    mode = spec.singular_mode
    if mode == "none":
        S, rhs, drhs = zero.copy(), zero.copy(), zero.copy()
    elif mode == "exact":
        if want_rhs or want_drhs:
            if np.any(uq <= 0):
                raise DomainError("exact mode requires u > 0 at all "
                                  "quadrature points")
        up = np.maximum(uq, 0.0)
        if want_S:
            S = up ** (1.0 - s.eta) / (1.0 - s.eta)
        if want_rhs:
            rhs = uq ** (-s.eta)
        if want_drhs:
            drhs = -s.eta * uq ** (-s.eta - 1.0)
    elif mode == "regularized":
        eps = spec.eps
        up = np.maximum(uq, 0.0)
        if want_S:
            S = np.where(
                uq >= 0,
                ((up + eps) ** (1.0 - s.eta) - eps ** (1.0 - s.eta)) / (1.0 - s.eta),
                eps ** (-s.eta) * uq,
            )
        if want_rhs:
            rhs = (up + eps) ** (-s.eta)
        if want_drhs:
            drhs = np.where(uq > 0, -s.eta * (up + eps) ** (-s.eta - 1.0), 0.0)
    else:  # frozen
        rhs0 = spec._frozen_rhs_qp(mesh)
        if want_S:
            S = rhs0 * uq
        if want_rhs:
            rhs = rhs0.copy() if rhs0.shape == uq.shape else np.broadcast_to(rhs0, uq.shape).copy()
        if want_drhs:
            drhs = zero.copy()

    if spec.reaction is not None and spec.lam != 0.0:
        if want_S:
            S = S + spec.lam * spec.reaction.F(zq, np.maximum(uq, 0.0))
        if want_rhs:
            rhs = rhs + spec.lam * spec.reaction.f(zq, uq)
        if want_drhs:
            drhs = drhs + spec.lam * spec.reaction.df(zq, uq)
    return S, rhs, drhs


def _energy_raw(spec, u):
    mesh = u.mesh
    s = spec.ef.on(mesh)
    uq, du = eval_with_gradient(u)
    with np.errstate(over="ignore", invalid="ignore"):
        S, _, _ = _sing_terms(spec, mesh, uq, True, False, False)
        dens = (np.abs(du) ** s.p / s.p
                + np.abs(du) ** s.q / s.q
                + (s.xi + spec.xi_shift) * np.abs(uq) ** s.p / s.p
                - S)
        val = np.sum(mesh.quad_weights * dens)
    return float(val)


def energy_eval(spec, u):
    """Value of the configured discrete energy at u."""
    val = _energy_raw(spec, u)
    if not np.isfinite(val):
        raise ValueError("energy overflowed (iterate too large)")
    return val


def assemble_residual(spec, u):
    """Nodal gradient of the energy: <V(u), phi_i> - int rhs(z, u) phi_i dz."""
    mesh = u.mesh
    s = spec.ef.on(mesh)
    uq, du = eval_with_gradient(u)
    _, rhs, _ = _sing_terms(spec, mesh, uq, False, True, False)

    sigma = (np.sign(du) * np.abs(du) ** (s.p - 1.0)
             + np.sign(du) * np.abs(du) ** (s.q - 1.0))
    mass = (s.xi + spec.xi_shift) * np.sign(uq) * np.abs(uq) ** (s.p - 1.0) - rhs

    w = mesh.quad_weights
    r = np.zeros(mesh.n_nodes)
    flux = np.sum(w * sigma, axis=1) / mesh.h
    np.add.at(r, np.arange(mesh.n_cells), -flux)
    np.add.at(r, np.arange(1, mesh.n_nodes), flux)
    r[:-1] += np.sum(w * mass * mesh.phi_left, axis=1)
    r[1:] += np.sum(w * mass * mesh.phi_right, axis=1)
    return r


class Tridiag:
    """Symmetric tridiagonal matrix with a banded solver."""

    def __init__(self, diag, off):
        self.diag = np.asarray(diag, dtype=float)
        self.off = np.asarray(off, dtype=float)

    def solve(self, b):
        n = len(self.diag)
        ab = np.zeros((3, n))
        ab[0, 1:] = self.off
        ab[1, :] = self.diag
        ab[2, :-1] = self.off
        return solve_banded((1, 1), ab, b)

    def to_dense(self):
        return (np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1))

    def matvec(self, x):
        y = self.diag * x
        y[:-1] += self.off * x[1:]
        y[1:] += self.off * x[:-1]
        return y


def assemble_jacobian(spec, u, regularization_delta=1e-8):
    """Tridiagonal derivative of the residual.

    The degenerate gradient and potential powers are smoothed with
    (t^2 + delta^2)^((p-2)/2) inside the linearization only; the residual
    itself uses exact powers.
    """
    mesh = u.mesh
    s = spec.ef.on(mesh)
    d2 = regularization_delta ** 2
    uq, du = eval_with_gradient(u)
    _, _, drhs = _sing_terms(spec, mesh, uq, False, False, True)

    dsigma = ((s.p - 1.0) * (du ** 2 + d2) ** ((s.p - 2.0) / 2.0)
              + (s.q - 1.0) * (du ** 2 + d2) ** ((s.q - 2.0) / 2.0))
    dmass = ((s.xi + spec.xi_shift) * (s.p - 1.0)
             * (uq ** 2 + d2) ** ((s.p - 2.0) / 2.0) - drhs)

    w = mesh.quad_weights
    K = np.sum(w * dsigma, axis=1) / mesh.h ** 2
    mLL = np.sum(w * dmass * mesh.phi_left ** 2, axis=1)
    mRR = np.sum(w * dmass * mesh.phi_right ** 2, axis=1)
    mLR = np.sum(w * dmass * mesh.phi_left * mesh.phi_right, axis=1)

    diag = np.zeros(mesh.n_nodes)
    diag[:-1] += K + mLL
    diag[1:] += K + mRR
    off = -K + mLR
    return Tridiag(diag, off)


def _energy_or_inf(spec, u):
    """Energy with infeasible iterates (overflow, exact-mode u <= 0) as +inf."""
    if spec.singular_mode == "exact" and u.values_qp().min() <= 0:
        return np.inf
    if spec.truncation is not None and spec.truncation.lower is None:
        if u.values_qp().min() <= 0:
            return np.inf
    val = _energy_raw(spec, u)
    return val if np.isfinite(val) else np.inf


def minimize_energy(spec, u0, tol=1e-10, max_iter=200,
                    regularization_delta=1e-8):
    """Damped Newton descent on the configured energy.

    Falls back to gradient steps when the Newton direction is unusable;
    accepted steps never increase the energy.
    """
    u = u0
    e = _energy_or_inf(spec, u)
    if not np.isfinite(e):
        raise ValueError("initial guess is infeasible for this energy")
    r = assemble_residual(spec, u)
    rn = float(np.abs(r).max())
    for it in range(max_iter):
        if rn <= tol:
            return SolveReport(u, True, rn, it, e)
        step = None
        try:
            d = assemble_jacobian(spec, u, regularization_delta).solve(-r)
            if np.all(np.isfinite(d)) and float(r @ d) < 0:
                step = d
        except Exception:
            step = None
        if step is None:
            scale = max(1.0, rn)
            step = -r / scale
        slope = float(r @ step)
        t = 1.0
        accepted = False
        for _ in range(60):
            trial = u.with_values(u.values + t * step)
            et = _energy_or_inf(spec, trial)
            if et <= e + 1e-4 * t * slope:
                u, e = trial, et
                accepted = True
                break
            # near the minimum the energy decrease drops below round-off;
            # fall back to accepting residual-norm decrease instead
            if rn <= 1e-6 and np.isfinite(et):
                rt = float(np.abs(assemble_residual(spec, trial)).max())
                if rt <= (1.0 - 1e-4 * t) * rn:
                    u, e = trial, et
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            return SolveReport(u, False, rn, it + 1, e,
                               message="line search failed")
        r = assemble_residual(spec, u)
        rn = float(np.abs(r).max())
    converged = rn <= tol
    return SolveReport(u, converged, rn, max_iter, e,
                       message="" if converged else "max_iter exceeded")


def solve_newton(spec, u0, tol=1e-10, max_iter=100,
                 regularization_delta=1e-8):
    """Undamped Newton on the residual with residual-norm backtracking.

    Unlike minimize_energy this also converges to saddle points, which is
    what the mountain-pass polish needs.
    """
    u = u0
    r = assemble_residual(spec, u)
    rn = float(np.abs(r).max())
    for it in range(max_iter):
        if rn <= tol:
            return SolveReport(u, True, rn, it, _energy_raw(spec, u))
        try:
            d = assemble_jacobian(spec, u, regularization_delta).solve(-r)
        except Exception:
            return SolveReport(u, False, rn, it, _energy_raw(spec, u),
                               message="singular Jacobian")
        if not np.all(np.isfinite(d)):
            return SolveReport(u, False, rn, it, _energy_raw(spec, u),
                               message="non-finite Newton step")
        t = 1.0
        accepted = False
        for _ in range(40):
            trial = u.with_values(u.values + t * d)
            try:
                rt = assemble_residual(spec, trial)
            except DomainError:
                t *= 0.5
                continue
            rtn = float(np.abs(rt).max())
            if np.isfinite(rtn) and rtn < rn:
                u, r, rn = trial, rt, rtn
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return SolveReport(u, False, rn, it + 1, _energy_raw(spec, u),
                               message="backtracking stalled")
    converged = rn <= tol
    return SolveReport(u, converged, rn, max_iter, _energy_raw(spec, u),
                       message="" if converged else "max_iter exceeded")


def gradient_check(spec, u, h=None):
    """Scaled max deviation of the residual from central energy differences."""
    if h is None:
        h = 1e-6 * (1.0 + u.sup_norm())
    r = assemble_residual(spec, u)
    fd = np.zeros_like(r)
    vals = u.values
    for i in range(len(vals)):
        vp, vm = vals.copy(), vals.copy()
        vp[i] += h
        vm[i] -= h
        fd[i] = (_energy_raw(spec, u.with_values(vp))
                 - _energy_raw(spec, u.with_values(vm))) / (2.0 * h)
    return float(np.abs(fd - r).max() / max(1.0, np.abs(r).max()))
