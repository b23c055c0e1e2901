"""Modular functionals and Luxemburg norms on variable-exponent spaces."""

import numpy as np

from .mesh import integrate_qp, eval_with_gradient

__all__ = [
    "ModularConfig",
    "modular",
    "luxemburg_norm",
    "prop1_probe",
    "Prop1Report",
    "norm_equivalence_probe",
    "sobolev_norm",
]


class ModularConfig:
    """Exponent (and optional weight) defining a modular functional."""

    def __init__(self, exponent, weight=None, bisection_tol=1e-12,
                 max_bisection_iter=200):
        self.exponent = exponent
        self.weight = weight
        self.bisection_tol = float(bisection_tol)
        self.max_bisection_iter = int(max_bisection_iter)

    def sample(self, mesh):
        zq = mesh.quad_points
        expo = np.asarray(self.exponent(zq), dtype=float)
        if not np.all(expo > 1):
            raise ValueError("modular exponent must exceed 1 at all samples")
        if self.weight is None:
            w = np.ones_like(expo)
        else:
            w = np.asarray(self.weight(zq), dtype=float)
            if not np.all(w > 0):
                raise ValueError("modular weight must be positive")
        return expo, w


def _modular_qp(mesh, vals_qp, expo_qp, weight_qp):
    return integrate_qp(mesh, weight_qp * np.abs(vals_qp) ** expo_qp)


def _luxemburg_qp(mesh, vals_qp, expo_qp, weight_qp, tol, max_iter):
    """Unique lam > 0 with modular(vals/lam) = 1, by bracketing + bisection.

    The modular is strictly decreasing in lam, so bisection is safe.
    """
    scale = float(np.abs(vals_qp).max())
    if scale == 0.0:
        return 0.0
    lo, hi = scale * 2.0 ** -60, scale * 2.0 ** 60
    if _modular_qp(mesh, vals_qp / lo, expo_qp, weight_qp) < 1:
        return lo
    if _modular_qp(mesh, vals_qp / hi, expo_qp, weight_qp) > 1:
        raise RuntimeError("Luxemburg bracket failed: modular stays above 1")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if _modular_qp(mesh, vals_qp / mid, expo_qp, weight_qp) > 1:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, lo):
            return 0.5 * (lo + hi)
    raise RuntimeError("Luxemburg bisection did not converge "
                       f"within {max_iter} iterations")


def modular(u, cfg):
    """Integral of weight(z) |u|^{exponent(z)}."""
    expo, w = cfg.sample(u.mesh)
    return _modular_qp(u.mesh, u.values_qp(), expo, w)


def luxemburg_norm(u, cfg):
    """Luxemburg norm of u under cfg; zero function maps to 0."""
    expo, w = cfg.sample(u.mesh)
    return _luxemburg_qp(u.mesh, u.values_qp(), expo, w,
                         cfg.bisection_tol, cfg.max_bisection_iter)


class Prop1Report:
    """Norm/modular relations of a single sample."""

    def __init__(self, norm, modular_value, r_minus, r_plus, slack):
        self.norm = norm
        self.modular = modular_value
        self.r_minus = r_minus
        self.r_plus = r_plus
        # sign of (norm - 1) agrees with sign of (modular - 1)
        self.sign_consistent = (
            abs(norm - 1.0) <= slack and abs(modular_value - 1.0) <= slack
        ) or (norm - 1.0) * (modular_value - 1.0) > 0
        if norm < 1.0:
            lo, hi = norm ** r_plus, norm ** r_minus
        else:
            lo, hi = norm ** r_minus, norm ** r_plus
        # slack scales with the endpoint magnitudes (round-off in norm**r
        # grows with the value itself)
        self.sandwich_ok = (lo - slack * max(1.0, lo)
                            <= modular_value
                            <= hi + slack * max(1.0, hi))
        self.ok = self.sign_consistent and self.sandwich_ok


def prop1_probe(u, cfg):
    """Check the sign agreement and sandwich inequalities for one u != 0."""
    expo, w = cfg.sample(u.mesh)
    vals = u.values_qp()
    if np.abs(vals).max() == 0.0:
        raise ValueError("prop1_probe requires u != 0")
    nrm = _luxemburg_qp(u.mesh, vals, expo, w,
                        cfg.bisection_tol, cfg.max_bisection_iter)
    rho = _modular_qp(u.mesh, vals, expo, w)
    slack = max(cfg.bisection_tol * 1e3, 1e-9)
    return Prop1Report(nrm, rho, float(expo.min()), float(expo.max()), slack)


def sobolev_norm(u, ef):
    """||u||_{p(z)} + ||Du||_{p(z)} on the mesh of u."""
    s = ef.on(u.mesh)
    vals, grads = eval_with_gradient(u)
    ones = np.ones_like(s.p)
    tol, it = 1e-12, 200
    nu = _luxemburg_qp(u.mesh, vals, s.p, ones, tol, it)
    ndu = _luxemburg_qp(u.mesh, grads, s.p, ones, tol, it)
    return nu + ndu


def _weighted_gradient_norm(u, ef):
    """||Du||_{p(z)} + ||u||_{L^{p(z)}(xi)} -- the alternative norm."""
    s = ef.on(u.mesh)
    vals, grads = eval_with_gradient(u)
    ones = np.ones_like(s.p)
    tol, it = 1e-12, 200
    ndu = _luxemburg_qp(u.mesh, grads, s.p, ones, tol, it)
    nxi = _luxemburg_qp(u.mesh, vals, s.p, s.xi, tol, it)
    return ndu + nxi


def norm_equivalence_probe(samples, ef):
    """Extremes of |u| / ||u|| over nonzero samples.

    Both must be finite and positive for the two norms to be equivalent.
    """
    if not samples:
        raise ValueError("need a nonempty sample list")
    ratios = []
    for u in samples:
        denom = sobolev_norm(u, ef)
        if denom == 0.0:
            raise ValueError("zero-norm sample in norm_equivalence_probe")
        ratios.append(_weighted_gradient_norm(u, ef) / denom)
    return float(min(ratios)), float(max(ratios))
