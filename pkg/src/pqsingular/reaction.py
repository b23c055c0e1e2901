"""Perturbation terms f(z, x), their primitives, and hypothesis probes.

The probes certify the structural hypotheses on finite sample grids only;
they are samplers, not verifiers.
"""

import numpy as np
from scipy.integrate import quad

__all__ = [
    "Reaction",
    "ShiftEstimate",
    "power_reaction",
    "power_log_reaction",
    "custom_reaction",
    "eval_f_F",
    "ArProbeResult",
    "ar_probe",
    "quasimono_probe",
    "shifted_monotone_probe",
    "mu_hat_estimate",
]


class Reaction:
    """A perturbation x -> f(z, x) with primitive F and x-derivative df.

    f vanishes for x <= 0 by convention; all callables accept numpy arrays.
    """

    def __init__(self, kind, f, F, df, exponent=None, ar_theta=None, ar_M=None):
        self.kind = kind
        self.f = f
        self.F = F
        self.df = df
        self.exponent = exponent
        self.ar_theta = ar_theta
        self.ar_M = ar_M

    def __repr__(self):
        return f"Reaction(kind={self.kind!r})"


class ShiftEstimate:
    """Empirical constants for the shifted-monotonicity hypotheses."""

    def __init__(self, rho, xi_hat, mu_hat):
        if not xi_hat > 0:
            raise ValueError("xi_hat must be positive")
        if any(v <= 0 for v in mu_hat.values()):
            raise ValueError("mu_hat values must be positive")
        self.rho = float(rho)
        self.xi_hat = float(xi_hat)
        self.mu_hat = dict(mu_hat)


def _pos(x):
    return np.maximum(np.asarray(x, dtype=float), 0.0)


def power_reaction(r):
    """f(z, x) = (x+)^{r(z)-1} with primitive (x+)^{r(z)}/r(z)."""

    def f(z, x):
        return _pos(x) ** (np.asarray(r(z), dtype=float) - 1.0)

    def F(z, x):
        rv = np.asarray(r(z), dtype=float)
        return _pos(x) ** rv / rv

    def df(z, x):
        rv = np.asarray(r(z), dtype=float)
        xp = _pos(x)
        return np.where(xp > 0, (rv - 1.0) * xp ** (rv - 2.0), 0.0)

    return Reaction("power", f, F, df, exponent=r, ar_theta=None, ar_M=1.0)


def _quad_primitive(f):
    """Primitive of f(z, .) from 0, by adaptive quadrature, cached per (z, x)."""
    cache = {}

    def F_scalar(z, x):
        if x <= 0.0:
            return 0.0
        key = (float(z), float(x))
        if key not in cache:
            val, _ = quad(lambda s: float(f(z, s)), 0.0, x, limit=200,
                          epsabs=1e-12, epsrel=1e-12)
            cache[key] = val
        return cache[key]

    return np.vectorize(F_scalar, otypes=[float])


def power_log_reaction(p):
    """f(z, x) = (x+)^{p(z)-1} ln(1 + x+); primitive by adaptive quadrature."""

    def f(z, x):
        xp = _pos(x)
        return xp ** (np.asarray(p(z), dtype=float) - 1.0) * np.log1p(xp)

    def df(z, x):
        pv = np.asarray(p(z), dtype=float)
        xp = _pos(x)
        return np.where(
            xp > 0,
            (pv - 1.0) * xp ** (pv - 2.0) * np.log1p(xp) + xp ** (pv - 1.0) / (1.0 + xp),
            0.0,
        )

    return Reaction("power_log", f, _quad_primitive(f), df, exponent=p)


def custom_reaction(f, F=None, df=None):
    """Wrap a user-supplied f; missing F/df fall back to quadrature/differences."""
    if F is None:
        F = _quad_primitive(f)
    if df is None:
        def df(z, x, _f=f):
            h = 1e-6 * (1.0 + np.abs(x))
            return (_f(z, x + h) - _f(z, x - h)) / (2.0 * h)
    return Reaction("custom", f, F, df)


def eval_f_F(reaction, z, x):
    """(f(z, x), F(z, x)) with the x <= 0 convention applied."""
    return reaction.f(z, x), reaction.F(z, x)


class ArProbeResult:
    def __init__(self, holds_on_grid, first_violation):
        self.holds_on_grid = bool(holds_on_grid)
        self.first_violation = first_violation

    def __repr__(self):
        return (f"ArProbeResult(holds={self.holds_on_grid}, "
                f"first_violation={self.first_violation})")


def ar_probe(reaction, theta, M, x_grid, z_samples=(0.5,)):
    """Check 0 < theta F(z, x) <= f(z, x) x on the grid (x >= M)."""
    if theta <= 0 or M <= 0:
        raise ValueError("theta and M must be positive")
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(x_grid < M):
        raise ValueError("grid must lie in [M, inf)")
    for z in z_samples:
        fv = reaction.f(z, x_grid)
        Fv = reaction.F(z, x_grid)
        bad = ~((theta * Fv > 0) & (theta * Fv <= fv * x_grid * (1 + 1e-12)))
        if np.any(bad):
            return ArProbeResult(False, float(x_grid[np.argmax(bad)]))
    return ArProbeResult(True, None)


def quasimono_probe(reaction, lam, ef, mesh, pairs):
    """Largest positive excess of the quasimonotonicity form on (x, y) pairs.

    The form is (1 - p_+/(1-eta(z))) x^{1-eta(z)} + lam [f(z,x)x - p_+ F(z,x)];
    an excess <= 0 means the monotone version of the hypothesis held on all
    sampled pairs, a positive excess is an empirical bound for the allowed
    defect.
    """
    from .exponents import field_bounds

    _, p_plus = field_bounds(ef.p, mesh)

    def form(z, x):
        e = float(ef.eta(np.asarray(z, dtype=float)))
        val = (1.0 - p_plus / (1.0 - e)) * x ** (1.0 - e) if x > 0 else 0.0
        return val + lam * (float(reaction.f(z, x)) * x
                            - p_plus * float(reaction.F(z, x)))

    worst = 0.0
    for z, x, y in pairs:
        if not 0 <= x <= y:
            raise ValueError("pairs must satisfy 0 <= x <= y")
        worst = max(worst, form(z, x) - form(z, y))
    return worst


def shifted_monotone_probe(reaction, ef, rho, xi_hat, x_grid, z_samples=(0.5,)):
    """True iff x -> f(z,x) + xi_hat x^{p(z)-1} is nondecreasing along the grid."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(np.diff(x_grid) <= 0) or np.any(x_grid < 0) or np.any(x_grid > rho):
        raise ValueError("grid must be increasing inside [0, rho]")
    for z in z_samples:
        pv = float(ef.p(np.asarray(z, dtype=float)))
        g = reaction.f(z, x_grid) + xi_hat * x_grid ** (pv - 1.0)
        if np.any(np.diff(g) < -1e-12 * max(1.0, np.abs(g).max())):
            return False
    return True


def mu_hat_estimate(reaction, s, x_grid, z_samples=(0.5,)):
    """min f over the sampled (z, x), x >= s; returns 0.0 if the min is <= 0."""
    if s <= 0:
        raise ValueError("s must be positive")
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(x_grid < s):
        raise ValueError("grid must lie in [s, inf)")
    lo = min(float(np.min(reaction.f(z, x_grid))) for z in z_samples)
    return lo if lo > 0 else 0.0
