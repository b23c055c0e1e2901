"""Variable exponents and potential (p, q, eta, xi, r) with structural checks.

The coefficient functions must accept numpy arrays of sample coordinates.
"""

import math

import numpy as np

__all__ = [
    "ExponentField",
    "SampledExponents",
    "ValidationReport",
    "constant",
    "affine",
    "sinusoid",
    "field_bounds",
    "critical_exponent",
    "validate_h0_h1i",
]


def constant(c):
    c = float(c)
    return lambda z: np.full_like(np.asarray(z, dtype=float), c)


def affine(c0, c1):
    c0, c1 = float(c0), float(c1)
    return lambda z: c0 + c1 * np.asarray(z, dtype=float)


def sinusoid(base, amp, freq):
    base, amp, freq = float(base), float(amp), float(freq)
    return lambda z: base + amp * np.sin(2.0 * np.pi * freq * np.asarray(z, dtype=float))


class SampledExponents:
    """Coefficient values at the quadrature points of one mesh."""

    def __init__(self, mesh, ef):
        zq = mesh.quad_points
        self.p = np.asarray(ef.p(zq), dtype=float)
        self.q = np.asarray(ef.q(zq), dtype=float)
        self.eta = np.asarray(ef.eta(zq), dtype=float)
        self.xi = np.asarray(ef.xi(zq), dtype=float)
        self.r = np.asarray(ef.r(zq), dtype=float)
        for arr in (self.p, self.q, self.eta, self.xi, self.r):
            arr.setflags(write=False)


class ExponentField:
    """The data (p, q, eta, xi, r) of the problem, as functions of z."""

    def __init__(self, p, q, eta, xi, r):
        self.p = p
        self.q = q
        self.eta = eta
        self.xi = xi
        self.r = r
        self._samples = {}

    def on(self, mesh):
        """Per-quadrature samples on a mesh (cached by mesh identity)."""
        key = id(mesh)
        if key not in self._samples:
            self._samples[key] = (mesh, SampledExponents(mesh, self))
        return self._samples[key][1]

    def with_xi_shift(self, shift):
        """Same field with potential xi(z) + shift (used by shifted solves)."""
        xi = self.xi
        return ExponentField(self.p, self.q, self.eta,
                             lambda z: np.asarray(xi(z), dtype=float) + shift,
                             self.r)


def _sample_points(mesh):
    return np.concatenate([mesh.nodes, mesh.quad_points.ravel()])


def field_bounds(field, mesh):
    """(min, max) of a coefficient over all nodes and quadrature points."""
    vals = np.asarray(field(_sample_points(mesh)), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("field takes non-finite values on the mesh")
    return float(vals.min()), float(vals.max())


def critical_exponent(p_value, dim):
    """Sobolev critical exponent: N p / (N - p) for p < N, else +inf."""
    if p_value <= 1:
        raise ValueError("exponent must exceed 1")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if p_value < dim:
        return dim * p_value / (dim - p_value)
    return math.inf


class ValidationReport:
    def __init__(self, passed, violations):
        self.passed = bool(passed)
        self.violations = list(violations)

    def __repr__(self):
        status = "pass" if self.passed else "fail"
        return f"ValidationReport({status}, violations={self.violations})"


def validate_h0_h1i(ef, mesh, dim=1):
    """Check the exponent orderings and positivity clauses at all samples.

    Failures are reported, not raised; solvers refuse to run on a failed
    report.
    """
    z = _sample_points(mesh)
    p = np.asarray(ef.p(z), dtype=float)
    q = np.asarray(ef.q(z), dtype=float)
    eta = np.asarray(ef.eta(z), dtype=float)
    xi = np.asarray(ef.xi(z), dtype=float)
    r = np.asarray(ef.r(z), dtype=float)

    violations = []
    for name, vals in (("p", p), ("q", q), ("eta", eta), ("xi", xi), ("r", r)):
        if not np.all(np.isfinite(vals)):
            violations.append(f"{name} non-finite")
    if violations:
        return ValidationReport(False, violations)

    q_minus, q_plus = q.min(), q.max()
    p_minus, p_plus = p.min(), p.max()
    r_minus, r_plus = r.min(), r.max()

    if not q_minus > 1:
        violations.append("1<q_-")
    if not q_plus < p_minus:
        violations.append("q_+<p_-")
    if not np.all(eta > 0):
        violations.append("0<eta(z)")
    if not np.all(eta < 1):
        violations.append("eta(z)<1")
    if not np.all(xi > 0):
        violations.append("xi(z)>0")
    if not p_plus < r_minus:
        violations.append("p_+<r_-")
    p_star = np.array([critical_exponent(pv, dim) for pv in p])
    if not np.all(r < p_star):
        violations.append("r_+<p*(z)")
    return ValidationReport(not violations, violations)
