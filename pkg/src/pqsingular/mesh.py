"""1D interval mesh with P1 elements and 2-point Gauss quadrature."""

import numpy as np

__all__ = [
    "Mesh",
    "GridFunction",
    "ConeReport",
    "build_uniform_mesh",
    "integrate_qp",
    "eval_with_gradient",
    "cone_check",
]

# 2-point Gauss on the reference cell [-1, 1]: points +-1/sqrt(3), weights 1
_G = 1.0 / np.sqrt(3.0)


class Mesh:
    """Partition of [a, b] into cells with per-cell Gauss quadrature.

    Arrays are read-only after construction; instances are safe to share.
    """

    def __init__(self, nodes):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise ValueError("mesh needs at least 2 nodes")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("mesh nodes must be strictly increasing")
        self.nodes = nodes
        self.a = float(nodes[0])
        self.b = float(nodes[-1])
        self.n_cells = len(nodes) - 1
        self.h = np.diff(nodes)
        mid = 0.5 * (nodes[:-1] + nodes[1:])
        # quadrature points/weights, shape (n_cells, 2)
        self.quad_points = np.stack(
            [mid - 0.5 * self.h * _G, mid + 0.5 * self.h * _G], axis=1
        )
        self.quad_weights = np.repeat((0.5 * self.h)[:, None], 2, axis=1)
        # local P1 basis at the quadrature points (same on every cell)
        self.phi_left = np.array([0.5 * (1 + _G), 0.5 * (1 - _G)])
        self.phi_right = np.array([0.5 * (1 - _G), 0.5 * (1 + _G)])
        for arr in (self.nodes, self.h, self.quad_points, self.quad_weights,
                    self.phi_left, self.phi_right):
            arr.setflags(write=False)

    @property
    def n_nodes(self):
        return self.n_cells + 1

    def __repr__(self):
        return f"Mesh(a={self.a}, b={self.b}, n_cells={self.n_cells})"


class GridFunction:
    """Piecewise-linear function given by its nodal values on a Mesh."""

    def __init__(self, mesh, values):
        values = np.array(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise ValueError(
                f"expected {mesh.n_nodes} nodal values, got {values.shape}"
            )
        self.mesh = mesh
        self.values = values
        self.values.setflags(write=False)

    @classmethod
    def constant(cls, mesh, c):
        return cls(mesh, np.full(mesh.n_nodes, float(c)))

    @classmethod
    def from_callable(cls, mesh, fn):
        return cls(mesh, np.asarray(fn(mesh.nodes), dtype=float))

    def values_qp(self):
        """Interpolated values at the quadrature points, shape (n_cells, 2)."""
        m = self.mesh
        left, right = self.values[:-1], self.values[1:]
        return left[:, None] * m.phi_left + right[:, None] * m.phi_right

    def slopes(self):
        """Per-cell derivative (constant on each cell), shape (n_cells,)."""
        return np.diff(self.values) / self.mesh.h

    def with_values(self, values):
        return GridFunction(self.mesh, values)

    def min(self):
        return float(self.values.min())

    def max(self):
        return float(self.values.max())

    def sup_norm(self):
        return float(np.abs(self.values).max())

    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))

    def __repr__(self):
        return (f"GridFunction(n={self.mesh.n_nodes}, "
                f"min={self.values.min():g}, max={self.values.max():g})")


class ConeReport:
    """Result of a positivity-cone membership check."""

    def __init__(self, nonnegative, interior_positive, min_value):
        self.nonnegative = bool(nonnegative)
        self.interior_positive = bool(interior_positive)
        self.min_value = float(min_value)

    def __repr__(self):
        return (f"ConeReport(nonnegative={self.nonnegative}, "
                f"interior_positive={self.interior_positive}, "
                f"min_value={self.min_value:g})")


def build_uniform_mesh(a, b, n_cells):
    """Uniform mesh of [a, b] with n_cells cells."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if n_cells < 1:
        raise ValueError("n_cells must be >= 1")
    return Mesh(np.linspace(a, b, n_cells + 1))


def integrate_qp(mesh, integrand):
    """Quadrature sum of per-quadrature-point values."""
    integrand = np.asarray(integrand, dtype=float)
    if integrand.size != mesh.quad_weights.size:
        raise ValueError(
            f"integrand has {integrand.size} entries, expected "
            f"{mesh.quad_weights.size}"
        )
    return float(np.sum(mesh.quad_weights * integrand.reshape(mesh.quad_weights.shape)))


def eval_with_gradient(u):
    """Values and derivatives of u at the quadrature points.

    Returns (values, derivatives), both shaped (n_cells, 2); the derivative
    is the cell slope, repeated at both points of the cell.
    """
    vals = u.values_qp()
    grads = np.repeat(u.slopes()[:, None], 2, axis=1)
    return vals, grads


def cone_check(u, tol=1e-12):
    """Discrete nonnegativity / strict-interior-positivity check."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    m = u.min()
    return ConeReport(m >= -tol, m > tol, m)
