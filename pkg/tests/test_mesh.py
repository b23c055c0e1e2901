import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pqsingular as pq


def test_uniform_mesh_basics():
    mesh = pq.build_uniform_mesh(0.0, 1.0, 10)
    assert mesh.n_cells == 10
    assert mesh.n_nodes == 11
    assert mesh.a == 0.0 and mesh.b == 1.0
    np.testing.assert_allclose(mesh.h, 0.1)
    assert mesh.quad_points.shape == (10, 2)
    assert mesh.quad_weights.shape == (10, 2)
    # weights sum to the measure of the interval
    assert mesh.quad_weights.sum() == pytest.approx(1.0, abs=1e-14)


def test_mesh_rejects_bad_input():
    with pytest.raises(ValueError):
        pq.build_uniform_mesh(1.0, 0.0, 10)
    with pytest.raises(ValueError):
        pq.build_uniform_mesh(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        pq.Mesh([0.0, 0.5, 0.5, 1.0])
    with pytest.raises(ValueError):
        pq.Mesh([0.0])


def test_mesh_arrays_read_only():
    mesh = pq.build_uniform_mesh(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        mesh.nodes[0] = 5.0
    u = pq.GridFunction.constant(mesh, 1.0)
    with pytest.raises(ValueError):
        u.values[0] = 2.0


def test_quadrature_exact_for_cubics():
    # 2-point Gauss integrates polynomials of degree <= 3 exactly per cell
    mesh = pq.build_uniform_mesh(0.0, 2.0, 7)
    vals = mesh.quad_points ** 3
    assert pq.integrate_qp(mesh, vals) == pytest.approx(4.0, rel=1e-14)


def test_integrate_qp_shape_check(mesh20):
    with pytest.raises(ValueError):
        pq.integrate_qp(mesh20, np.ones(3))


def test_values_qp_interpolates_linear_exactly():
    mesh = pq.build_uniform_mesh(-1.0, 3.0, 9)
    u = pq.GridFunction.from_callable(mesh, lambda z: 2.0 * z - 0.5)
    np.testing.assert_allclose(u.values_qp(), 2.0 * mesh.quad_points - 0.5,
                               rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(u.slopes(), 2.0, rtol=1e-14)


def test_eval_with_gradient_shapes(mesh20):
    u = pq.GridFunction.from_callable(mesh20, np.sin)
    vals, grads = pq.eval_with_gradient(u)
    assert vals.shape == (20, 2)
    assert grads.shape == (20, 2)
    # both quadrature points of a cell see the same slope
    np.testing.assert_array_equal(grads[:, 0], grads[:, 1])


def test_grid_function_validation(mesh20):
    with pytest.raises(ValueError):
        pq.GridFunction(mesh20, np.zeros(7))


def test_cone_check(mesh20):
    u = pq.GridFunction.constant(mesh20, 0.3)
    rep = pq.cone_check(u)
    assert rep.nonnegative and rep.interior_positive
    assert rep.min_value == pytest.approx(0.3)
    v = u.with_values(u.values - 0.3)
    rep = pq.cone_check(v)
    assert rep.nonnegative and not rep.interior_positive
    w = u.with_values(u.values - 1.0)
    assert not pq.cone_check(w).nonnegative
    with pytest.raises(ValueError):
        pq.cone_check(u, tol=-1.0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=30),
       st.floats(-5, 5), st.floats(0.1, 5))
def test_integration_matches_trapezoid_for_p1(vals, a, h):
    # a P1 function is integrated exactly, so quadrature equals trapezoid
    mesh = pq.Mesh(a + h * np.arange(len(vals)))
    u = pq.GridFunction(mesh, vals)
    exact = np.trapezoid(u.values, mesh.nodes)
    got = pq.integrate_qp(mesh, u.values_qp())
    assert got == pytest.approx(exact, rel=1e-12, abs=1e-12)
