import numpy as np
import pytest

import pqsingular as pq


def benchmark_field(xi=1.0):
    return pq.ExponentField(pq.constant(3), pq.constant(2), pq.constant(0.5),
                            pq.constant(xi), pq.constant(5))


def variable_field():
    """Valid data with genuinely variable exponents."""
    return pq.ExponentField(
        p=pq.affine(3.0, 0.2),
        q=pq.sinusoid(2.0, 0.1, 1.0),
        eta=pq.affine(0.4, 0.1),
        xi=pq.affine(1.0, 0.5),
        r=pq.affine(5.0, 0.3),
    )


@pytest.fixture(scope="session")
def bench_ef():
    return benchmark_field()


@pytest.fixture(scope="session")
def var_ef():
    return variable_field()


@pytest.fixture(scope="session")
def mesh20():
    return pq.build_uniform_mesh(0.0, 1.0, 20)


@pytest.fixture(scope="session")
def mesh50():
    return pq.build_uniform_mesh(0.0, 1.0, 50)


@pytest.fixture(scope="session")
def mesh200():
    return pq.build_uniform_mesh(0.0, 1.0, 200)


@pytest.fixture(scope="session")
def u_bar200(bench_ef, mesh200):
    return pq.solve_pure_singular(bench_ef, mesh200).u_bar


@pytest.fixture(scope="session")
def bench_reaction(bench_ef):
    return pq.power_reaction(bench_ef.r)


@pytest.fixture(scope="session")
def bench_template(bench_ef, mesh200, bench_reaction, u_bar200):
    def template(lam):
        return pq.LambdaProblem(bench_ef, mesh200, bench_reaction, lam,
                                u_bar200)
    return template


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
