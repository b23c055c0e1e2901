"""Hypothesis validation and variable-exponent norms.

Walks through the structural checks on the problem data and the modular /
Luxemburg machinery the solvers are built on.
"""

import numpy as np

import pqsingular as pq

mesh = pq.build_uniform_mesh(0.0, 1.0, 100)

# the benchmark data: constant exponents, p = 3 > q = 2, singular power 0.5
ef = pq.ExponentField(
    p=pq.constant(3.0),
    q=pq.constant(2.0),
    eta=pq.constant(0.5),
    xi=pq.constant(1.0),
    r=pq.constant(5.0),
)
report = pq.validate_h0_h1i(ef, mesh)
print("benchmark data valid:", report.passed)

# break an ordering on purpose and see the clause named
bad = pq.ExponentField(pq.constant(3.0), pq.constant(3.5), pq.constant(0.5),
                       pq.constant(1.0), pq.constant(5.0))
print("q > p violations:", pq.validate_h0_h1i(bad, mesh).violations)

# the Luxemburg norm generalizes the L^r norm to variable exponents.
# for a constant exponent the two coincide:
cfg3 = pq.ModularConfig(pq.constant(3.0))
u = pq.GridFunction.from_callable(mesh, lambda z: 1.0 + np.sin(4 * z))
classical = pq.modular(u, cfg3) ** (1.0 / 3.0)
print("Luxemburg vs classical L^3:",
      pq.luxemburg_norm(u, cfg3), classical)

# with a variable exponent the norm and modular still control each other
# through the sandwich inequalities
cfg_var = pq.ModularConfig(pq.affine(2.0, 1.0))
probe = pq.prop1_probe(u, cfg_var)
print(f"norm {probe.norm:.6f}, modular {probe.modular:.6f}, "
      f"relations hold: {probe.ok}")

# the two natural Sobolev-type norms are equivalent when xi > 0;
# the ratio stays inside a fixed band over random samples (a variable
# weight makes the band nontrivial)
ef_var = pq.ExponentField(pq.affine(3.0, 0.2), pq.constant(2.0),
                          pq.constant(0.5), pq.affine(0.5, 2.0),
                          pq.constant(5.0))
rng = np.random.default_rng(7)
samples = [pq.GridFunction(mesh, rng.uniform(-2, 2, mesh.n_nodes))
           for _ in range(20)]
lo, hi = pq.norm_equivalence_probe(samples, ef_var)
print(f"norm equivalence band: [{lo:.4f}, {hi:.4f}]")
