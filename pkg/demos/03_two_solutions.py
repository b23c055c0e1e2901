"""Two positive solutions at a fixed parameter value.

Below the critical parameter the problem has a minimal solution (monotone
iteration from the singular subsolution u_bar) and a second, larger one
(discretized mountain pass over the truncated functional).
"""

import numpy as np

import pqsingular as pq

mesh = pq.build_uniform_mesh(0.0, 1.0, 200)
ef = pq.ExponentField(pq.constant(3.0), pq.constant(2.0), pq.constant(0.5),
                      pq.constant(1.0), pq.constant(5.0))
reaction = pq.power_reaction(ef.r)

u_bar = pq.solve_pure_singular(ef, mesh).u_bar
prob = pq.LambdaProblem(ef, mesh, reaction, lam=0.1, u_bar=u_bar)
print("shift xi_hat used by the monotone iteration:", prob.shift_xi_hat)

rep = pq.minimal_solution_iterate(prob)
print(f"minimal solution: sup = {rep.u.max():.12f} "
      f"({rep.iterations} iterations, residual {rep.residual_inf:.2e})")

mp = pq.mountain_pass(prob, rep.u)
print(f"second solution:  sup = {mp.u_hat.max():.12f} "
      f"(mountain pass level {mp.m_level:.6f})")

# both are genuine solutions of the untruncated equation
for name, u in [("minimal", rep.u), ("second", mp.u_hat)]:
    ver = pq.verify_solution(prob, u)
    print(f"{name}: residual {ver.residual_inf:.2e}, "
          f"above u_bar: {ver.lower_bound_ok}, positive: {ver.positive_ok}")

# the ordering u_bar <= u_minimal <= u_second holds nodewise
print("ordering holds:",
      bool(np.all(u_bar.values <= rep.u.values + 1e-12)
           and np.all(rep.u.values <= mp.u_hat.values + 1e-12)))

# for constant data the discrete solutions sit on the scalar roots of
# u^2 = u^{-1/2} + lambda u^4; compare against scipy's root finder
from scipy.optimize import brentq

h = lambda u: u ** 2.5 - 0.1 * u ** 4.5 - 1.0
print("scalar roots:", brentq(h, 1e-6, 2.0), brentq(h, 2.0, 10.0))
