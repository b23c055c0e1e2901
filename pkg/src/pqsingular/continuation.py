"""Sweeping lambda: critical-parameter bisection and the minimal branch."""

import numpy as np

from .parametric import (
    LambdaProblem,
    minimal_solution_iterate,
    mountain_pass,
    verify_solution,
)

__all__ = [
    "BranchPoint",
    "Branch",
    "LambdaStarResult",
    "bisect_lambda_star",
    "build_branch",
]


class BranchPoint:
    """One lambda on the sweep grid with its solve outcome."""

    def __init__(self, lam, outcome, u_star=None, u_second=None,
                 energy=np.nan, residual=np.nan):
        self.lam = float(lam)
        self.outcome = outcome  # 'admissible' | 'inadmissible'
        self.u_star = u_star
        self.u_second = u_second
        self.energy = float(energy)
        self.residual = float(residual)
        self.min_value = u_star.min() if u_star is not None else np.nan
        self.sup_value = u_star.max() if u_star is not None else np.nan


class Branch:
    def __init__(self, points, lambda_star_estimate, lambda_star_bracket,
                 diagnostics):
        self.points = list(points)
        self.lambda_star_estimate = (None if lambda_star_estimate is None
                                     else float(lambda_star_estimate))
        self.lambda_star_bracket = lambda_star_bracket
        self.diagnostics = dict(diagnostics)


class LambdaStarResult:
    def __init__(self, estimate, bracket, history, u_at_estimate=None):
        self.estimate = float(estimate)
        self.bracket = (float(bracket[0]), float(bracket[1]))
        self.history = list(history)
        self.u_at_estimate = u_at_estimate


def _outcome(template, lam, u_start=None):
    prob = template(lam)
    rep = minimal_solution_iterate(prob, u_start=u_start)
    return rep.flags.get("outcome", "stalled"), rep, prob


def bisect_lambda_star(template, lo, hi, tol_lambda=1e-4):
    """Bisect the admissible/inadmissible boundary of the lambda interval.

    template maps a lambda value to a LambdaProblem. The caller-supplied lo
    must be admissible; hi is widened by doubling until inadmissible. The
    estimate is the last admissible endpoint (the supremum is attained).
    stalled outcomes are treated as inadmissible and recorded in the history.
    """
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    history = []
    out_lo, rep_lo, _ = _outcome(template, lo)
    history.append((lo, out_lo))
    if out_lo != "converged":
        raise ValueError(f"lo={lo} is not admissible (outcome {out_lo})")
    u_lo = rep_lo.u

    for _ in range(40):
        out_hi, _, _ = _outcome(template, hi)
        history.append((hi, out_hi))
        if out_hi != "converged":
            break
        hi *= 2.0
    else:
        raise RuntimeError("no inadmissible upper bound found")

    while hi - lo > tol_lambda:
        mid = 0.5 * (lo + hi)
        out_mid, rep_mid, _ = _outcome(template, mid, u_start=u_lo)
        history.append((mid, out_mid))
        if out_mid == "converged":
            lo, u_lo = mid, rep_mid.u
        else:
            hi = mid
    return LambdaStarResult(lo, (lo, hi), history, u_at_estimate=u_lo)


def _solve_point(template, lam, u_start, second):
    prob = template(lam)
    if u_start is not None:
        u_start = u_start.with_values(
            np.maximum(u_start.values, prob.u_bar.values))
    try:
        rep = minimal_solution_iterate(prob, u_start=u_start)
    except RuntimeError:
        return BranchPoint(lam, "inadmissible")
    if rep.flags.get("outcome") != "converged":
        return BranchPoint(lam, "inadmissible")
    u_second = None
    if second:
        mp = mountain_pass(prob, rep.u)
        if mp.converged:
            u_second = mp.u_hat
    return BranchPoint(lam, "admissible", rep.u, u_second,
                       energy=rep.energy, residual=rep.residual_inf)


def build_branch(template, lambda_values, second=False, warm_start=True,
                 left_cont_ks=range(3, 9), lambda_star_estimate=None, jobs=1):
    """Solve the minimal branch over an ascending lambda grid.

    Warm starting reuses the previous minimal solution (clamped from below
    by u_bar) as the iteration start, which is legitimate because the branch
    is nondecreasing in lambda. Per-point failures are recorded, never raised.
    jobs > 1 solves points concurrently, but only with warm_start disabled.
    """
    lambda_values = sorted(float(v) for v in lambda_values)
    if any(v <= 0 for v in lambda_values):
        raise ValueError("lambda values must be positive")

    if jobs > 1 and not warm_start:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(
                lambda lam: _solve_point(template, lam, None, second),
                lambda_values))
    else:
        points = []
        prev_u = None
        for lam in lambda_values:
            pt = _solve_point(template, lam,
                              prev_u if warm_start else None, second)
            points.append(pt)
            if pt.outcome == "admissible":
                prev_u = pt.u_star

    admissible = [pt for pt in points if pt.outcome == "admissible"]
    diagnostics = {}

    # interval structure: admissibles must form a prefix of the sorted grid
    outcomes = [pt.outcome for pt in points]
    first_bad = next((i for i, o in enumerate(outcomes) if o == "inadmissible"),
                     len(outcomes))
    diagnostics["prefix_ok"] = all(o == "inadmissible"
                                   for o in outcomes[first_bad:])

    violation = 0.0
    mean_increments = []
    for a, b in zip(admissible, admissible[1:]):
        diff = b.u_star.values - a.u_star.values
        violation = max(violation, float(-diff.min()))
        mean_increments.append(float(diff.mean()))
    diagnostics["monotonicity_violation"] = violation
    diagnostics["mean_increments"] = mean_increments

    gaps = []
    if admissible:
        last = admissible[-1]
        for k in left_cont_ks:
            lam_k = last.lam * (1.0 - 2.0 ** -k)
            # u_hat at the last admissible lambda dominates the fixed point
            # at lam_k, so it is a valid (fast) iteration start
            rep = minimal_solution_iterate(template(lam_k),
                                           u_start=last.u_star)
            if rep.flags.get("outcome") == "converged":
                gaps.append(float(
                    np.abs(rep.u.values - last.u_star.values).max()))
            else:
                gaps.append(np.nan)
    diagnostics["left_continuity_gaps"] = gaps

    if lambda_star_estimate is None and admissible:
        est = admissible[-1].lam
        first_inadm = next((pt.lam for pt in points
                            if pt.outcome == "inadmissible"), np.inf)
        bracket = (est, first_inadm)
    else:
        est = lambda_star_estimate
        bracket = None
    return Branch(points, est, bracket, diagnostics)
