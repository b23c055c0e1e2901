"""Command-line interface: config loading, dispatch, bit-stable exports."""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import exponents
from .continuation import bisect_lambda_star, build_branch
from .exponents import ExponentField, validate_h0_h1i
from .mesh import build_uniform_mesh
from .parametric import (
    LambdaProblem,
    minimal_solution_iterate,
    mountain_pass,
    verify_solution,
)
from .reaction import power_log_reaction, power_reaction
from .singular import RegularizationSchedule, solve_pure_singular

__all__ = ["run_cli", "main"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_USAGE = 64
EXIT_CONFIG = 65


class _UsageError(Exception):
    pass


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _field_from_spec(spec):
    kind = spec.get("kind")
    if kind == "constant":
        return exponents.constant(spec["value"])
    if kind == "affine":
        return exponents.affine(spec["c0"], spec["c1"])
    if kind == "sinusoid":
        return exponents.sinusoid(spec["base"], spec["amp"], spec["freq"])
    raise _ConfigError(f"unknown field kind {kind!r}")


class RunConfig:
    """Deserialized configuration; must pass validation before any solve."""

    def __init__(self, raw):
        try:
            m = raw["mesh"]
            self.mesh = build_uniform_mesh(m["a"], m["b"], m["n_cells"])
            f = raw["fields"]
            self.ef = ExponentField(
                p=_field_from_spec(f["p"]),
                q=_field_from_spec(f["q"]),
                eta=_field_from_spec(f["eta"]),
                xi=_field_from_spec(f["xi"]),
                r=_field_from_spec(f["r"]),
            )
            rx = raw.get("reaction", {"kind": "power"})
            if rx["kind"] == "power":
                self.reaction = power_reaction(self.ef.r)
            elif rx["kind"] == "power_log":
                self.reaction = power_log_reaction(self.ef.p)
            else:
                raise _ConfigError(f"unknown reaction kind {rx['kind']!r}")
            solver = raw.get("solver", {})
            self.tol = float(solver.get("tol", 1e-10))
            self.fixed_point_tol = float(solver.get("fixed_point_tol", 1e-10))
            self.tol_lambda = float(solver.get("tol_lambda", 1e-4))
            self.cap_factor = float(solver.get("cap_factor", 1e6))
            self.max_iter = int(solver.get("max_iter", 2000))
            eps_k_max = int(solver.get("eps_k_max", 20))
            self.schedule = RegularizationSchedule(
                eps_values=[0.5 ** k for k in range(eps_k_max + 1)],
                inner_tol=self.tol,
                fixed_point_tol=self.fixed_point_tol,
            )
            self.raw = raw
        except (KeyError, TypeError, ValueError) as exc:
            raise _ConfigError(str(exc)) from exc

    def solve_singular(self):
        return solve_pure_singular(self.ef, self.mesh, self.schedule)

    def problem(self, lam, u_bar):
        return LambdaProblem(self.ef, self.mesh, self.reaction, lam, u_bar,
                             cap=self.cap_factor * u_bar.sup_norm(),
                             tol=self.tol, max_iter=self.max_iter)


def _load_config(path):
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise _ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise _ConfigError(f"malformed config: {exc}") from exc
    return RunConfig(raw)


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return repr(float(x))


def _write_solution(path, u, lam, kind):
    doc = {
        "nodes": [float(v) for v in u.mesh.nodes],
        "values": [float(v) for v in u.values],
        "lambda": None if lam is None else float(lam),
        "kind": kind,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _cmd_validate(cfg, args, out):
    report = validate_h0_h1i(cfg.ef, cfg.mesh)
    print(f"H_0/H_1(i): {'pass' if report.passed else 'fail'}", file=out)
    for clause in report.violations:
        print(f"violated: {clause}", file=out)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _require_valid(cfg, out):
    report = validate_h0_h1i(cfg.ef, cfg.mesh)
    if not report.passed:
        print("validation failed: " + ", ".join(report.violations), file=out)
        return False
    return True


def _cmd_singular(cfg, args, out):
    if not _require_valid(cfg, out):
        return EXIT_VALIDATION
    try:
        sol = cfg.solve_singular()
    except RuntimeError as exc:
        print(f"solver failed: {exc}", file=out)
        return EXIT_NO_CONVERGENCE
    path = Path(args.output) / "u_singular.json"
    _write_solution(path, sol.u_bar, None, "singular")
    print(f"residual: {_fmt(sol.final_residual)}", file=out)
    print(f"monotonicity_violation: {_fmt(sol.monotonicity_violation)}", file=out)
    print(f"min_value: {_fmt(sol.u_bar.min())}", file=out)
    print(f"sup_value: {_fmt(sol.u_bar.max())}", file=out)
    print(f"wrote {path}", file=out)
    return EXIT_OK


def _cmd_solve(cfg, args, out):
    if not _require_valid(cfg, out):
        return EXIT_VALIDATION
    lam = args.lam
    if lam is None:
        lam = cfg.raw.get("solve", {}).get("lambda")
    if lam is None:
        raise _ConfigError("solve needs --lambda or [solve].lambda")
    lam = float(lam)
    try:
        u_bar = cfg.solve_singular().u_bar
    except RuntimeError as exc:
        print(f"solver failed: {exc}", file=out)
        return EXIT_NO_CONVERGENCE
    prob = cfg.problem(lam, u_bar)
    rep = minimal_solution_iterate(prob)
    if rep.flags.get("outcome") != "converged":
        print(f"no solution found at lambda={_fmt(lam)} "
              f"(outcome: {rep.flags.get('outcome')})", file=out)
        return EXIT_NO_CONVERGENCE
    outdir = Path(args.output)
    _write_solution(outdir / "u_minimal.json", rep.u, lam, "minimal")
    ver = verify_solution(prob, rep.u)
    print(f"lambda: {_fmt(lam)}", file=out)
    print(f"residual: {_fmt(ver.residual_inf)}", file=out)
    print(f"lower_bound_ok: {ver.lower_bound_ok}", file=out)
    print(f"positive_ok: {ver.positive_ok}", file=out)
    print(f"sup_value: {_fmt(rep.u.max())}", file=out)
    if args.second:
        mp = mountain_pass(prob, rep.u)
        if mp.converged:
            _write_solution(outdir / "u_second.json", mp.u_hat, lam, "second")
            print(f"second_sup_value: {_fmt(mp.u_hat.max())}", file=out)
            print(f"mountain_pass_level: {_fmt(mp.m_level)}", file=out)
        else:
            print(f"second solution not found: {mp.message}", file=out)
    return EXIT_OK


def _cmd_branch(cfg, args, out):
    if not _require_valid(cfg, out):
        return EXIT_VALIDATION
    section = cfg.raw.get("branch", {})
    grid = section.get("lambda_grid")
    if grid is None:
        raise _ConfigError("branch needs [branch].lambda_grid")
    try:
        u_bar = cfg.solve_singular().u_bar
    except RuntimeError as exc:
        print(f"solver failed: {exc}", file=out)
        return EXIT_NO_CONVERGENCE
    branch = build_branch(lambda lam: cfg.problem(lam, u_bar), grid,
                          second=args.second or bool(section.get("second")),
                          warm_start=not args.no_warm_start,
                          jobs=args.jobs)
    path = Path(args.output) / "branch.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "outcome", "sup_value", "min_value",
                         "energy", "residual"])
        for pt in branch.points:
            writer.writerow([_fmt(pt.lam), pt.outcome, _fmt(pt.sup_value),
                             _fmt(pt.min_value), _fmt(pt.energy),
                             _fmt(pt.residual)])
    print(f"wrote {path}", file=out)
    print(f"lambda_star_estimate: {_fmt(branch.lambda_star_estimate)}", file=out)
    print(f"prefix_ok: {branch.diagnostics['prefix_ok']}", file=out)
    return EXIT_OK


def _cmd_lambda_star(cfg, args, out):
    if not _require_valid(cfg, out):
        return EXIT_VALIDATION
    section = cfg.raw.get("lambda_star", {})
    lo = float(section.get("lo", 0.01))
    hi = float(section.get("hi", 1.0))
    try:
        u_bar = cfg.solve_singular().u_bar
        result = bisect_lambda_star(lambda lam: cfg.problem(lam, u_bar),
                                    lo, hi, tol_lambda=cfg.tol_lambda)
    except (RuntimeError, ValueError) as exc:
        print(f"solver failed: {exc}", file=out)
        return EXIT_NO_CONVERGENCE
    print(f"lambda_star_estimate: {_fmt(result.estimate)}", file=out)
    print(f"bracket_lo: {_fmt(result.bracket[0])}", file=out)
    print(f"bracket_hi: {_fmt(result.bracket[1])}", file=out)
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "singular": _cmd_singular,
    "solve": _cmd_solve,
    "branch": _cmd_branch,
    "lambda-star": _cmd_lambda_star,
}


def _build_parser():
    parser = _Parser(prog="pqsingular",
                     description="Singular anisotropic (p,q)-Laplacian solver")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--output", default=".")
        if name == "solve":
            p.add_argument("--lambda", dest="lam", type=float, default=None)
            p.add_argument("--second", action="store_true")
        if name == "branch":
            p.add_argument("--second", action="store_true")
            p.add_argument("--jobs", type=int, default=1)
            p.add_argument("--no-warm-start", action="store_true")
    return parser


def run_cli(argv, out=None):
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _load_config(args.config)
        return _COMMANDS[args.command](cfg, args, out)
    except _ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
