import io
import json

import pytest

from pqsingular.cli import run_cli

BASE_CONFIG = """\
[mesh]
a = 0.0
b = 1.0
n_cells = 50

[fields.p]
kind = "constant"
value = 3.0

[fields.q]
kind = "constant"
value = 2.0

[fields.eta]
kind = "constant"
value = 0.5

[fields.xi]
kind = "constant"
value = 1.0

[fields.r]
kind = "constant"
value = 5.0

[reaction]
kind = "power"
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(BASE_CONFIG)
    return str(path)


def _run(argv):
    out = io.StringIO()
    code = run_cli(argv, out=out)
    return code, out.getvalue()


def test_validate_pass(config):
    code, text = _run(["validate", "--config", config])
    assert code == 0
    assert "pass" in text


def test_validate_failure_names_clause(tmp_path):
    bad = BASE_CONFIG.replace('[fields.q]\nkind = "constant"\nvalue = 2.0',
                              '[fields.q]\nkind = "constant"\nvalue = 3.5')
    path = tmp_path / "bad.toml"
    path.write_text(bad)
    code, text = _run(["validate", "--config", str(path)])
    assert code == 2
    assert "q_+<p_-" in text


def test_singular_writes_json(config, tmp_path):
    code, text = _run(["singular", "--config", config,
                       "--output", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "u_singular.json").read_text())
    assert doc["kind"] == "singular"
    assert doc["lambda"] is None
    assert len(doc["nodes"]) == len(doc["values"]) == 51
    assert min(doc["values"]) > 0


def test_solve_writes_minimal_and_second(config, tmp_path):
    code, text = _run(["solve", "--config", config, "--output", str(tmp_path),
                       "--lambda", "0.1", "--second"])
    assert code == 0
    minimal = json.loads((tmp_path / "u_minimal.json").read_text())
    second = json.loads((tmp_path / "u_second.json").read_text())
    assert minimal["kind"] == "minimal"
    assert second["kind"] == "second"
    assert minimal["lambda"] == 0.1
    assert max(second["values"]) > max(minimal["values"])


def test_solve_requires_lambda(config, tmp_path):
    code, _ = _run(["solve", "--config", config, "--output", str(tmp_path)])
    assert code == 65


def test_solve_nonconvergence_exit_code(config, tmp_path):
    code, text = _run(["solve", "--config", config, "--output", str(tmp_path),
                       "--lambda", "0.5"])
    assert code == 3


def test_branch_csv_schema_and_determinism(tmp_path):
    cfg = BASE_CONFIG + "\n[branch]\nlambda_grid = [0.05, 0.1, 0.35]\n"
    path = tmp_path / "run.toml"
    path.write_text(cfg)
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    out1.mkdir()
    out2.mkdir()
    code, _ = _run(["branch", "--config", str(path), "--output", str(out1)])
    assert code == 0
    code, _ = _run(["branch", "--config", str(path), "--output", str(out2)])
    assert code == 0
    csv1 = (out1 / "branch.csv").read_bytes()
    assert csv1 == (out2 / "branch.csv").read_bytes()
    lines = csv1.decode().strip().splitlines()
    assert lines[0] == "lambda,outcome,sup_value,min_value,energy,residual"
    assert len(lines) == 4
    assert "inadmissible" in lines[3]


def test_json_round_trip_precision(config, tmp_path):
    import numpy as np

    code, _ = _run(["singular", "--config", config, "--output", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "u_singular.json").read_text())
    import pqsingular as pq

    mesh = pq.build_uniform_mesh(0.0, 1.0, 50)
    ef = pq.ExponentField(pq.constant(3), pq.constant(2), pq.constant(0.5),
                          pq.constant(1), pq.constant(5))
    sol = pq.solve_pure_singular(ef, mesh)
    np.testing.assert_array_equal(np.array(doc["values"]), sol.u_bar.values)


def test_lambda_star_output(tmp_path):
    cfg = BASE_CONFIG + "\n[lambda_star]\nlo = 0.05\nhi = 0.4\n"
    cfg += "\n[solver]\ntol_lambda = 1e-3\n"
    path = tmp_path / "run.toml"
    path.write_text(cfg)
    code, text = _run(["lambda-star", "--config", str(path)])
    assert code == 0
    est = float(text.split("lambda_star_estimate: ")[1].splitlines()[0])
    assert abs(est - 0.29038988210485767) < 0.01 * 0.29038988210485767


def test_usage_errors():
    code, _ = _run(["bogus"])
    assert code == 64
    code, _ = _run(["solve", "--config", "x.toml", "--bogus-flag"])
    assert code == 64


def test_malformed_config(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[mesh\na = 0")
    code, _ = _run(["validate", "--config", str(path)])
    assert code == 65
    missing = tmp_path / "nope.toml"
    code, _ = _run(["validate", "--config", str(missing)])
    assert code == 65
    incomplete = tmp_path / "incomplete.toml"
    incomplete.write_text("[mesh]\na = 0.0\nb = 1.0\n")
    code, _ = _run(["validate", "--config", str(incomplete)])
    assert code == 65
