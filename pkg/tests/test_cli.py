import json
import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from dualcover import cli
from dualcover.covering import covering_profile, exact_diameter_cover, exact_intrinsic_cover
from dualcover.duality import grid_partition
from dualcover.gallery import example_31
from dualcover.instances import random_kernel, random_operator, random_space
from dualcover.schauder import instance_to_json, schauder_report
from dualcover.semimetric import induced_dA, kernel_to_json, space_to_csv
from dualcover.serialize import to_jsonable

F = Fraction


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    report = json.loads(out) if out.strip() else None
    return code, report, err


@pytest.fixture
def space_file(tmp_path):
    space = random_space(random.Random(5), 7, "graph")
    path = tmp_path / "space.csv"
    path.write_text(space_to_csv(space), encoding="utf-8")
    return space, path


@pytest.fixture
def kernel_file(tmp_path):
    kernel = random_kernel(random.Random(6), 4, 6)
    path = tmp_path / "kernel.json"
    path.write_text(json.dumps(kernel_to_json(kernel)), encoding="utf-8")
    return kernel, path


def test_bounds_golden(capsys):
    code, rep, _ = run(capsys, "bounds", "--C", "1/2", "--delta", "3/8", "--n", "2", "--field", "real")
    assert code == 0
    assert rep["results"] == {"bound": 4}
    assert rep["command"] == "bounds" and rep["exactness"] == "exact-rational"
    code, rep, _ = run(capsys, "bounds", "--C", "1", "--delta", "1/2", "--n", "2", "--field", "complex")
    assert rep["results"] == {"bound": 81}


def test_validate_single_point(capsys, tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("p\n0\n", encoding="utf-8")
    code, rep, _ = run(capsys, "validate", "--space", str(path))
    assert code == 0 and rep["results"]["valid"] is True


def test_validate_failure_names_axiom(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n0,1,3\n1,0,1\n3,1,0\n", encoding="utf-8")
    code, rep, err = run(capsys, "validate", "--space", str(path))
    assert code == 2
    assert "triangle" in err
    assert rep["results"]["valid"] is False


def test_validate_kernel(capsys, kernel_file):
    _, path = kernel_file
    code, rep, _ = run(capsys, "validate", "--kernel", str(path))
    assert code == 0 and rep["results"]["d_A"]["valid"] and rep["results"]["d_B"]["valid"]


def test_cover_matches_library(capsys, space_file):
    space, path = space_file
    eps = space.diameter() / 3
    for kind, fn in (("intrinsic", exact_intrinsic_cover), ("diameter", exact_diameter_cover)):
        code, rep, _ = run(capsys, "cover", "--space", str(path), "--epsilon", str(eps), "--kind", kind)
        assert code == 0
        assert rep["results"] == to_jsonable(fn(space, eps))


def test_profile_matches_library(capsys, space_file):
    space, path = space_file
    code, rep, _ = run(capsys, "profile", "--space", str(path))
    assert code == 0 and rep["results"] == to_jsonable(covering_profile(space))


def test_dual_cover_matches_library(capsys, kernel_file):
    kernel, path = kernel_file
    eps, delta = F(1, 4), F(1, 3)
    net = exact_intrinsic_cover(induced_dA(kernel), eps).certificate
    code, rep, _ = run(capsys, "dual-cover", "--kernel", str(path), "--epsilon", "1/4", "--delta", "1/3")
    assert code == 0
    expected = to_jsonable(grid_partition(kernel, net, delta, eps))
    assert {k: rep["results"][k] for k in expected} == expected
    assert rep["results"]["violations"] == []
    net_arg = ",".join(map(str, net))
    code, again, _ = run(
        capsys, "dual-cover", "--kernel", str(path), "--epsilon", "1/4", "--delta", "1/3", "--net", net_arg
    )
    assert again["results"] == rep["results"]


def test_dual_cover_bad_net(capsys, kernel_file):
    _, path = kernel_file
    code, _, err = run(capsys, "dual-cover", "--kernel", str(path), "--epsilon", "0", "--delta", "1", "--net", "0")
    assert code == 2 and "epsilon-net" in err


def test_schauder_matches_library(capsys, tmp_path):
    inst = random_operator(random.Random(2), max_dim=3)
    path = tmp_path / "op.json"
    path.write_text(json.dumps(instance_to_json(inst)), encoding="utf-8")
    code, rep, _ = run(capsys, "schauder", "--instance", str(path), "--epsilon", "1/2", "--delta", "1/2")
    assert code == 0
    expected = to_jsonable(schauder_report(inst, F(1, 2), F(1, 2)))
    assert {k: rep["results"][k] for k in expected} == expected
    assert rep["results"]["holds"] is True


def test_examples_run_ex31(capsys):
    code, rep, _ = run(capsys, "examples", "run", "--name", "ex31", "--params", "m=2,n=2")
    assert code == 0
    assert rep["results"]["equality"] is True
    assert rep["results"] == to_jsonable(example_31(2, 2))


def test_examples_list(capsys):
    code, rep, _ = run(capsys, "examples", "list")
    names = {item["name"] for item in rep["results"]}
    assert code == 0 and {"l1-identity", "ex31", "ex32", "recenter-cx"} <= names
    assert all(item["description"] for item in rep["results"])


def test_examples_bad_params(capsys):
    code, _, err = run(capsys, "examples", "run", "--name", "ex31", "--params", "m")
    assert code == 64
    code, _, err = run(capsys, "examples", "run", "--name", "l1-identity", "--params", "theta=2")
    assert code == 2


def test_size_cap_exit_code(capsys, tmp_path):
    space = random_space(random.Random(1), 30, "linf")
    path = tmp_path / "big.csv"
    path.write_text(space_to_csv(space), encoding="utf-8")
    code, rep, err = run(capsys, "cover", "--space", str(path), "--epsilon", "1/10")
    assert code == 3 and rep is None and "cap" in err
    code, rep, _ = run(capsys, "cover", "--space", str(path), "--epsilon", "1/10", "--greedy")
    assert code == 0 and rep["results"]["optimal"] is False


def test_usage_errors(capsys):
    assert cli.main(["frobnicate"]) == 64
    assert cli.main([]) == 64
    assert cli.main(["bounds", "--C", "1"]) == 64
    assert cli.main(["bounds", "--C", "1", "--delta", "1", "--n", "1/2"]) == 64
    capsys.readouterr()


def test_float_mode(capsys, tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("a,b\n0,0.5\n0.5,0\n", encoding="utf-8")
    code, _, err = run(capsys, "cover", "--space", str(path), "--epsilon", "1/4")
    assert code == 2
    code, rep, _ = run(capsys, "--float", "cover", "--space", str(path), "--epsilon", "0.5")
    assert code == 0 and rep["exactness"] == "float-approx"
    assert rep["results"]["count"] == 1
    code, rep, _ = run(capsys, "cover", "--float", "--space", str(path), "--epsilon", "0.4")
    assert rep["results"]["count"] == 2 and rep["exactness"] == "float-approx"


def test_missing_file(capsys):
    code, _, err = run(capsys, "profile", "--space", "/nonexistent/x.csv")
    assert code == 2


def test_determinism_and_digest(capsys, space_file):
    _, path = space_file
    reports = [run(capsys, "profile", "--space", str(path))[1] for _ in range(2)]
    for r in reports:
        r.pop("timings")
    assert reports[0] == reports[1]
    assert reports[0]["inputs_digest"] is not None


def test_generate_is_seeded(capsys, tmp_path):
    outs = []
    for _ in range(2):
        code, rep, _ = run(capsys, "generate", "--seed", "42", "--kind", "kernel", "--n", "3")
        assert code == 0
        outs.append(rep["results"])
    assert outs[0] == outs[1]
    path = tmp_path / "g.csv"
    code, rep, _ = run(capsys, "generate", "--seed", "1", "--n", "5", "--out", str(path))
    code, rep, _ = run(capsys, "validate", "--space", str(path))
    assert code == 0


def test_subprocess_entry_point_no_color():
    env = dict(os.environ, NO_COLOR="1")
    proc = subprocess.run(
        [sys.executable, "-m", "dualcover", "bounds", "--C", "1/2", "--delta", "3/8", "--n", "2"],
        capture_output=True,
        text=True,
        env=env,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"] == {"bound": 4}
    bad = subprocess.run(
        [sys.executable, "-m", "dualcover", "bounds", "--C", "x", "--delta", "1", "--n", "1"],
        capture_output=True,
        text=True,
        env=env,
        check=False,
    )
    assert bad.returncode == 2 and "\x1b[" not in bad.stderr
