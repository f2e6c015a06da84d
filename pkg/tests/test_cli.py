import json
import shutil

import pytest

from gmmp.cli import main, run, RunOptions
from gmmp.problem import load_problem

from conftest import problem_path


def _json(tmp_path, *args):
    out = tmp_path / "out.json"
    code = main([*args, "--json", str(out), "--quiet"])
    return code, (json.loads(out.read_text()) if code == 0 else None)


def test_resolve_command(tmp_path):
    code, d = _json(tmp_path, "resolve", problem_path("M_I.prob"))
    assert code == 0
    assert [sum(s.values()) for s in d["betti"]] == [1, 6, 8, 3]
    assert d["ext1_dim"] is None


def test_ext_command_on_mj(tmp_path):
    code, d = _json(tmp_path, "ext", problem_path("M_J.prob"))
    assert code == 0 and d["ext1_dim"] == 22


def test_hull_command_reproduces_restricted_run(tmp_path):
    code, d = _json(tmp_path, "hull", problem_path("M_I.prob"), "--order", "5", "--restrict",
                    "22,23,24", "--fixture-basis", problem_path("basis24.fix"))
    assert code == 0
    assert d["relations"] == ["t1^2", "t1*t2", "t2^2 - t1*t3"]
    assert d["stabilized"] is True and d["order"] == 5


def test_schema_keys(tmp_path):
    code, d = _json(tmp_path, "versal", problem_path("xy.prob"))
    assert code == 0
    for k in ("betti", "ext1_dim", "ext2_dim", "cup_census", "relations", "versal_ideal",
              "stabilized", "order", "timing"):
        assert k in d
    assert d["versal_ideal"] == ["x^2*t1 + y^2*t2 + x*y"]


def test_cup_table_text(capsys):
    assert main(["cup-table", problem_path("M_I_restricted.prob")]) == 0
    out = capsys.readouterr().out
    assert "300 total, 79 identically zero, 205 cohomologically zero, 16 nonzero" in out
    assert "v22*v22 = w12" in out


def test_monomial_order_flag(tmp_path):
    code, d = _json(tmp_path, "ext", problem_path("M_I.prob"), "--monomial-order", "lex")
    assert code == 0 and (d["ext1_dim"], d["ext2_dim"]) == (24, 33)


@pytest.mark.parametrize("body,code", [
    ("ring x y\nmodule cyclic\n  x*y +\nend\n", 3),
    ("ring x y\nmodule cyclic\n  x*y + x\nend\n", 4),
    ("ring x y\nmodule cyclic\n  1\nend\n", 4),
])
def test_exit_codes(tmp_path, body, code):
    f = tmp_path / "p.prob"
    f.write_text(body)
    assert main(["resolve", str(f)]) == code


def test_usage_exit_codes(tmp_path):
    assert main(["frobnicate", problem_path("xy.prob")]) == 2
    assert main(["resolve", str(tmp_path / "missing.prob")]) == 2
    assert main(["hull", problem_path("M_I_restricted.prob"), "--restrict", "22,99"]) == 4


def test_bad_fixture_exit_code(tmp_path):
    src = open(problem_path("basis24.fix")).read().replace("x0*x3^3, x2*x3^3", "x1*x3^3, x2*x3^3", 1)
    f = tmp_path / "bad.fix"
    f.write_text(src)
    assert main(["ext", problem_path("M_I.prob"), "--fixture-basis", str(f)]) == 4


def test_reports_are_deterministic(tmp_path):
    P = load_problem(problem_path("M_I_restricted.prob"))
    a = run("hull", P).json_text(timing=False)
    b = run("hull", load_problem(problem_path("M_I_restricted.prob"))).json_text(timing=False)
    assert a == b


def test_reports_match_across_hash_seeds(tmp_path):
    import os
    import subprocess
    import sys
    outs = []
    for seed in ("1", "977"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        out = tmp_path / f"r{seed}.json"
        subprocess.run([sys.executable, "-m", "gmmp.cli", "versal", problem_path("M_I_restricted.prob"),
                        "--json", str(out), "--quiet"], check=True, env=env)
        d = json.loads(out.read_text())
        d.pop("timing")
        outs.append(json.dumps(d, sort_keys=True))
    assert outs[0] == outs[1]
