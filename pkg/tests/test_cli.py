import csv
import io
import json
import random
import shutil

import pytest

from exactreach.cli import main
from exactreach.generators import slow_lure
from exactreach.modelfile import format_model
from exactreach.pipeline import ResultStatus, RunOptions, run

from conftest import MODELS

M2 = str(MODELS / "m2.mdp")
M5 = str(MODELS / "m5.mdp")


def test_run_m2(m2):
    r = run(m2, "max", "goal")
    assert r.status is ResultStatus.EXACT
    assert r.values[0] == 0.5 and r.pivots == 0 and r.scheduler_optimal
    r = run(m2, "min", "goal")
    assert r.values[0] * 3 == 1 and r.pivots == 0


def test_forced_non_apt_scheduler(m5):
    loop = next(j for j in m5.mdp.enabled(0) if m5.mdp.transitions[j].action == "c")
    r = run(m5, "max", "goal", RunOptions(scheduler_override={0: loop}))
    assert r.status is ResultStatus.SCHEDULER_NOT_APT
    assert r.values == ()


def test_check_text(capsys):
    assert main(["check", M2, "--objective", "max", "--target", "goal"]) == 0
    out = capsys.readouterr().out
    assert "s0: 1/2 (0.5)" in out and "pivots: 0" in out and "status: exact" in out


def test_check_json(capsys):
    assert main(["check", M2, "--objective", "min", "--target", "goal", "--format", "json",
                 "--no-timings"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "exact" and doc["pivots"] == 0 and doc["scheduler_optimal"]
    assert doc["values"][0] == {"state": 0, "num": "1", "den": "3", "approx": pytest.approx(1 / 3)}
    assert set(doc["timings"]) == {"value_iteration_s", "lp_construction_s", "simplex_s", "total_s"}
    assert all(v == 0 for v in doc["timings"].values())


def test_check_pivot_log(capsys):
    assert main(["check", M5, "--objective", "max", "--target", "goal", "--start-basis", "default",
                 "--simplex", "primal", "--pivot-log"]) == 0
    err = capsys.readouterr().err
    assert err and all(" enter=" in line for line in err.splitlines())


def test_check_errors(tmp_path, capsys):
    assert main(["check", M2, "--objective", "max", "--target", "nope"]) == 2
    bad = tmp_path / "bad.mdp"
    bad.write_text("mdp\nstates 1\ntransitions\n0 a 0:1/2\n")
    assert main(["check", str(bad), "--objective", "max", "--target", "goal"]) == 2
    assert "line 4" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.mdp"), "--objective", "max", "--target", "g"]) == 2


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_cartesian_product(tmp_path, capsys):
    shutil.copy(M2, tmp_path / "m2.mdp")
    assert main(["bench", str(tmp_path), "--objective", "max", "--target", "goal", "--csv", "-"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert {(r["variant"], r["start_basis"]) for r in rows} == {
        (v, b) for v in ("dual", "primal") for b in ("scheduler", "default")
    }
    assert all(r["status"] == "exact" for r in rows)


def test_bench_empty_dir(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["bench", str(tmp_path), "--objective", "max", "--target", "goal",
                 "--csv", str(out)]) == 0
    assert out.read_text().strip().split(",")[0] == "model"
    assert len(out.read_text().splitlines()) == 1


def test_bench_epsilon_sweep(tmp_path, capsys):
    model = slow_lure(random.Random(3), gadgets=3)
    (tmp_path / "lure.mdp").write_text(format_model(model.mdp, model.labels))
    assert main(["bench", str(tmp_path), "--objective", "max", "--target", "goal", "--epsilon",
                 "0.1,1e-6", "--simplex", "dual", "--start-basis", "scheduler", "--csv", "-"]) == 0
    rows = {float(r["epsilon"]): int(r["pivots"]) for r in _rows(capsys.readouterr().out)}
    assert rows[0.1] > 0 and rows[1e-6] == 0
