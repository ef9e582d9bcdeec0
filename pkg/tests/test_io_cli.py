import io as stdio
import json
import subprocess
import sys

import pytest

from procalloc import io
from procalloc.cli import main
from procalloc.kvip import ApInstance, KvipInstance
from procalloc.mediator import TRACE_COLUMNS
from procalloc.models import (
    INF,
    Constant,
    ConstantK,
    EvenSplit,
    Grid,
    ImpulseTrain,
    Job,
    LinearKTN,
    PiecewiseConstant,
    PowerLaw,
    StepToInfinity,
    Table,
    ThresholdUtility,
)

from conftest import saturating_scenario

SEVEN = {"W": 5, "Kprime": 7, "items": [[[2, 3], [4, 5]], [[3, 4]]]}
EX2 = {
    "job": {
        "id": "J2",
        "rt": {"type": "power_law", "t1": 100, "t_inf": 0, "alpha": 0.5},
        "utility": {"type": "step", "K": 40},
    },
    "coi": {"type": "linear", "k": 1},
}


def run(argv):
    out = stdio.StringIO()
    rc = main(argv, out)
    return rc, out.getvalue()


def write(tmp_path, name, d):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


JOBS = (
    Job("a", EvenSplit(100), Constant(INF)),
    Job("b", PowerLaw(100, 10, 0.5), StepToInfinity(40)),
    Job(7, Table((10, 6, 5, 5)), PiecewiseConstant(((1.0, 2.0), (5.0, 0.5)))),
    Job("d", Table((9,)), ImpulseTrain(((3.0, 1.5), (9.0, INF)))),
    Job("e", PowerLaw(50, 0, 0.7), ThresholdUtility(1.0, 0.7, 50.0, 0.0)),
)


@pytest.mark.parametrize("job", JOBS, ids=lambda j: str(j.id))
def test_job_round_trip(job):
    d = io.job_to_dict(job)
    assert io.job_from_dict(json.loads(io.dumps(d))) == job


@pytest.mark.parametrize(
    "coi", [LinearKTN(2.5), ConstantK(INF), Grid(((5.0, 2, 3.0), (6.0, 3, INF)))], ids=str
)
def test_coi_round_trip(coi):
    assert io.coi_from_dict(json.loads(io.dumps(io.coi_to_dict(coi)))) == coi


def test_instance_round_trips():
    k = io.kvip_from_dict(SEVEN)
    assert k == KvipInstance(5, 7, (((2, 3), (4, 5)), ((3, 4),)))
    assert io.kvip_from_dict(json.loads(io.dumps(io.kvip_to_dict(k)))) == k
    ap = ApInstance(4, 3.5, JOBS[:3], LinearKTN(1), n_cap=6)
    assert io.ap_from_dict(json.loads(io.dumps(io.ap_to_dict(ap)))) == ap
    sc = saturating_scenario(3, k_max=2.0)
    assert io.scenario_from_dict(json.loads(io.dumps(io.scenario_to_dict(sc)))) == sc


@pytest.mark.parametrize(
    "d, path",
    [
        ({"W": 5, "items": []}, "kvip.Kprime"),
        ({"W": 5, "Kprime": 1, "items": [[[2.5, 1]]]}, "kvip.items[0][0]"),
        ({"W": 5, "Kprime": 1, "items": [[[-1, 1]]]}, "kvip.items[0][0]"),
        ({"W": 5, "Kprime": 1, "items": [[[1, "lots"]]]}, "kvip.items[0][0]"),
        ({"W": "5", "Kprime": 1, "items": []}, "kvip.W"),
    ],
)
def test_kvip_schema_errors_name_field(d, path):
    with pytest.raises(io.SchemaError) as e:
        io.kvip_from_dict(d)
    assert e.value.path == path


def test_nested_schema_errors_name_field():
    bad = dict(EX2, job=dict(EX2["job"], rt={"type": "power_law", "t1": 100, "t_inf": 0, "alpha": 2}))
    with pytest.raises(io.SchemaError) as e:
        io.job_from_dict(bad["job"], "nstar.job")
    assert e.value.path == "nstar.job.rt"
    sc = io.scenario_to_dict(saturating_scenario(2))
    sc["arrivals"][1][0]["id"] = "r0j0"
    with pytest.raises(io.SchemaError) as e:
        io.scenario_from_dict(sc)
    assert e.value.path == "scenario.arrivals[1][0].id"
    sc["arrivals"][1][0]["id"] = "fresh"
    sc["controller"]["target_load"] = 1.5
    with pytest.raises(io.SchemaError) as e:
        io.scenario_from_dict(sc)
    assert e.value.path == "scenario.controller"
    with pytest.raises(io.SchemaError) as e:
        io.utility_from_dict({"type": "sigmoid"}, "u")
    assert e.value.path == "u.type"


def test_cli_kvip(tmp_path):
    rc, out = run(["kvip", "--file", write(tmp_path, "k.json", SEVEN)])
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "value=7" and lines[1].startswith("decision=yes")
    assert lines[3].split() == ["0", "1", "2", "3"]
    assert lines[4].split() == ["1", "1", "3", "4"]
    rc, out = run(["kvip", "--file", write(tmp_path, "k.json", SEVEN), "--output", "csv"])
    assert out.splitlines()[2:] == ["item,version,weight,value", "0,1,2,3", "1,1,3,4"]


def test_cli_nstar(tmp_path):
    f = write(tmp_path, "n.json", EX2)
    assert run(["nstar", "--file", f, "--cap", "20"]) == (0, "{0..7}\n")
    assert run(["nstar", "--file", f, "--cap", "5"]) == (0, "{0..5}\n")


def test_cli_solve(tmp_path):
    ap = {
        "MAXN": 3,
        "K": 11,
        "coi": {"type": "linear", "k": 1},
        "jobs": [
            {"id": "A", "rt": {"type": "table", "values": [4, 3]}, "utility": {"type": "constant", "a": 2}},
            {"id": "B", "rt": {"type": "table", "values": [5]}, "utility": {"type": "constant", "a": 1}},
        ],
    }
    rc, out = run(["solve", "--file", write(tmp_path, "ap.json", ap)])
    assert rc == 0 and "revenue=11 used=3/3 decision=yes" in out
    rc, out = run(["solve", "--file", write(tmp_path, "ap.json", ap), "--output", "csv"])
    assert out.splitlines() == ["job_id,granted_n,cost", "A,2,6", "B,1,5"]


def test_cli_simulate(tmp_path):
    f = write(tmp_path, "s.json", io.scenario_to_dict(saturating_scenario(4)))
    rc, first = run(["simulate", "--file", f])
    assert rc == 0 and first.splitlines()[0] == ",".join(TRACE_COLUMNS)
    assert run(["simulate", "--file", f]) == (0, first)
    rc, table = run(["simulate", "--file", f, "--output", "table"])
    assert rc == 0 and len(table.splitlines()) == 5


def test_cli_examples():
    rc, out = run(["examples"])
    assert rc == 0
    assert [ln.split()[0] for ln in out.splitlines()[:4]] == ["PASS"] * 4
    assert "ex2 20/20 agree, ex4 20/20 agree" in out
    assert run(["examples", "--seed", "3"])[0] == 0


def test_cli_validation_errors(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"W": 5, "items": []})
    assert run(["kvip", "--file", bad])[0] == 1
    assert "kvip.Kprime" in capsys.readouterr().err
    assert run(["kvip", "--file", str(tmp_path / "missing.json")])[0] == 1
    (tmp_path / "junk.json").write_text("{nope")
    assert run(["solve", "--file", str(tmp_path / "junk.json")])[0] == 1
    assert "invalid JSON" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv", [[], ["frobnicate"], ["kvip"], ["examples", "--bogus"], ["kvip", "--file", "x", "--output", "xml"]]
)
def test_cli_usage_errors(argv):
    with pytest.raises(SystemExit) as e:
        main(argv, stdio.StringIO())
    assert e.value.code == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "procalloc", "examples"], capture_output=True, text=True
    )
    assert res.returncode == 0 and res.stdout.count("PASS") == 4
