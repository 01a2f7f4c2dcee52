import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from pqa.cli import main, run_text
from pqa.problem import OPS, SchemaError, parse_problem
from pqa.report import Report, Table, emit_report, parse_json_report

SAMPLES = Path(__file__).resolve().parent.parent / "docs" / "samples"

MINIMAL = {"prime": 2, "ring": {"kind": "p_stanley_reisner", "vars": ["x", "y"], "gens": [[1, 1, 1]]},
           "command": {"op": "min-primes"}}


def dump(d):
    return json.dumps(d)


def test_minimal_file_parses():
    prob = parse_problem(dump(MINIMAL))
    assert prob.prime == 2 and prob.op == "min-primes" and prob.ring_kind == "p_stanley_reisner"


def test_string_integers_are_accepted():
    d = json.loads(dump(MINIMAL))
    d["prime"] = "2"
    d["ring"]["gens"] = [["1", "1", "1"]]
    assert parse_problem(dump(d)).ring == parse_problem(dump(MINIMAL)).ring


def test_missing_prime():
    d = {k: v for k, v in MINIMAL.items() if k != "prime"}
    with pytest.raises(SchemaError) as ei:
        parse_problem(dump(d))
    assert any("prime required" in m for m in ei.value.errors)


def test_wrong_generator_length_names_the_index():
    d = json.loads(dump(MINIMAL))
    d["ring"]["gens"] = [[1, 1, 1], [1, 1]]
    with pytest.raises(SchemaError) as ei:
        parse_problem(dump(d))
    assert any("generator 1" in m and "expected 3" in m for m in ei.value.errors)


def test_all_errors_are_collected():
    d = {"ring": {"kind": "nope"}, "command": {"op": "fly"}}
    with pytest.raises(SchemaError) as ei:
        parse_problem(dump(d))
    assert len(ei.value.errors) >= 3


def test_invalid_json_is_a_schema_error():
    with pytest.raises(SchemaError):
        parse_problem("{not json")


@pytest.mark.parametrize("path", sorted(p.name for p in SAMPLES.glob("*.json")))
def test_samples_run_in_every_format(path):
    if path == "pinched_veronese.json":
        pytest.skip("covered by the acceptance suite")
    text = (SAMPLES / path).read_text()
    md = run_text(text)
    assert "## Provenance" in md
    j = run_text(text, fmt="json")
    rep = parse_json_report(j)
    assert emit_report(rep, "json") == j
    header = next(csv.reader(io.StringIO(run_text(text, fmt="csv"))))
    assert header == list(rep.tables[0].columns)


def _sr_file(op, **command):
    return dump({"prime": 2, "ring": {"kind": "p_stanley_reisner", "vars": ["x", "y"],
                                      "gens": [[2, 1, 0], [0, 1, 1]]},
                 "command": {"op": op, **command}})


def _sg_file(op, gens, **command):
    return dump({"prime": 2, "ring": {"kind": "p_semigroup", "vars": ["x"], "gens": gens},
                 "command": {"op": op, **command}})


def test_membership_and_radical():
    rows = parse_json_report(run_text(_sr_file("membership", elements=[[5, 1, 1], [1, 1, 0]]), fmt="json")).tables[0].rows
    assert [r[1] for r in rows] == ["true", "false"]
    out = run_text(_sr_file("radical"))
    assert "p*x" in out and "x*y" in out


def test_classify_lists_components():
    rep = parse_json_report(run_text(_sr_file("classify"), fmt="json"))
    assert len(rep.tables[0].rows) == 2


def test_max_ideal_and_normalize_on_semigroups():
    rep = parse_json_report(run_text(_sg_file("max-ideal", [[0, 2], [0, 3]]), fmt="json"))
    assert rep.tables[0].rows == (("p",), ("x^2",), ("x^3",))
    rep = parse_json_report(run_text(_sg_file("normalize", [[0, 2], [0, 3]]), fmt="json"))
    assert "Z_(2)[x]" in json.dumps(rep.to_dict())


def test_quasilength_op():
    text = _sg_file("quasilength", [[0, 1]], sequence=[[1, 0], [0, 1]], t=[2, 2])
    rep = parse_json_report(run_text(text, fmt="json"))
    row = dict(zip(rep.tables[0].columns, rep.tables[0].rows[0]))
    assert (row["lower"], row["upper"], row["exact"], row["certified"]) == ("4", "4", "true", "true")
    assert len(rep.tables[1].rows) == 4


def test_content_csv_has_one_row_per_grid_point():
    text = _sg_file("content", [[0, 1]], sequence=[[1, 0], [0, 1]], grid=2)
    rows = list(csv.reader(io.StringIO(run_text(text, fmt="csv"))))
    assert rows[0] == ["t", "lower", "upper", "exact", "normalized"]
    assert len(rows) == 5


def test_empty_results_give_a_header_only_csv():
    out = run_text(_sr_file("membership", elements=[]), fmt="csv")
    assert out.splitlines() == ["element,in ideal"]


def test_toric_ops():
    text = (SAMPLES / "toric_example.json").read_text()
    assert "realized: true" in run_text(text, "toric-realize")
    assert "valid: true" in run_text(text, "toric-validate")
    out = run_text((SAMPLES / "toric_multiply.json").read_text())
    assert "p^2*x^2*y^5" in out


def test_report_json_round_trip():
    r = Report("membership", (("op", "membership"),), (Table("t", ("a", "b"), (("1", "2"),)),),
               (("library version", "0"),), None, ("n",))
    assert Report.from_dict(json.loads(emit_report(r, "json"))) == r
    assert parse_json_report(emit_report(r, "json")) == r


def test_every_op_is_dispatched():
    from pqa.cli import DISPATCH
    assert set(DISPATCH) == set(OPS)


def test_wrong_ring_kind_is_an_operation_error(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(_sg_file("min-primes", [[0, 1]]))
    assert main(["run", "--input", str(f)]) == 3


def test_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(dump(MINIMAL))
    out = tmp_path / "out.md"
    assert main(["run", "-i", str(good), "--out", str(out)]) == 0
    assert "minimal primes" in out.read_text()
    bad = tmp_path / "bad.json"
    bad.write_text(dump({k: v for k, v in MINIMAL.items() if k != "prime"}))
    assert main(["run", "-i", str(bad)]) == 2
    assert "prime required" in capsys.readouterr().err
    assert main(["run", "-i", str(tmp_path / "missing.json")]) == 2
    assert main(["run", "-i", str(good), "--budget", "0"]) == 2
    unit = tmp_path / "unit.json"
    unit.write_text(dump({"prime": 2, "ring": {"kind": "p_stanley_reisner", "vars": ["x"], "gens": [[0, 0]]},
                          "command": {"op": "min-primes"}}))
    assert main(["run", "-i", str(unit)]) == 3


def test_op_on_command_line_overrides_the_file(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text(_sr_file("min-primes"))
    assert main(["radical", "-i", str(f), "-f", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["op"] == "radical"


def test_inconclusive_verdict_still_exits_zero(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(dump({"prime": 2, "ring": {"kind": "p_stanley_reisner", "vars": ["x", "y"], "gens": [[1, 1, 1]]},
                       "command": {"op": "content", "sequence": [[1, 1, 0], [0, 0, 1]], "grid": 2}}))
    assert main(["run", "-i", str(f)]) == 0


def _cli(args, env_extra):
    env = dict(os.environ, **env_extra)
    return subprocess.run([sys.executable, "-m", "pqa.cli", *args], capture_output=True, env=env, check=True).stdout


def test_output_bytes_are_identical_across_runs_threads_and_backends():
    path = str(SAMPLES / "content_px.json")
    outs = {_cli(["run", "-i", path], {"PQA_THREADS": th, "PQA_NUMBA": nb})
            for th in ("1", "4") for nb in ("0", "1")}
    assert len(outs) == 1


def test_pure_python_backend_is_selectable():
    code = "from pqa import _accel; print(_accel.backend())"
    env = dict(os.environ, PQA_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, env=env, text=True, check=True).stdout
    assert out.strip() == "python"
