import json

import numpy as np
import pytest

from coxdeflate import acceptance, cli, rootlat


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result_of(text):
    return json.loads(text)["result"]


def test_diagram_incidence(capsys):
    code, out, _ = run(capsys, "diagram", "incidence", "--q", "2", "--gons", "8")
    assert code == 0
    res = result_of(out)
    assert res["nodes"] == 14 and len(res["gons"]) == 21


def test_diagram_y_and_cycle(capsys):
    code, out, _ = run(capsys, "diagram", "y", "--arms", "3", "3", "3")
    assert code == 0 and result_of(out)["nodes"] == 10
    code, out, _ = run(capsys, "diagram", "named", "cycle", "--n", "8", "--gons", "8")
    assert code == 0 and result_of(out)["gons"] == [list(range(8))]
    code, out, _ = run(capsys, "diagram", "named", "cycle", "--n", "8", "--format", "dot")
    assert out.startswith("graph G {") and out.count("--") == 8


def test_diagram_file_round_trip(capsys, tmp_path):
    from coxdeflate.diagrams import build_named

    path = tmp_path / "p.json"
    path.write_text(build_named("petersen").to_json())
    dot = tmp_path / "p.dot"
    code, out, _ = run(capsys, "diagram", "file", str(path), "--gons", "6", "--dot", str(dot))
    assert code == 0 and len(result_of(out)["gons"]) == 10
    assert dot.read_text().count("--") == 15


def test_closure(capsys):
    code, out, _ = run(capsys, "closure", "y", "--arms", "3", "3", "3", "--n", "8", "--cap", "14")
    assert code == 0
    res = result_of(out)
    assert res["summary"] == "14 nodes, isomorphic to incidence(2): yes, relations: 2 independent"


def test_closure_stretch(capsys):
    code, out, _ = run(capsys, "closure", "y", "--arms", "5", "5", "5", "--n", "12", "--cap", "26")
    assert code == 0
    assert result_of(out)["summary"].startswith("26 nodes, isomorphic to incidence(3): yes")


def test_closure_cap_exit_code(capsys):
    code, _, err = run(capsys, "closure", "y", "--arms", "3", "3", "3", "--n", "8", "--cap", "13")
    assert code == cli.EXIT_CAP
    assert "CapExceededError" in err


def test_identify(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "identify", "y", "--arms", "3", "3", "3", "--certificate", str(cert))
    assert code == 0
    res = result_of(out)
    assert {k: res[k] for k in ("dim", "witt_defect", "nonsingular", "order", "orbit")} == {
        "dim": 8, "witt_defect": 1, "nonsingular": 136, "order": 394813440, "orbit": 136,
    }
    assert json.loads(cert.read_text())["order"] == 394813440


def test_identify_e8(capsys):
    code, out, _ = run(capsys, "identify", "y", "--arms", "4", "2", "1", "--no-closure")
    res = result_of(out)
    assert code == 0 and (res["dim"], res["witt_defect"], res["nonsingular"]) == (8, 0, 120)


def test_identify_without_relations(capsys):
    code, out, _ = run(capsys, "identify", "y", "--arms", "3", "3", "3", "--no-relations")
    assert code == cli.EXIT_DEGENERATE
    assert "radical" in result_of(out)["error"]


@pytest.mark.parametrize(
    "argv,count",
    [
        (["named", "petersen", "--n", "6"], 51840),
        (["named", "cube", "--n", "6"], 51840),
        (["named", "cycle", "--n", "8"], 40320),
        (["named", "cycle", "--n", "4", "--k", "2"], 192),
    ],
)
def test_enumerate(capsys, argv, count):
    code, out, _ = run(capsys, "enumerate", *argv)
    res = result_of(out)
    assert code == 0 and res["cosets"] == count and res["verified"]


def test_enumerate_subgroup_and_table(capsys, tmp_path):
    table = tmp_path / "t.bin"
    code, out, _ = run(capsys, "enumerate", "named", "cycle", "--n", "4", "--k", "2", "--subgroup", "x0;x1", "--table-out", str(table))
    assert code == 0 and result_of(out)["cosets"] == 32
    assert table.exists()
    code, _, err = run(capsys, "enumerate", "named", "cycle", "--n", "4", "--subgroup", "nope")
    assert code == cli.EXIT_INPUT and "nope" in err


def test_enumerate_gon_subset(capsys):
    code, out, _ = run(capsys, "enumerate", "named", "cube", "--n", "6", "--gon-subset", "0,1,2,3")
    assert code == 0 and result_of(out)["gons_used"] == [0, 1, 2, 3]
    code, _, _ = run(capsys, "enumerate", "named", "cube", "--n", "6", "--gon-subset", "9")
    assert code == cli.EXIT_INPUT


def test_enumerate_capped_exit(capsys):
    code, out, _ = run(capsys, "enumerate", "named", "cycle", "--n", "6", "--k", "3", "--max-cosets", "500")
    assert code == cli.EXIT_COSETS_CAPPED and result_of(out)["status"] == "capped"


def test_json_is_deterministic(capsys, tmp_path):
    argv = ["closure", "y", "--arms", "3", "3", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert json.loads(first)["result"] == json.loads(second)["result"]
    a = json.loads(first)
    assert set(a) == {"result", "timings"}
    # byte-identical once timings are dropped
    strip = lambda t: json.dumps(json.loads(t)["result"], sort_keys=True)
    assert strip(first) == strip(second)


def test_table_format_and_out(capsys, tmp_path):
    out_path = tmp_path / "r.txt"
    code, out, _ = run(capsys, "closure", "y", "--arms", "3", "3", "3", "--format", "table", "--out", str(out_path))
    assert code == 0 and out == ""
    assert "summary" in out_path.read_text()


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n": 4, "k": 2}))
    code, out, _ = run(capsys, "enumerate", "named", "cycle", "--config", str(cfg))
    assert code == 0 and result_of(out)["cosets"] == 192
    code, out, _ = run(capsys, "enumerate", "named", "cycle", "--config", str(cfg), "--k", "1")
    assert code == 0 and result_of(out)["cosets"] == 24


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"bogus": 1}))
    code, _, _ = run(capsys, "enumerate", "named", "cycle", "--n", "4", "--config", str(bad))
    assert code == cli.EXIT_INPUT
    nested = tmp_path / "nested.json"
    nested.write_text(json.dumps({"n": {"x": 1}}))
    code, _, _ = run(capsys, "enumerate", "named", "cycle", "--config", str(nested))
    assert code == cli.EXIT_INPUT
    code, _, _ = run(capsys, "enumerate", "named", "cycle", "--config", str(tmp_path / "missing.json"))
    assert code == cli.EXIT_INPUT


def test_usage_errors(capsys):
    assert run(capsys, "closure", "y", "--arms", "3", "3", "3", "--cap", "0")[0] == cli.EXIT_INPUT
    assert run(capsys, "closure", "y")[0] == cli.EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == cli.EXIT_USAGE
    assert run(capsys, "diagram", "named", "dodecahedron")[0] == cli.EXIT_INPUT
    assert run(capsys, "enumerate", "named", "cycle", "--size", "4")[0] == cli.EXIT_INPUT


def test_exit_codes_are_distinct():
    codes = [v for k, v in vars(cli).items() if k.startswith("EXIT_")]
    assert len(codes) == len(set(codes))


def test_verify_all_skip_stretch(capsys):
    code, out, _ = run(capsys, "verify-all", "--skip", "stretch", "--only", "2", "9")
    assert code == 0
    assert "[PASS] criterion 2" in out and "[SKIP] criterion 9" in out


def test_verify_all_fault_injection(capsys, monkeypatch):
    real = rootlat.gram_from_diagram

    def corrupted(d):
        m = np.array(real(d).matrix)
        m[0, 1] = m[1, 0] = 0
        return rootlat.GramForm(m, d.labels)

    monkeypatch.setattr(rootlat, "gram_from_diagram", corrupted)
    acceptance._flagship.cache_clear()
    code, out, _ = run(capsys, "verify-all", "--only", "1")
    acceptance._flagship.cache_clear()
    assert code == cli.EXIT_CHECK_FAILED
    assert "[FAIL] criterion 1" in out
