import json

import pytest

from sigma235.cli import RunConfig, ConfigError, load_config, main, run


def _json(capsys):
    out = capsys.readouterr().out
    return json.loads(out), out


def test_bounds_json(capsys):
    assert main(["bounds"]) == 0
    d, _ = _json(capsys)
    assert d["schema_version"] == 1
    assert set(d["certificates"]) >= {"log p", "log q", "e_1", "e_2", "e_3", "H"}


def test_bounds_markdown(capsys):
    assert main(["bounds", "--format", "md"]) == 0
    assert capsys.readouterr().out.startswith("# Bounds")


def test_reduce_div(capsys):
    assert main(["reduce", "--case", "div"]) == 0
    d, _ = _json(capsys)
    assert float(d["reduction"]["new_bound"]) <= 250.0
    assert len(d["reduction"]["reduced_basis"]["columns"]) == 3


def test_output_is_deterministic(capsys):
    main(["reduce", "--case", "first"])
    _, a = _json(capsys)
    main(["reduce", "--case", "first"])
    _, b = _json(capsys)
    assert a == b


def test_order_and_factor(capsys):
    assert main(["order", "3", "31"]) == 0
    d, _ = _json(capsys)
    assert d["order"]["value"] == "30" and d["order"]["kind"] == "exact"
    assert main(["factor", "2", "11"]) == 0
    d, _ = _json(capsys)
    assert [f["prime"] for f in d["record"]["factors"]] == ["23", "89"]


def test_order_bad_input(capsys):
    assert main(["order", "3", "32"]) == 2
    assert main(["order", "3", "3"]) == 2


def test_sanity_cli(capsys):
    assert main(["sanity", "--bound", "60"]) == 0
    d, _ = _json(capsys)
    assert d["sanity"]["ok"] is True


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"C": {"div": 1000}}))
    assert main(["reduce", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"gamma": 0}))
    assert main(["bounds", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"frobnicate": 1}))
    assert main(["bounds", "--config", str(bad)]) == 2
    bad.write_text("{not json")
    assert main(["bounds", "--config", str(bad)]) == 2
    assert main(["bounds", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["reduce", "--delta", "1/5"]) == 2


def test_flags_override_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"brute_box": 7, "C": {"div": "10^120"}}))
    cfg = load_config(str(p), {"brute_box": 9, "C": None})
    assert cfg.brute_box == 9 and cfg.C == {"div": 10**120}


def test_config_echo_and_validate():
    cfg = RunConfig().validate()
    assert cfg.echo()["db_path"] == "bundled"
    with pytest.raises(ConfigError):
        RunConfig(C={"div": 10**9}).validate()
    with pytest.raises(ConfigError):
        RunConfig(format="xml").validate()


def test_custom_C_reduction(capsys):
    assert main(["reduce", "--case", "div", "--C", "div=10^115"]) == 0
    d, _ = _json(capsys)
    assert d["reduction"]["C"] == "10^115"
    assert float(d["reduction"]["new_bound"]) < 260


def test_tables_on_empty_db(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n", encoding="utf-8")
    assert main(["tables", "--format", "md", "--db", str(empty)]) == 1
    cap = capsys.readouterr()
    d = json.loads(cap.out)
    assert ["2", "3"] in [[str(x) for x in p] for p in d["missing_factorizations"]]
    assert "factorizations needed" in cap.err


def test_env_db_path(tmp_path, monkeypatch, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("", encoding="utf-8")
    monkeypatch.setenv("SIGMA235_FACTOR_DB", str(empty))
    assert main(["solve"]) == 1


def test_missing_db_file_is_config_error(tmp_path, capsys):
    assert main(["tables", "--db", str(tmp_path / "nope.txt")]) == 2


def test_solve_cli(tmp_path, capsys, db):
    report = tmp_path / "r.json"
    assert main(["solve", "--brute-box", "12", "--report", str(report)]) == 0
    d, out = _json(capsys)
    assert [f["label"] for f in d["solve"]["families"]] == ["i", "ii", "iii", "iv"]
    assert d["brute_box"]["agrees_with_families"] is True
    assert report.read_text() == out


def test_tables_cli_json(capsys, db):
    assert main(["tables"]) == 0
    d, _ = _json(capsys)
    assert {r["table"] for r in d["tables"]} == {1, 2, 3, 4, 5, 6}


def test_run_api():
    rep, code = run("order", RunConfig(), a=2, q=31, smooth_bound=None)
    assert code == 0 and rep.to_dict()["order"]["value"] == "5"
    with pytest.raises(ConfigError):
        run("dance", RunConfig())
