import json
import shutil
import subprocess

import pytest

from wienerhopf.cli import main
from wienerhopf.config import ConfigError, RunConfig, load_config
from wienerhopf.presets import default_action

D = default_action(2).desc


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def element_file(tmp_path, terms, name="z.json"):
    p = tmp_path / name
    p.write_text(json.dumps([{"a": a, "b": b, "coefficient": x.to_record()} for a, b, x in terms]))
    return str(p)


# meet and positive ideal

@pytest.mark.parametrize("w1, w2, expected", [
    ("a1", "a2a1", "P(a2a1)"),
    ("a1", "a2", "empty"),
    ("e", "a1", "P(a1)"),
    ("(1,2)", "(2,0)", "P((2,2))"),
])
def test_meet(capsys, w1, w2, expected):
    code, out, _ = run(capsys, "meet", w1, w2)
    assert code == 0 and out.strip() == expected


def test_meet_input_errors(capsys):
    assert run(capsys, "meet", "a1", "b2")[0] == 2
    assert run(capsys, "meet", "A1", "a1")[0] == 2


def test_positive_ideal(capsys):
    assert run(capsys, "positive-ideal", "A2a1")[1].strip() == "a1 a2"
    assert run(capsys, "positive-ideal", "a1A2")[1].strip() == "empty"


# check

def test_check_writes_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "check", "classical", "--seed", "42", "--out", str(out))
    assert code == 0 and "PASS" in text
    rep = json.loads(out.read_text())
    assert rep["seed"] == 42 and rep["passed"] and rep["suite"] == "classical"
    assert all({"check_name", "parameters", "defect_norm", "rank", "status"} <= set(c) for c in rep["checks"])


def test_check_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "check", "--suite", "roundtrip", "--seed", "7", "--out", str(a))
    run(capsys, "check", "--suite", "roundtrip", "--seed", "7", "--out", str(b))
    assert json.loads(a.read_text()) == json.loads(b.read_text())


def test_check_failure_exit_code(capsys, monkeypatch):
    import wienerhopf.cli as cli
    from wienerhopf.report import CheckResult
    monkeypatch.setattr(cli, "run_suite", lambda name, cfg: [CheckResult("forced", {}, 1.0, None, "fail")])
    code, out, _ = run(capsys, "check", "classical")
    assert code == 1 and out.startswith("FAIL  forced")


def test_check_input_errors(capsys, tmp_path):
    assert run(capsys, "check", "nonsense")[0] == 2
    assert run(capsys, "check")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", "classical", "--config", str(bad))[0] == 2
    bad.write_text(json.dumps({"L": 0}))
    assert run(capsys, "check", "classical", "--config", str(bad))[0] == 2
    bad.write_text(json.dumps({"n": 2, "algebra": {"block_dims": [1, 1], "generators": [[[[1, 0], [1, 0]], [[0, 0], [0, 0]]]]}}))
    assert run(capsys, "check", "classical", "--config", str(bad))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["check", "relations", "--L", "x"])
    assert exc.value.code == 2


# norm, diagonal, represent

def test_norm_single_term(capsys, tmp_path):
    x = D.element([2, 0, [[0, 0], [0, 0]]])
    code, out, _ = run(capsys, "norm", element_file(tmp_path, [("a1", "a1", x)]))
    assert code == 0 and float(out.strip()) == 2.0


def test_norm_zero_element(capsys, tmp_path):
    code, out, _ = run(capsys, "norm", element_file(tmp_path, []))
    assert code == 0 and float(out.strip()) == 0.0


def test_norm_two_atoms_matches_matrix(capsys, tmp_path):
    x = D.element([1, 2j, [[0, 1], [3, 0]]])
    y = D.element([-1, 1, [[1, 0], [0, 2]]])
    out_file = tmp_path / "n.json"
    code, _, _ = run(capsys, "norm", element_file(tmp_path, [("e", "e", x), ("a1", "a1", y)]),
                     "--matrix", "--L", "6", "--out", str(out_file))
    rep = json.loads(out_file.read_text())
    assert code == 0 and abs(rep["diagonal_norm"] - rep["matrix_norm"]) < 1e-8


def test_norm_rejects_off_diagonal(capsys, tmp_path):
    assert run(capsys, "norm", element_file(tmp_path, [("a1", "e", D.one())]))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"a": "a1"}]))
    assert run(capsys, "norm", str(bad))[0] == 2
    assert run(capsys, "norm", str(tmp_path / "missing.json"))[0] == 2


def test_diagonal_command(capsys, tmp_path):
    code, out, _ = run(capsys, "diagonal", element_file(tmp_path, [("e", "e", D.one()), ("a1", "a1", D.one())]))
    recs = json.loads(out)
    assert code == 0 and sorted(r["representative"] for r in recs) == ["a1", "e"]


def test_represent_command(capsys, tmp_path):
    code, out, _ = run(capsys, "represent", element_file(tmp_path, [("a1", "e", D.one())]), "--L", "2")
    lines = out.strip().splitlines()
    assert code == 0 and lines
    assert all(len(l.split()) == 7 for l in lines)
    assert lines[0].startswith("a1 e 0 0 0 1.0 0.0")


def test_arrows_command(capsys):
    code, out, _ = run(capsys, "arrows", "--depth", "2", "--gbound", "2")
    assert code == 0 and len(out.strip().splitlines()) == 65


# config

def test_config_round_trip(tmp_path):
    cfg = RunConfig(L=5, seed=3)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg.to_dict()))
    assert load_config(p).to_dict() == cfg.to_dict()
    explicit = RunConfig.from_action(default_action(2))
    assert explicit.action().generators[1].matrix.tolist() == default_action(2).generators[1].matrix.tolist()


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(n=0)
    with pytest.raises(ConfigError):
        RunConfig(kk_L=3, kk_L_inner=4)
    with pytest.raises(ConfigError):
        RunConfig(pair_kind="cyclic")
    with pytest.raises(ConfigError):
        RunConfig(block_dims=(1, 1)).raw_action()


def test_non_unital_config_goes_through_unitisation():
    cfg = RunConfig(n=1, block_dims=(1, 1), unital=False, generators=[[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]])
    act = cfg.action()
    assert act.unital and act.desc.dim == 3


@pytest.mark.skipif(shutil.which("wienerhopf") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["wienerhopf", "meet", "a1", "a2a1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "P(a2a1)"
