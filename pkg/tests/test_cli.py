import json

import pytest

from charsheaf.cli import run


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_chartable_a2(capsys):
    assert run(["chartable", "--type", "A2"]) == 0
    rows = [r for r in body(capsys.readouterr().out) if r.startswith("X")]
    assert len(rows) == 3
    assert rows[0].split("\t")[1:] == ["1", "1", "1"]


def test_header_fields(capsys):
    run(["chartable", "--type", "A1"])
    out = capsys.readouterr().out
    keys = [line[2:].split(":")[0] for line in out.splitlines() if line.startswith("# ")]
    assert keys == ["tool", "command", "config_sha256", "springer_convention", "extension_convention"]


def test_green_solve_json_has_q_off_diagonal(capsys):
    assert run(["green-solve", "--type", "A2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["header"]["command"] == "green-solve"
    entries = doc["result"]["P"]["entries"]
    n = len(entries)
    off = [entries[i][j] for i in range(n) for j in range(n) if i != j]
    assert "q" in off
    assert all(entries[i][i] == "1" for i in range(n))


def test_sheaf_values_cuspidal_single_cell_row(capsys):
    assert run(["sheaf-values", "--block", "g2_cuspidal", "--format", "tsv"]) == 0
    rows = body(capsys.readouterr().out)
    assert rows[0].split("\t")[0] == "A"
    assert rows[1:] == ["G2(a1):eps\tq^2\t-q^2\tq^2"]


def test_sheaf_values_numeric_twisted(capsys):
    assert run(["sheaf-values", "--type", "A2", "--twist", "flip", "--q", "3", "--format", "tsv"]) == 0
    rows = body(capsys.readouterr().out)[1:]
    assert [r.split("\t")[1:] for r in rows] == [["-1", "-1", "-1"], ["0", "0", "-27"], ["0", "-3", "-12"]]


def test_output_file(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run(["relweyl", "--type", "B2", "--levi", "2", "--format", "json", "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["header"]["command"] == "relweyl"


def test_config_file_and_conflict(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"type": "A2"}))
    assert run(["chartable", "--config", str(cfg)]) == 0
    capsys.readouterr()
    assert run(["chartable", "--config", str(cfg), "--type", "B2"]) == 2
    assert capsys.readouterr().err.startswith("error: validation:")
    cfg.write_text(json.dumps({"typo": 1}))
    assert run(["chartable", "--config", str(cfg)]) == 2


def test_config_hash_depends_on_options(capsys):
    run(["chartable", "--type", "A2"])
    a = capsys.readouterr().out
    run(["chartable", "--type", "B2"])
    b = capsys.readouterr().out
    pick = lambda s: [line for line in s.splitlines() if "config_sha256" in line][0]
    assert pick(a) != pick(b)


@pytest.mark.parametrize("argv", [["chartable", "--type", "Q"], ["green-solve", "--type", "A2", "--normalization", "x"],
                                  ["sheaf-values", "--block", "no_such_block"]])
def test_validation_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error: validation:")


def test_half_power_block_exits_3(capsys):
    assert run(["sheaf-values", "--block", "c2_levi_a1"]) == 3
    err = capsys.readouterr().err
    assert err.startswith("error: inconsistency:") and "q½" in err


@pytest.mark.parametrize("argv", [["molien", "--type", "B2"], ["jinduce", "--type", "B2", "--levi", "1"],
                                  ["coset-classes", "--type", "A3", "--twist", "flip"],
                                  ["springer-block", "--type", "A1"], ["green-solve", "--type", "A1"]])
def test_other_commands_succeed(argv, capsys):
    assert run(argv) == 0
    out = capsys.readouterr().out
    if out.startswith("{"):
        assert json.loads(out)["header"]["tool"].startswith("charsheaf")
    else:
        assert out.startswith("# tool: charsheaf")


def test_selftest_subset(capsys):
    assert run(["selftest", "--criteria", "1,3"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS criterion") == 2


def test_type_letter_with_rank(capsys):
    assert run(["chartable", "--type", "A", "--rank", "2"]) == 0
    assert len([r for r in body(capsys.readouterr().out) if r.startswith("X")]) == 3
    assert run(["green-solve", "--type", "A", "--rank", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "q" in [e for row in doc["result"]["P"]["entries"] for e in row]


def test_output_is_deterministic(capsys):
    run(["sheaf-values", "--type", "A2", "--twist", "flip"])
    a = capsys.readouterr().out
    run(["sheaf-values", "--type", "A2", "--twist", "flip"])
    assert capsys.readouterr().out == a
