import pytest

from pmapgraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result_line(out):
    lines = [l for l in out.splitlines() if l.startswith("#RESULT")]
    assert len(lines) == 1
    return lines[0]


@pytest.fixture
def lochness(tmp_path):
    path = tmp_path / "lochness.gd"
    path.write_text("rank = inf\nends = pt!\n")
    return str(path)


def test_classify_file(capsys, lochness):
    code, out, _ = run(capsys, "classify", lochness)
    assert code == 0
    assert "class: CB" in out
    assert "class=CB" in result_line(out)


def test_flux_default_graph(capsys):
    code, out, _ = run(capsys, "flux", "--word", "shift(1)", "--clopen", "[A1]")
    assert code == 0
    assert "fast=1 oracle=1 AGREE" in out


def test_missing_file_is_a_usage_error(capsys):
    code, _, err = run(capsys, "classify", "nosuchfile.gd")
    assert code == 2 and "not found" in err


def test_unknown_command(capsys):
    code, _, _ = run(capsys, "bogus")
    assert code == 2


def test_parse_errors_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.gd"
    bad.write_text("rank = 2\nends = sum(pt, qq)\n")
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and "line 2, column 16" in err
    code, _, _ = run(capsys, "flux", "--word", "shift(", "--clopen", "[A1]")
    assert code == 2
    code, _, _ = run(capsys, "flux", "--word", "shift(7)", "--clopen", "[A1]")
    assert code == 2


def test_computation_error_exits_one(capsys):
    code, _, err = run(capsys, "genset", "catalog:cantor_core")
    assert code == 1 and "not CB-generated" in err


def test_machine_format_prints_only_result(capsys):
    code, out, _ = run(capsys, "h1", "-g", "catalog:cantor_core", "--format", "machine")
    assert code == 0
    assert out.strip() == "#RESULT command=h1 h1=aleph0"


def test_output_is_deterministic(capsys):
    args = ("flux", "--word", "shift(1)^2 swap({1.0},{0.3}) left(1,2)", "--clopen", "[0]")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second


def test_other_commands(capsys):
    code, out, _ = run(capsys, "basis", "catalog:cantor_tree", "--depth", "3", "--clopen", "[11]")
    assert code == 0 and "size=7" in result_line(out)
    code, out, _ = run(capsys, "decompose", "--word", "shift(1) swap({1.0},{0.1})")
    assert code == 0 and "flux=1" in result_line(out)
    code, out, _ = run(capsys, "genset", "catalog:ladder")
    assert code == 0 and "W=0 B=1 H=1" in result_line(out)
    code, out, _ = run(capsys, "props", "catalog:rank2_cantor_tree")
    assert code == 0 and "rf=True ta_pmap=True ta_map=False" in result_line(out)
    code, out, _ = run(capsys, "witness", "wreath", "--n", "2")
    assert code == 0 and "wreath=True" in result_line(out)
    code, out, _ = run(capsys, "witness", "grigorchuk", "--depth", "4")
    assert code == 0 and "relations=True" in result_line(out)


def test_verdicts_cite_their_rule(capsys):
    _, out, _ = run(capsys, "classify", "catalog:ladder")
    assert out.count("because:") == 3
