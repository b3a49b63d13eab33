import pytest

from primegraph.cli import (
    EXIT_CAP,
    EXIT_KB,
    EXIT_NON_OCCURRING,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    main,
)
from primegraph.families import SigmaRStar, generate, parse_graph_file


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_round_trip(capsys):
    code, out, _ = run(capsys, "gen", "sigmaRstar:3,1,2")
    assert code == EXIT_OK
    assert parse_graph_file(out).same_labelled(generate(SigmaRStar(3, 1, 2)))
    code, out, _ = run(capsys, "gen", "sigmaR:2,1", "--format", "dot")
    assert out.startswith('graph "Σ^R_{2,1}"')


def test_check_exit_codes(capsys, tmp_path):
    assert run(capsys, "check", "gamma:5,1")[0] == EXIT_OK
    code, out, _ = run(capsys, "check", "gamma:5,3")
    assert code == EXIT_NON_OCCURRING and out == "Γ_{5,3}: NonOccurring (gamma-theorem)\n"
    code, out, _ = run(capsys, "check", "sigmaR:3,1")
    assert code == EXIT_UNKNOWN and out == "Σ^R_{3,1}: Unknown\n"
    graph = tmp_path / "g.graph"
    graph.write_text("%primegraph-graph v1\nvertex a1\nvertex a2\nvertex b1\nvertex b2\nedge a1 a2\n")
    code, out, _ = run(capsys, "check", str(graph))
    assert code == EXIT_NON_OCCURRING and "palfy" in out


def test_errors_have_distinct_codes(capsys, tmp_path):
    code, out, err = run(capsys, "check", "sigmaR:9,1x")
    assert code == EXIT_PARSE and out == "" and "parse error" in err
    assert run(capsys, "check", "sigmaR:3,1", "--kb", str(tmp_path / "none.kb"))[0] == EXIT_KB
    assert run(capsys, "oracle", "sigmaR:3,1", "c", "--edge-cap", "5")[0] == EXIT_CAP
    assert run(capsys, "replay", "--kmax", "9")[0] == EXIT_CAP
    with pytest.raises(SystemExit) as info:
        main(["check", "sigmaR:3,1", "--bogus"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["check", "sigmaR:3,1", "--edge-cap", "0"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["check", "sigmaR:3,1", "--rule-order", "palfy"])
    assert info.value.code == EXIT_USAGE


def test_audit_prints_table(capsys, tmp_path):
    fig = tmp_path / "audit.png"
    code, out, _ = run(capsys, "audit", "sigmaRstar:3,1,2", "b1", "--figure", str(fig))
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("b1: StronglyAdmissible")
    assert "gamma-theorem" in out and fig.stat().st_size > 0


def test_replay_then_check_and_validate(capsys, tmp_path):
    kb, cert, fig = tmp_path / "out.kb", tmp_path / "cert.json", tmp_path / "chain.png"
    code, _, _ = run(capsys, "replay", "--kmax", "3", "--format", "json", "--out", str(cert),
                     "--kb-out", str(kb), "--figure", str(fig), "--jobs", "1")
    assert code == EXIT_OK and fig.stat().st_size > 0
    code, out, _ = run(capsys, "check", "sigmaR:3,3", "--kb", str(kb))
    assert code == EXIT_NON_OCCURRING and "kb-direct" in out
    assert run(capsys, "kb", "check-cert", str(cert), "--kb", str(kb)) == (EXIT_OK, "certificate valid\n", "")
    code, out, _ = run(capsys, "kb", "validate", "--kb", str(kb))
    assert code == EXIT_OK and out.startswith("ok:")
    code, out, _ = run(capsys, "kb", "list", "--kb", str(kb))
    assert "spec:sigmaRstar:3,2,2\tNonOccurring\tspanning" in out


def test_replay_text_lists_three_certificates(capsys):
    code, out, _ = run(capsys, "replay", "--kmax", "3", "--jobs", "1")
    assert code == EXIT_OK
    for n in (1, 2, 3):
        assert f"Σ^R_{{3,{n}}} does not occur: NonOccurring" in out


def test_kb_add_axiom(capsys, tmp_path):
    kb = tmp_path / "a.kb"
    code, _, _ = run(capsys, "kb", "add-axiom", "sigmaR:2,1", "Unknown", "still open", "--kb", str(kb))
    assert code == EXIT_OK
    code, _, err = run(capsys, "kb", "add-axiom", "sigmaR:1,1", "NonOccurring", "contradiction", "--kb", str(kb))
    assert code == 9 and "contradiction" in err
    assert run(capsys, "kb", "add-axiom", "sigmaR:1,1")[0] == EXIT_USAGE


def test_oracle_reports_and_figures(capsys, tmp_path):
    fig = tmp_path / "s.png"
    code, out, _ = run(capsys, "oracle", "sigmaR:3,1", "c", "--figure", str(fig), "--jobs", "1")
    assert code == EXIT_OK and "uncertified      0" in out and fig.exists()
    assert run(capsys, "oracle")[0] == EXIT_USAGE


def test_gen_figure(capsys, tmp_path):
    fig = tmp_path / "g.svg"
    assert run(capsys, "gen", "sigmaR:3,1", "--figure", str(fig))[0] == EXIT_OK
    assert fig.read_text().lstrip().startswith("<?xml")
