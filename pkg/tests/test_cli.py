import json

import pytest

from quiverhom.cli import main, parse_rep_literal
from quiverhom.exactlin import Field
from quiverhom.quiver import parse_quiver


LOOP = "vertices: 1\narrow x 1 1\n"
TWO_CYCLE = "vertices: 2\narrow x 1 2\narrow y 2 1\n"
TWO_LOOPS = "vertices: 1\narrow x 1 1\narrow y 1 1\n"
KRONECKER = "vertices: 2\narrow u 1 2\narrow v 1 2\n"


@pytest.fixture
def quiver_file(tmp_path):
    def write(text, name="q.quiver"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_gate_bounded(quiver_file, capsys):
    code, report = run_json(capsys, ["gate", "--quiver", quiver_file(TWO_CYCLE), "--json"])
    assert code == 0
    assert report["schema"] == 1
    assert report["verdicts"]["growth"]["bounded"] is True
    assert report["verdicts"]["growth"]["period"] == 2


def test_gate_rejects_two_loops(quiver_file, capsys):
    code, report = run_json(capsys, ["gate", "--quiver", quiver_file(TWO_LOOPS), "--json"])
    assert code == 3
    witness = report["verdicts"]["growth"]["witness"]
    assert witness["kind"] == "vertex on two cycles"
    assert len(witness["paths"]) == 2


def test_gate_force_exits_zero(quiver_file, capsys):
    code, report = run_json(capsys, ["gate", "--quiver", quiver_file(TWO_LOOPS), "--json", "--force"])
    assert code == 0


def test_parse_error_exit_two(quiver_file, capsys):
    path = quiver_file("vertices: 2\narrow x 1 5\n")
    code = main(["gate", "--quiver", path, "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == 2
    assert "line 2" in report["error"]


def test_stabilization_exit_four(quiver_file, capsys):
    code, report = run_json(
        capsys, ["ext", "--quiver", quiver_file(TWO_CYCLE), "--module", "simple:1",
                 "--target", "A", "--deg", "1", "--trunc", "3", "--json"])
    assert code == 4
    assert "increase" in report["suggestion"]


def test_ext_comodule_command(quiver_file, capsys):
    code, report = run_json(
        capsys, ["ext", "--quiver", quiver_file(TWO_CYCLE), "--module", "C",
                 "--target", "simple:1", "--trunc", "8", "--json"])
    assert code == 0
    table = report["tables"]["ext"]
    assert table["0"]["dimension"] == 0
    assert table["1"]["dimension"] == 1
    assert table["1"]["vertex_support"] == {"2": 1}


def test_ext_fd_command(quiver_file, capsys):
    code, report = run_json(
        capsys, ["ext", "--quiver", quiver_file(LOOP), "--module", "uniserial:1:2",
                 "--target", "uniserial:1:3", "--json"])
    assert code == 0
    assert report["tables"]["ext"]["0"]["dimension"] == 2
    assert report["tables"]["ext"]["1"]["dimension"] == 2


def test_asreg_negative_is_success(quiver_file, capsys):
    code, report = run_json(
        capsys, ["asreg", "--quiver", quiver_file(KRONECKER), "--trunc", "8", "--json"])
    assert code == 0
    assert report["verdicts"]["as_regular"] is False


def test_nakayama_command(quiver_file, capsys):
    code, report = run_json(
        capsys, ["nakayama", "--quiver", quiver_file(TWO_CYCLE), "--trunc", "10",
                 "--mmax", "8", "--json"])
    assert code == 0
    nak = report["tables"]["nakayama"]
    assert nak["natural_map"] == [2, 1]
    assert report["verdicts"]["inner"] == "no"


def test_nakayama_not_applicable_exits_zero(quiver_file, capsys):
    code, report = run_json(
        capsys, ["nakayama", "--quiver", quiver_file(KRONECKER), "--trunc", "8", "--json"])
    assert code == 0
    assert report["verdicts"]["applicable"] is False


def test_cy_loop(quiver_file, capsys):
    code, report = run_json(
        capsys, ["cy", "--quiver", quiver_file(LOOP), "--trunc", "8", "--mmax", "6",
                 "--family", "uniserial:1:1,uniserial:1:2,uniserial:1:3,uniserial:1:4",
                 "--json"])
    assert code == 0
    assert report["verdicts"]["verdict"] == "CY-1"


def test_localcoh_command(quiver_file, capsys):
    code, report = run_json(
        capsys, ["localcoh", "--quiver", quiver_file(LOOP), "--trunc", "10",
                 "--mmax", "10", "--json"])
    assert code == 0
    lc = report["tables"]["local_cohomology"]
    assert lc["twist_vertex_map"] == [1]
    assert report["verdicts"]["matches_twisted_coalgebra"] is True


def test_verify_command(quiver_file, capsys):
    code, report = run_json(
        capsys, ["verify", "--quiver", quiver_file(LOOP), "--trunc", "8",
                 "--cases", "12", "--json"])
    assert code == 0
    assert report["verdicts"]["all_passed"] is True


def test_json_determinism(quiver_file, capsys):
    path = quiver_file(TWO_CYCLE)
    argv = ["verify", "--quiver", path, "--trunc", "8", "--cases", "8",
            "--seed", "7", "--json"]
    main(argv)
    first = json.loads(capsys.readouterr().out)
    main(argv)
    second = json.loads(capsys.readouterr().out)
    first.pop("timings")
    second.pop("timings")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_field_flag_annotated(quiver_file, capsys):
    code, report = run_json(
        capsys, ["asreg", "--quiver", quiver_file(LOOP), "--trunc", "8",
                 "--field", "F7", "--json"])
    assert code == 0
    assert report["field"] == {"kind": "prime", "characteristic": 7}


def test_text_output_renders(quiver_file, capsys):
    code = main(["gate", "--quiver", quiver_file(LOOP)])
    out = capsys.readouterr().out
    assert code == 0
    assert "quiverhom gate" in out
    assert "bounded: True" in out


def test_rep_literal_parser():
    quiver, _ = parse_quiver(TWO_CYCLE)
    text = """
side: left
dims: 1 1
arrow x:
1
"""
    rep = parse_rep_literal(text, quiver, Field(0))
    assert rep.dims == (1, 1)
    assert rep.nil_bound == 2


def test_rep_literal_via_ext(quiver_file, tmp_path, capsys):
    qpath = quiver_file(LOOP)
    rep_path = tmp_path / "m.rep"
    rep_path.write_text("side: left\ndims: 2\narrow x:\n0 0\n1 0\n", encoding="utf-8")
    code, report = run_json(
        capsys, ["ext", "--quiver", qpath, "--module", f"rep:{rep_path}",
                 "--target", "uniserial:1:2", "--deg", "1", "--json"])
    assert code == 0
    assert report["tables"]["ext"]["1"]["dimension"] == 2


def test_verify_skips_identity_on_non_regular_instance(quiver_file, capsys):
    code, report = run_json(
        capsys, ["verify", "--quiver", quiver_file(KRONECKER), "--trunc", "8",
                 "--cases", "10", "--json"])
    assert code == 0
    assert report["verdicts"]["all_passed"] is True
    assert "skipped" in report["tables"]["suite"]["torsion_ext_identities"]


def test_asreg_table_shows_coalgebra_ext_support(quiver_file, capsys):
    code, report = run_json(
        capsys, ["asreg", "--quiver", quiver_file(TWO_CYCLE), "--trunc", "8", "--json"])
    assert code == 0
    probe = report["tables"]["chi_probe"]["probes"]["S_1"]["coalgebra"]
    assert probe["dims"] == [0, 1]
    assert probe["vertex_support"][1] == {"2": 1}


def test_mmax_bound_enforced(quiver_file, capsys):
    with pytest.raises(SystemExit):
        main(["gate", "--quiver", quiver_file(LOOP), "--trunc", "4", "--mmax", "9"])
    capsys.readouterr()


def test_trunc_lower_bound(quiver_file, capsys):
    with pytest.raises(SystemExit):
        main(["gate", "--quiver", quiver_file(LOOP), "--trunc", "0"])
    capsys.readouterr()


def test_ext_degree_two_certified_zero(quiver_file, capsys):
    code, report = run_json(
        capsys, ["ext", "--quiver", quiver_file(TWO_CYCLE), "--module", "C",
                 "--target", "simple:1", "--deg", "2", "--trunc", "8", "--json"])
    assert code == 0
    assert report["tables"]["ext"]["2"]["dimension"] == 0


def test_bad_object_spec_exits_two(quiver_file, capsys):
    code = main(["ext", "--quiver", quiver_file(LOOP), "--module", "simple:zebra",
                 "--target", "A", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == 2
    assert "simple:zebra" in report["error"]
    code2 = main(["ext", "--quiver", quiver_file(LOOP), "--module", "simple:7",
                  "--target", "A", "--json"])
    report2 = json.loads(capsys.readouterr().out)
    assert code2 == 2
    assert "out of range" in report2["error"]


def test_ext_injective_against_algebra(quiver_file, capsys):
    code, report = run_json(
        capsys, ["ext", "--quiver", quiver_file(LOOP), "--module", "injective:1:3",
                 "--target", "A", "--trunc", "10", "--json"])
    assert code == 0
    assert report["tables"]["ext"]["1"]["dimension"] == 4
    assert report["tables"]["ext"]["0"]["dimension"] == 0


def test_quiver_file_field_used_when_no_flag(quiver_file, capsys):
    path = quiver_file(LOOP + "field: F3\n", name="loop_f3.quiver")
    code, report = run_json(capsys, ["asreg", "--quiver", path, "--trunc", "8", "--json"])
    assert code == 0
    assert report["field"] == {"kind": "prime", "characteristic": 3}
    # an explicit flag overrides the file
    code2, report2 = run_json(
        capsys, ["asreg", "--quiver", path, "--trunc", "8", "--field", "Q", "--json"])
    assert code2 == 0
    assert report2["field"] == {"kind": "rationals", "characteristic": 0}


def test_nakayama_report_names_conventions(quiver_file, capsys):
    code, report = run_json(
        capsys, ["nakayama", "--quiver", quiver_file(TWO_CYCLE), "--trunc", "10",
                 "--mmax", "8", "--json"])
    assert code == 0
    nak = report["tables"]["nakayama"]
    assert "compose right to left" in nak["convention"]
    assert "natural map" in nak["orientation"]
