import pytest
from machines import MUL2_SOURCE

from icrn.cli import run_cli
from icrn.compiler import load_net
from icrn.execute import read_transition_log
from icrn.ode import read_sampled_csv


@pytest.fixture
def mul2_file(tmp_path):
    p = tmp_path / "mul2.rm"
    p.write_text(MUL2_SOURCE)
    return p


def run(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_run_rm(capsys, mul2_file):
    assert run(capsys, "run-rm", mul2_file, "--input", 3) == (0, "HALT r_out=6 steps=13\n", "")


def test_run_rm_trace(capsys, mul2_file):
    code, out, _ = run(capsys, "run-rm", mul2_file, "--input", 1, "--trace")
    lines = out.splitlines()
    assert lines[0] == "line=1 r_in=1 r_out=0"
    assert lines[-1] == "HALT r_out=2 steps=5"


def test_run_rm_out_of_fuel(capsys, mul2_file):
    assert run(capsys, "run-rm", mul2_file, "--input", 3, "--fuel", 5)[:2] == (2, "FUEL\n")


def test_compile_then_exec(capsys, tmp_path, mul2_file):
    net = tmp_path / "mul2.icrn"
    assert run(capsys, "compile", mul2_file, "-o", net)[0] == 0
    nf = load_net(net.read_text())
    assert len(nf.net.reactions) == 13 and nf.input_species == "R_in" and nf.output_species == "R_out"
    log = tmp_path / "log.csv"
    code, out, _ = run(capsys, "exec", net, "--init", "A_1=1,R_in=3", "--log", log)
    assert (code, out) == (0, "STATIC segments=39 A_5=1,R_out=6\n")
    assert len(read_transition_log(log.read_text()).points) == 40


def test_compile_to_stdout_is_loadable(capsys, mul2_file):
    code, out, _ = run(capsys, "compile", mul2_file)
    assert code == 0 and out.startswith("#@input R_in\n")
    assert load_net(out).net.species[:3] == ("A_1", "B_1", "C_1")


def test_exec_budget_and_nondeterminism(capsys, tmp_path):
    osc = tmp_path / "osc.icrn"
    assert run(capsys, "oscillator", "--n", 3, "-o", osc)[0] == 0
    assert run(capsys, "exec", osc, "--init", "X_0=1", "--max-segments", 10)[:2] == (2, "FUEL segments=10 X_1=1\n")
    fork = tmp_path / "fork.icrn"
    fork.write_text("A -> B\nA -> C\n")
    assert run(capsys, "exec", fork, "--init", "A=1")[:2] == (3, "NONDETERMINISTIC segments=0 applicable=0,1 A=1\n")
    assert run(capsys, "exec", fork, "--init", "A=1/3", "--lowest-index")[:2] == (0, "STATIC segments=1 B=1/3\n")


def test_additivity_witness_via_cli(capsys, tmp_path):
    net = tmp_path / "w.icrn"
    net.write_text("A -[I]-> B\n")
    assert run(capsys, "exec", net, "--init", "A=1")[1] == "STATIC segments=1 B=1\n"
    assert run(capsys, "exec", net, "--init", "A=1,I=1")[1] == "STATIC segments=0 A=1,I=1\n"


def test_oscillation_check_pipeline(capsys, tmp_path):
    osc = tmp_path / "osc.icrn"
    run(capsys, "oscillator", "--n", 5, "-o", osc)
    log = tmp_path / "log.csv"
    run(capsys, "exec", osc, "--init", "X_0=1", "--max-segments", 15, "--log", log)
    assert run(capsys, "check-oscillation", log, "--species", "X_1,X_3") == (0, "periods=3 waves=6\n", "")


def test_ode_pipeline(capsys, tmp_path, mul2_file):
    net = tmp_path / "mul2.icrn"
    run(capsys, "compile", mul2_file, "-o", net)
    csv = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "ode", net, "--init", "A_1=1,R_in=0.5", "--t-end", 50, "--dt", 0.01, "-o", csv)
    assert code == 0 and out.startswith("t=50 ")
    traj = read_sampled_csv(csv.read_text())
    assert len(traj) == 51
    code, out, _ = run(capsys, "check-oscillation", csv, "--species", "A_1")
    assert code == 0 and out.startswith("periods=")


@pytest.mark.parametrize(
    "argv",
    [
        ["run-rm", "missing.rm", "--input", "1"],
        ["oscillator", "--n", "2"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    try:
        code = run_cli(argv)
    except SystemExit as e:
        code = e.code
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_parse_error_reports_location(capsys, tmp_path):
    bad = tmp_path / "bad.rm"
    bad.write_text("inc r_out\njump 1\n")
    code, _, err = run(capsys, "run-rm", bad, "--input", 0)
    assert code == 1 and f"{bad}:2" in err


def test_exec_rejects_unknown_species(capsys, tmp_path):
    net = tmp_path / "w.icrn"
    net.write_text("A -> B\n")
    code, _, err = run(capsys, "exec", net, "--init", "Q=1")
    assert code == 1 and "Q" in err


def test_negative_input_rejected(capsys, mul2_file):
    assert run(capsys, "run-rm", mul2_file, "--input", -1)[0] == 1
