import json
import subprocess
import sys

import pytest

from qarchbench.cli import main
from qarchbench.qasm import parse
from qarchbench.report import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_archs(capsys):
    code, out, _ = run(capsys, "list-archs")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["name", "family", "qubits", "n_con", "n_full", "c"]
    rows = {ln.split()[0]: ln.split() for ln in lines[1:]}
    assert rows["r2"][3:] == ["148", "188", "0.79"]
    assert rows["s4"][3:] == ["78", "188", "0.41"]


def test_show_arch_formats(capsys):
    code, out, _ = run(capsys, "show-arch", "r3")
    assert code == 0 and "n_con=104" in out and "diameter=10" in out
    code, out, _ = run(capsys, "show-arch", "r3", "--json")
    doc = json.loads(out)
    assert doc["name"] == "r3" and doc["num_qubits"] == 32
    code, out, _ = run(capsys, "show-arch", "s3", "--dot")
    assert out.startswith("graph \"s3\" {") and out.count(" -- ") == 52


def test_show_arch_from_file(capsys, tmp_path):
    _, out, _ = run(capsys, "show-arch", "r4", "--json")
    path = tmp_path / "mine.json"
    path.write_text(out)
    code, out, _ = run(capsys, "show-arch", str(path))
    assert code == 0 and "n_con=80" in out


def test_unknown_arch_is_an_error(capsys):
    code, _, err = run(capsys, "show-arch", "r9")
    assert code == 2 and "error" in err


def test_gen_bench_to_file(capsys, tmp_path):
    out = tmp_path / "q.qasm"
    code, _, err = run(capsys, "gen-bench", "qft", "--qubits", "5", "-o", str(out))
    assert code == 0 and "5 qubits" in err
    assert parse(out.read_text()).num_qubits == 5


def test_gen_bench_rejects_bad_size(capsys):
    code, _, err = run(capsys, "gen-bench", "surface", "--qubits", "16")
    assert code == 2 and err.startswith("error")


def test_transpile_prints_metrics_and_writes_file(capsys, tmp_path):
    src = tmp_path / "in.qasm"
    run(capsys, "gen-bench", "qft", "--qubits", "6", "-o", str(src))
    dst = tmp_path / "out.qasm"
    code, out, _ = run(capsys, "transpile", str(src), str(dst), "--arch", "r4", "--router", "basic",
                       "--opt", "3", "--seed", "4")
    assert code == 0
    kv = dict(line.split("=", 1) for line in out.splitlines())
    assert kv["arch"] == "r4" and kv["router"] == "basic" and kv["opt_level"] == "3"
    assert float(kv["t_trans"]) > 0
    assert int(kv["n_gate"]) > 0
    assert parse(dst.read_text()).num_qubits == 32


def test_transpile_too_large(capsys, tmp_path):
    src = tmp_path / "in.qasm"
    run(capsys, "gen-bench", "qft", "--qubits", "4", "-o", str(src))
    small = tmp_path / "p3.json"
    small.write_text(json.dumps({"name": "p3", "num_qubits": 3, "edges": [[0, 1], [1, 0], [1, 2], [2, 1]]}))
    code, _, err = run(capsys, "transpile", str(src), "--arch", str(small))
    assert code == 2 and "only 3" in err


def test_simulate_top_k(capsys, tmp_path):
    src = tmp_path / "q.qasm"
    src.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n')
    code, out, _ = run(capsys, "simulate", str(src), "--top", "4")
    assert code == 0
    rows = [ln.split() for ln in out.splitlines() if not ln.startswith("#")]
    assert sorted(r[0] for r in rows) == ["00", "11"]
    assert all(float(r[1]) == pytest.approx(0.5) for r in rows)


def test_simulate_initial_label(capsys, tmp_path):
    src = tmp_path / "q.qasm"
    src.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\nx q[0];\n')
    _, out, _ = run(capsys, "simulate", str(src), "--initial", "100")
    rows = [ln.split() for ln in out.splitlines() if not ln.startswith("#")]
    assert rows == [["101", "1"]]


def test_simulate_capacity(capsys, tmp_path, monkeypatch):
    # main() exports the cap; monkeypatch restores the environment afterwards
    monkeypatch.setenv("QARCHBENCH_MAX_QUBITS", "24")
    src = tmp_path / "q.qasm"
    src.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[6];\nh q[0];\nh q[5];\n')
    code, _, err = run(capsys, "--max-qubits", "4", "simulate", str(src), "--initial", "000000")
    assert code == 2 and "error" in err


def test_run_and_report(capsys, tmp_path):
    out = tmp_path / "res.csv"
    code, stdout, _ = run(capsys, "run", "--archs", "r1,s5", "--benches", "ising_6", "--trials", "1",
                          "--routers", "sabre", "--levels", "1,2", "--out", str(out), "--jobs", "1", "-q")
    assert code == 0 and "records=4 selected=2" in stdout
    recs = read_csv(out)
    assert [r.arch for r in recs] == ["r1", "r1", "s5", "s5"]
    code, stdout, _ = run(capsys, "report", str(out), "--out-dir", str(tmp_path / "rep"))
    assert code == 0
    assert (tmp_path / "rep" / "plot_norm_score.csv").exists()


def test_run_rejects_unknown_benchmark(capsys, tmp_path):
    code, _, err = run(capsys, "run", "--archs", "r1", "--benches", "nope_3", "--out", str(tmp_path / "x.csv"))
    assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qarchbench", "list-archs"], capture_output=True, text=True,
                         check=True)
    assert "s5" in res.stdout
