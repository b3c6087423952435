import io
import json
import subprocess
import sys

import pytest

from levyskew.chain_diagnostics import format_chain_csv
from levyskew.cli import main

from conftest import matches_printed, printed_rows
from test_chain_diagnostics import synthetic

BS = ["--family", "none", "--sigma", "0.2", "--s0", "100", "--k", "100", "--r", "0.05", "--delta", "0", "--t", "1"]
MERTON = ["--family", "merton", "--sigma", "0.2", "--lambda", "1", "--mu", "-0.1", "--delta_j", "0.15"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.split())


def csv_block(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_price_fourier():
    code, out = run("price", *BS, "--method", "fourier")
    assert code == 0
    assert round(float(kv(out)["price"]), 4) == 10.4506


def test_price_mc_within_three_sigma():
    _, ref = run("price", *BS)
    code, out = run("price", *BS, "--method", "mc", "--paths", "1000000", "--seed", "42")
    assert code == 0
    vals = kv(out)
    assert abs(float(vals["price"]) - float(kv(ref)["price"])) < 3 * float(vals["std_error"])
    assert vals["n_paths"] == "1000000" and vals["seed"] == "42"


def test_price_series_and_put():
    code, out = run("price", *MERTON, "--s0", "100", "--k", "100", "--r", "0.05", "--t", "1", "--method", "series")
    _, four = run("price", *MERTON, "--s0", "100", "--k", "100", "--r", "0.05", "--t", "1")
    assert code == 0 and abs(float(kv(out)["price"]) - float(kv(four)["price"])) <= 1e-6
    code, out = run("price", *BS, "--type", "put")
    assert code == 0 and float(kv(out)["price"]) > 0


def test_price_ten_significant_digits():
    _, out = run("price", *BS)
    digits = kv(out)["price"].replace(".", "").lstrip("0")
    assert len(digits) == 10


def test_cgmy_outside_strip_is_numeric_error(capsys):
    code, out = run("price", "--family", "cgmy", "--c", "1", "--g", "5", "--m", "0.5", "--y_exp", "0.5",
                    "--s0", "100", "--k", "100", "--r", "0.05", "--t", "1")
    assert code == 3 and out == ""
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["type"] == "StripViolation"


def test_input_errors_exit_two(capsys):
    code, _ = run("price", "--family", "merton", "--sigma", "0.2", "--s0", "100", "--k", "100", "--t", "1")
    assert code == 2
    assert json.loads(capsys.readouterr().err.strip())["type"] == "ParameterOutOfRange"
    code, _ = run("price", "--family", "cgmy", "--c", "1", "--g", "5", "--m", "10", "--y_exp", "0.5",
                  "--s0", "100", "--k", "100", "--t", "1", "--method", "series")
    assert code == 2


def test_truncation_escalates_unless_allowed():
    vg = ["--family", "cgmy", "--c", "1", "--g", "5", "--m", "10", "--y_exp", "0",
          "--s0", "100", "--k", "100", "--r", "0.05", "--t", "1"]
    assert run("price", *vg)[0] == 3
    with pytest.warns(Warning):
        code, out = run("price", *vg, "--allow-truncation")
    assert code == 0 and float(kv(out)["price"]) > 0


def test_model_file(tmp_path):
    spec = tmp_path / "merton.txt"
    spec.write_text("# test model\nfamily = merton\nsigma = 0.2\nlambda = 1\nmu = -0.1\ndelta_j = 0.15\nr = 0.05\n")
    _, from_file = run("price", "--model-file", str(spec), "--s0", "100", "--k", "100", "--t", "1")
    _, from_flags = run("price", *MERTON, "--s0", "100", "--k", "100", "--r", "0.05", "--t", "1")
    assert from_file == from_flags


def test_dual_symmetric_merton_is_fixed_point():
    args = ["dual", "--family", "merton", "--sigma", "0.2", "--lambda", "1", "--mu", "-0.01125",
            "--delta_j", "0.15", "--s0", "100", "--k", "105", "--r", "0.04", "--delta", "0.04", "--t", "1"]
    code, out = run(*args)
    assert code == 0
    vals = kv(out)
    assert float(vals["lambda"]) == pytest.approx(1.0, abs=1e-12)
    assert float(vals["mu"]) == pytest.approx(-0.01125, abs=1e-12)
    assert float(vals["residual"]) <= 2e-7
    assert run(*args)[1] == out  # byte-identical


def test_dual_beta_one_merton():
    code, out = run("dual", "--family", "merton", "--sigma", "0.2", "--lambda", "1", "--mu", "0.0225",
                    "--delta_j", "0.15", "--s0", "100", "--k", "95", "--r", "0.05", "--delta", "0.02", "--t", "1")
    vals = kv(out)
    assert code == 0
    assert float(vals["mu"]) == pytest.approx(-(0.0225 + 0.15**2), abs=1e-12)
    assert (vals["r"], vals["delta"]) == ("0.02", "0.05")
    assert float(vals["residual"]) <= 2e-7


def test_dual_check_failure_exit_four():
    # both legs share one discretised integral, so only a bound below float
    # rounding makes the check fail
    code, out = run("dual", "--family", "cgmy", "--c", "1", "--g", "5", "--m", "10", "--y_exp", "0.5",
                    "--s0", "100", "--k", "100", "--r", "0.05", "--delta", "0.02", "--t", "1",
                    "--tol", "1e-17", "--allow-truncation")
    assert float(kv(out)["residual"]) > 2e-17
    assert code == 4


def test_sk_table():
    code, out = run("sk", "--family", "merton", "--sigma", "0.2", "--lambda", "1", "--mu", "-0.01125",
                    "--delta_j", "0.15", "--f0", "100", "--r", "0.05", "--t", "1", "--x", "0.01,0.05,0.1")
    assert code == 0
    rows = csv_block(out)
    assert list(rows[0]) == ["x", "k_call", "k_put", "sk", "excess"]
    assert all(abs(float(r["excess"])) <= 1e-5 for r in rows)
    _, out = run("sk", "--family", "merton", "--sigma", "0.2", "--lambda", "1", "--mu", "0.0225",
                 "--delta_j", "0.15", "--f0", "100", "--r", "0.05", "--t", "1", "--x", "0.05")
    assert float(csv_block(out)[0]["sk"]) > 0.05


def test_sk_flags_degenerate_rows(capsys):
    code, out = run("sk", "--family", "none", "--sigma", "0.2", "--f0", "100", "--t", "0.05", "--x", "0.01,1")
    assert code == 0
    rows = csv_block(out)
    assert rows[0]["sk"] != "NA" and rows[1]["sk"] == "NA"
    assert "DegeneratePut" in capsys.readouterr().err


def test_scan_stdout_and_files(tmp_path):
    args = ["scan", *MERTON, "--f0", "100", "--r", "0.05", "--t", "1", "--betas=-2,-1,-0.5,0,1", "--x", "0.01,0.05,0.1"]
    code, out = run(*args)
    assert code == 0
    sign_block, mono_block, verdict = out.split("\n\n")
    cells = csv_block(sign_block)
    assert len(cells) == 15
    assert all(c["sign"] == c["expected"] for c in cells)
    assert len(csv_block(mono_block)) == 5
    assert verdict.startswith("monotone=")

    code, out = run(*args, "--output-dir", str(tmp_path))
    assert code == 0 and out == ""
    assert (tmp_path / "sign_scan.csv").read_text() == sign_block + "\n"
    assert (tmp_path / "monotonicity.txt").read_text().startswith("monotone=")


def test_scan_marks_skipped_cells():
    _, out = run("scan", "--family", "cgmy", "--c", "1", "--g", "5", "--m", "10", "--y_exp", "0.5",
                 "--f0", "100", "--r", "0.05", "--t", "1", "--betas=0,10", "--x", "0.05")
    cells = csv_block(out.split("\n\n")[0])
    assert cells[0]["sign"] == "1" and cells[1]["sign"] == "NA"


@pytest.fixture
def chain_file(tmp_path):
    def write(beta):
        path = tmp_path / f"chain_{beta}.csv"
        path.write_text(format_chain_csv(synthetic(beta)))
        return path

    return write


def test_chain_reproduces_printed_columns(chain_file, tmp_path):
    out_dir = tmp_path / "report"
    code, out = run("chain", "--input", str(chain_file(-0.5)), "--output-dir", str(out_dir))
    assert code == 0 and out == ""
    t1 = {float(r["k_primary"]): r for r in csv_block((out_dir / "table_calls_vs_interp_puts.csv").read_text())}
    t2 = {float(r["k_primary"]): r for r in csv_block((out_dir / "table_puts_vs_interp_calls.csv").read_text())}
    for p in printed_rows():
        row = (t1 if p["table"] == "1" else t2)[float(p["k_primary"])]
        assert matches_printed(float(row["k_paired"]), p["k_paired"])
        assert matches_printed(float(row["x"]), p["x"])
    summary = kv((out_dir / "summary.txt").read_text())
    assert summary["verdict"] == "consistent-with-symmetry"


def test_chain_stdout(chain_file):
    code, out = run("chain", "--input", str(chain_file(1.0)))
    assert code == 0
    assert kv(out.split("\n\n")[-1])["verdict"] == "call-skew"


def test_chain_bad_input(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run("chain", "--input", str(empty))[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("#F=100\nstrike,call_mid,put_mid\n1,1,1\n2,oops,1\n")
    assert run("chain", "--input", str(bad))[0] == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert "line 4" in err["message"]
    assert run("chain", "--input", str(tmp_path / "missing.csv"))[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "levyskew", "price", *BS], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
    assert proc.stdout.startswith("price=10.4505")
