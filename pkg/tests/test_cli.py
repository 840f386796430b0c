import pytest

from exproj.cli import main

AXES = "2 2 {p}\n2 1\n1 0\n2 1\n0 1\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "3", "--k", "2", "--a", "5/2", "--s", "8/5")
    assert code == 0
    assert "upper 1 (" in out and "lower 1 (type2)" in out and "gap 0" in out
    code, out, _ = run(capsys, "bounds", "--n", "2", "--k", "1", "--a", "1", "--s", "1/2")
    assert code == 0 and "upper 0" in out and "lower 0" in out


@pytest.mark.parametrize("argv", [
    ["bounds", "--n", "3", "--k", "1", "--a", "1", "--s", "2"],
    ["bounds", "--n", "3", "--k", "1", "--a", "0.5", "--s", "1/4"],
    ["bounds", "--n", "3", "--k", "3", "--a", "1", "--s", "1/4"],
    ["region", "--n", "2", "--k", "1", "--grid", "0"],
    ["verify", "--nmax", "20"],
    ["simulate", "--N", "16", "--a", "1", "--s", "1/4"],
    ["nosuchcommand"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_bounds_error_names_condition(capsys):
    _, _, err = run(capsys, "bounds", "--n", "3", "--k", "1", "--a", "1", "--s", "2")
    assert "min(k, a)" in err


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "bounds", "--n", "2", "--k", "1", "--a", "1", "--s", "3/4")
    assert code == 0
    head, row = out.strip().splitlines()
    assert head == "n,k,a,s,upper,upper_source,lower,lower_source,gap"
    assert row == "2,1,1,3/4,1/2,ren_wang,1/2,type3,0"


def test_region_n3(capsys, tmp_path):
    csv_path, svg_path = tmp_path / "r.csv", tmp_path / "r.svg"
    code, out, _ = run(capsys, "region", "--n", "3", "--k", "1", "--grid", "50",
                       "--out", str(csv_path), "--svg", str(svg_path))
    assert code == 0 and "max gap" in out
    rows = [ln.split(",") for ln in csv_path.read_text().splitlines()[1:]]
    exact = {(r[0], r[1]) for r in rows if r[-1] == "1"}
    # first exact region for k=1, n=3: a = 1 + beta, beta < s <= (1 + beta)/3
    assert ("13/10", "2/5") in exact
    assert svg_path.read_text().startswith("<svg")


def test_global_flags_before_command(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "--out", str(path), "--format", "csv", "bounds", "--n", "2", "--k", "1",
                       "--a", "1", "--s", "1/2")
    assert code == 0 and out == "" and path.read_text().startswith("n,k,a,s")


def test_region_n2_gap(capsys):
    code, out, _ = run(capsys, "region", "--n", "2", "--k", "1", "--grid", "50")
    assert code == 0 and "max gap 0" in out


def test_region_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "region", "--n", "3", "--k", "2", "--grid", "10", "--out", str(a))
    run(capsys, "region", "--n", "3", "--k", "2", "--grid", "10", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_region_threads_same_output(capsys, tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "region", "--n", "3", "--k", "1", "--grid", "10", "--out", str(a))
    monkeypatch.setenv("EXPROJ_THREADS", "2")
    run(capsys, "region", "--n", "3", "--k", "1", "--grid", "10", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--nmax", "8")
    assert code == 0 and ": FAIL" not in out and out.count(": PASS") == 28
    code, out, _ = run(capsys, "verify", "--nmax", "2")
    assert code == 0 and "n=2 k=1 u=1: PASS" in out


def test_bl(capsys, tmp_path):
    f = tmp_path / "ax.txt"
    f.write_text(AXES.format(p=1))
    code, out, _ = run(capsys, "bl", str(f))
    assert code == 0 and out.startswith("1, L = R^2") and "lower bound" in out
    f.write_text(AXES.format(p=2))
    code, out, _ = run(capsys, "bl", str(f))
    assert code == 0 and out.startswith("0,")
    f.write_text("2 2\n")
    assert run(capsys, "bl", str(f))[0] == 2
    assert run(capsys, "bl", str(tmp_path / "missing.txt"))[0] == 2


def test_simulate(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--N", "16", "--a", "1", "--s", "3/4")
    assert code == 0 and "max-on-E = 33" in out
    path = tmp_path / "sim.csv"
    code, out, _ = run(capsys, "simulate", "--N", "256,1024,4096", "--a", "1", "--s", "3/4", "--out", str(path))
    slope = float(out.split("fitted exponent ")[1].split()[0])
    assert code == 0 and abs(slope - 0.5) <= 0.1
    lines = path.read_text().splitlines()
    assert lines[0] == "N,slope,count,threshold,is_exceptional"
    assert len(lines) == 1 + sum(2 * N + 1 for N in (256, 1024, 4096))


def test_broadnarrow(capsys, tmp_path):
    code, out, _ = run(capsys, "--seed", "3", "broadnarrow")
    assert code == 0 and "found" in out and "level r=1" in out
    code2, out2, _ = run(capsys, "broadnarrow", "--seed", "3")
    assert out2 == out
    f = tmp_path / "clump.txt"
    f.write_text("1 3 0.001\n0.5\n0.5001\n0.5002\n")
    code, out, _ = run(capsys, "broadnarrow", "--points", str(f), "--M", "2")
    assert code == 1 and "FAILED" in out
