import csv
import hashlib
import json
import math

import pytest

from varopuc import cli
from varopuc.errors import ConfigError
from varopuc.spectral import two_periodic_edges


def write(path, text):
    path.write_text(text)
    return str(path)


def run_cli(tmp_path, kind, text, suffix=".toml", jobs=1):
    cfg = write(tmp_path / f"cfg{suffix}", text)
    out = tmp_path / "out"
    code = cli.main([kind, "--config", cfg, "--out", str(out), "--jobs", str(jobs)])
    (rundir,) = [p for p in out.iterdir() if p.is_dir()]
    return code, rundir, json.loads((rundir / "manifest.json").read_text())


def test_compare_emits_three_ks_values(tmp_path):
    code, rundir, man = run_cli(tmp_path, "compare", """
ladder = [200, 400, 800]
beta = [1.0]
[schedule]
type = "power"
omega = 1.0
""")
    assert code == 0 and man["ok"]
    names = {o["file"] for o in man["outputs"]}
    assert {"zeros_popuc_n200_b0.csv", "zeros_popuc_n800_b0.csv", "cdf_b0.csv", "comparison_b0.json"} <= names
    cmp = json.loads((rundir / "comparison_b0.json").read_text())
    assert cmp["schema"] == 1 and len(cmp["ks"]) == 3
    assert cmp["decreasing"] and cmp["ks"][-1] <= 0.05
    for o in man["outputs"]:
        assert hashlib.sha256((rundir / o["file"]).read_bytes()).hexdigest() == o["sha256"]
    assert rundir.name == cli.run_id(man["config"])


def test_bands_match_closed_form_edges(tmp_path):
    code, rundir, _ = run_cli(tmp_path, "bands", """
[schedule]
type = "periodic"
values = [0.3, [0.0, 0.6]]
""")
    assert code == 0
    rows = list(csv.DictReader(open(rundir / "bands.csv")))
    tp, tm = two_periodic_edges(0.3, 0.6j)
    assert [int(r["band"]) for r in rows] == [0, 1]
    assert float(rows[0]["theta_left"]) == pytest.approx(tp, abs=1e-10)
    assert float(rows[0]["theta_right"]) == pytest.approx(tm, abs=1e-10)
    assert float(rows[1]["theta_left"]) == pytest.approx(2 * math.pi - tm, abs=1e-10)


def test_sine_density_increases_toward_pi(tmp_path):
    code, rundir, _ = run_cli(tmp_path, "density", """
ladder = [1]
grid = 256
[schedule]
type = "sine"
""")
    assert code == 0
    rows = [(float(r["theta"]), float(r["density"])) for r in csv.DictReader(open(rundir / "density.csv"))]
    left = [d for th, d in rows if th < math.pi]
    assert all(b > a for a, b in zip(left, left[1:]))
    info = json.loads((rundir / "density.json").read_text())
    assert info["mass"] == pytest.approx(1, abs=1e-8)


def test_ratio_json_and_parallel_jobs(tmp_path):
    code, rundir, man = run_cli(tmp_path, "ratio", json.dumps({
        "schedule": {"type": "constant", "alpha": 0.5}, "ladder": [100, 400],
        "ratios": ["popuc_step", "blaschke"], "points": [2.0, [0.0, 0.3]], "beta": [1, {"angle": 1.0}],
    }), suffix=".json", jobs=2)
    assert code == 0 and len(man["jobs"]) == 8
    rep = json.loads((rundir / "ratio_popuc_step_z0_b0.json").read_text())
    assert rep["schema"] == 1 and rep["within_tolerance"]
    assert [r["n"] for r in rep["rungs"]] == [100, 400]


def test_zeros_balayage_moments(tmp_path):
    for kind, extra in (("zeros", 'polynomial = "opuc"'), ("balayage", 'polynomial = "opuc"\norder = 32'),
                        ("moments", "k_max = 5")):
        sub = tmp_path / kind
        sub.mkdir()
        code, rundir, man = run_cli(sub, kind, f"""
ladder = [40]
{extra}
[schedule]
type = "exp"
zeta = 0.5
""")
        assert code == 0, man
        assert man["outputs"]
    mom = json.loads((rundir / "moments_n40_b0.json").read_text())
    assert mom["max_deviation"] <= 1e-8


def test_determinism(tmp_path):
    text = 'ladder = [30, 60]\n[schedule]\ntype = "power"\nomega = 2.0\n'
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    _, _, ma = run_cli(a, "zeros", text)
    _, _, mb = run_cli(b, "zeros", text)
    assert [o["sha256"] for o in ma["outputs"]] == [o["sha256"] for o in mb["outputs"]]


def test_job_errors_give_nonzero_exit(tmp_path):
    code, _, man = run_cli(tmp_path, "zeros", """
ladder = [2, 10]
[schedule]
type = "table"
rows = {any = [0.1, 0.2]}
""")
    assert code == 1 and not man["ok"]
    status = {j["name"]: j["status"] for j in man["jobs"]}
    assert status["zeros n=2 beta#0"] == "ok"
    assert status["zeros n=10 beta#0"] == "error"


@pytest.mark.parametrize("text,fragment", [
    ('ladder = [10]\n[schedule]\ntype = "power"\nomega = \n', "line 4"),
    ('ladder = []\n[schedule]\ntype = "power"\n', "ladder"),
    ('ladder = [10]\nbeta = [0.5]\n[schedule]\ntype = "power"\n', "beta[0]"),
    ('ladder = [10]\nt = -1\n[schedule]\ntype = "power"\n', "t:"),
    ('ladder = [10]\n[tolerances]\nks_max = 0.2\n[schedule]\ntype = "power"\n', "tolerances.ks_max"),
    ('ladder = [10]\n[schedule]\ntype = "wavelet"\n', "schedule"),
    ('ladder = [10]\nkind = "bands"\n[schedule]\ntype = "power"\n', "kind"),
])
def test_config_errors(tmp_path, capsys, text, fragment):
    cfg = write(tmp_path / "bad.toml", text)
    assert cli.main(["zeros", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert fragment in capsys.readouterr().err


def test_json_parse_error_has_line(tmp_path):
    with pytest.raises(ConfigError, match="line 2"):
        cli.load_config(write(tmp_path / "x.json", '{"a": 1,\n oops}'))


def test_tightened_tolerance_accepted():
    cfg = cli.normalize_config({"ladder": [5], "schedule": {"type": "power"},
                                "tolerances": {"ks_max": 0.01}}, "compare")
    assert cfg["tolerances"]["ks_max"] == 0.01
    assert cfg["beta"] == [[1.0, 0.0]]


def test_accept_subcommand(tmp_path, capsys):
    code = cli.main(["accept", "--only", "1,2", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "description" in out
    doc = json.loads((tmp_path / "accept.json").read_text())
    assert [c["id"] for c in doc["criteria"]] == [1, 2]
