import json

import pytest

from gelfond.cli import fmt, load_config, main, parse_c


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestHelpers:
    def test_fmt_15_significant_digits(self):
        assert fmt(0.4281333290213341) == "0.428133329021334"
        assert fmt(1.0) == "1"

    def test_parse_c(self):
        assert parse_c("0.5") == 0.5
        assert parse_c("8/21") == pytest.approx(8.0 / 21.0)
        assert parse_c("1.25") == 0.25


class TestGelfondCommand:
    def test_landmark(self, capsys):
        code, out, _ = run_cli(capsys, "gelfond", "--q", "2", "--c", "0.5")
        assert code == 0
        assert "gamma = 0.792481250360578" in out
        assert "period 2" in out

    def test_trivial_c_zero(self, capsys):
        code, out, _ = run_cli(capsys, "gelfond", "--q", "2", "--c", "0")
        assert code == 0
        assert "gamma = 1" in out

    def test_nonperiodic_exit_2(self, capsys):
        code, out, _ = run_cli(capsys, "gelfond", "--q", "2",
                               "--c", "0.380952380952")
        assert code == 2
        assert "nonperiodic" in out

    def test_json_schema(self, capsys):
        code, out, _ = run_cli(capsys, "gelfond", "--q", "2", "--c", "1/4",
                               "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert doc["period"] == 4
        assert doc["beta"] == pytest.approx(0.51585926722389, abs=1e-12)

    def test_json_nonperiodic(self, capsys):
        code, out, _ = run_cli(capsys, "gelfond", "--q", "2", "--c", "8/21",
                               "--json")
        assert code == 2
        doc = json.loads(out)
        assert doc["status"] == "nonperiodic"
        assert doc["rotation"] == "9/14"


class TestCyclesCommand:
    def test_row_count_57(self, capsys):
        code, out, _ = run_cli(capsys, "cycles", "--q", "2",
                               "--max-period", "13")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 58  # header + 57 rows
        assert lines[0] == ("q,period,rotation_num,rotation_den,base_digit,"
                            "s_min,s_max,window_lo,window_hi")
        assert lines[1] == "2,2,1,2,0,1/3,2/3,1/6,1/3"

    def test_min_period_1_includes_fixed_point(self, capsys):
        _, out, _ = run_cli(capsys, "cycles", "--q", "2", "--max-period", "3",
                            "--min-period", "1")
        lines = out.strip().splitlines()
        assert len(lines) == 5
        assert lines[1].startswith("2,1,0,1,0,0/1,0/1,")


class TestValidityCommand:
    def test_period_2_row(self, capsys):
        code, out, _ = run_cli(capsys, "validity", "--q", "2", "--period", "2",
                               "--threads", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "period,rotation,window_lo,window_hi,c_lo,c_hi,status"
        fields = lines[1].split(",")
        assert fields[:4] == ["2", "1/2", "1/6", "1/3"]
        assert float(fields[4]) == pytest.approx(0.427484440439, abs=1e-9)
        # 15 significant digits in the c columns
        assert len(fields[4].replace("0.", "")) == 15


class TestTable2Command:
    def test_small_list_and_determinism(self, capsys, tmp_path):
        clist = tmp_path / "cs.txt"
        clist.write_text("1/2\n8/21\n")
        args = ("table2", "--q", "2", "--c-list", str(clist), "--threads", "1")
        code1, out1, _ = run_cli(capsys, *args)
        code2, out2, _ = run_cli(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        lines = out1.strip().splitlines()
        assert lines[0] == "c,beta,gamma,period,status"
        assert lines[1].startswith("1/2,0.549306144334055,")
        assert lines[2] == "8/21,,,,SKIPPED"

    def test_parallel_matches_serial(self, capsys, tmp_path):
        clist = tmp_path / "cs.txt"
        clist.write_text("1/2\n1/4\n1/3\n")
        _, serial, _ = run_cli(capsys, "table2", "--q", "2", "--c-list",
                               str(clist), "--threads", "1")
        _, parallel, _ = run_cli(capsys, "table2", "--q", "2", "--c-list",
                                 str(clist), "--threads", "3")
        assert serial == parallel


class TestStaircaseCommand:
    def test_monotone_estimates(self, capsys):
        code, out, _ = run_cli(capsys, "staircase", "--q", "2", "--points",
                               "256", "--iterations", "4000")
        assert code == 0
        lines = out.strip().splitlines()[1:]
        assert len(lines) == 256
        ests = [float(line.split(",")[1]) for line in lines]
        assert all(b >= a for a, b in zip(ests, ests[1:]))


class TestProfileCommand:
    def test_csv_columns(self, capsys):
        code, out, _ = run_cli(capsys, "profile", "--q", "2", "--lambda",
                               "0.25", "--depth", "12", "--grid", "32")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,e"
        assert len(lines) == 33
        for line in lines[1:]:
            x, e = line.split(",")
            assert 0.0 <= float(x) < 1.0
            assert int(e) >= 0


class TestVerifyAndChecks:
    def test_verify_passes(self, capsys, tmp_path):
        fit_csv = tmp_path / "fit.csv"
        sigma_csv = tmp_path / "sigma.csv"
        code, out, _ = run_cli(capsys, "verify", "--q", "2", "--c", "0.5",
                               "--samples", "25", "--n-max", "6",
                               "--grid", "512", "--seed", "7",
                               "--fit-csv", str(fit_csv),
                               "--sigma-csv", str(sigma_csv))
        assert code == 0
        assert "verify: PASS" in out
        assert fit_csv.read_text().startswith("n,gamma_n,excess_n,argmax_x")
        assert sigma_csv.read_text().startswith("x,abs_sigma")

    def test_checks_q3(self, capsys, tmp_path):
        jdir = tmp_path / "reports"
        code, out, _ = run_cli(capsys, "checks", "--q", "3", "--grid", "40",
                               "--c-points", "3", "--json-dir", str(jdir))
        assert code == 0
        assert "centering" in out and "PASS" in out
        doc = json.loads((jdir / "inner_shift.json").read_text())
        assert doc["passed"] is True


class TestBetaCurveCommand:
    def test_csv_and_svg(self, capsys, tmp_path):
        svg = tmp_path / "curve.svg"
        code, out, _ = run_cli(capsys, "beta-curve", "--q", "2",
                               "--resolution", "16", "--threads", "1",
                               "--svg", str(svg))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "c,beta,gamma,period,status"
        assert len(lines) == 17
        text = svg.read_text()
        assert text.startswith("<svg") and "polyline" in text


class TestConfig:
    def test_config_file_defaults(self, tmp_path, capsys, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("q = 2\nmax_period = 3\n# comment\n")
        code, out, _ = run_cli(capsys, "--config", str(cfg), "cycles")
        assert code == 0
        assert len(out.strip().splitlines()) == 4  # header + periods 2,3

    def test_env_var_config(self, tmp_path, capsys, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("max_period = 2\n")
        monkeypatch.setenv("GELFOND_CONFIG", str(cfg))
        code, out, _ = run_cli(capsys, "cycles", "--q", "2")
        assert code == 0
        assert len(out.strip().splitlines()) == 2

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("max_period = 2\n")
        code, out, _ = run_cli(capsys, "--config", str(cfg), "cycles",
                               "--q", "2", "--max-period", "4")
        assert code == 0
        assert len(out.strip().splitlines()) == 6  # header + periods 2,3,4

    def test_bad_config_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("no_such_key = 1\n")
        code, _, err = run_cli(capsys, "--config", str(cfg), "cycles")
        assert code == 1
        assert "unknown config key" in err

    def test_load_config_types(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("q=3\nv_target_err=1e-12\noutput=out.csv\n")
        vals = load_config(str(cfg))
        assert vals == {"q": 3, "v_target_err": 1e-12, "output": "out.csv"}


class TestOutputFile:
    def test_output_flag_writes_file(self, tmp_path, capsys):
        path = tmp_path / "cycles.csv"
        code, out, _ = run_cli(capsys, "cycles", "--q", "2",
                               "--max-period", "2", "-o", str(path))
        assert code == 0
        assert out == ""
        assert path.read_text().startswith("q,period,")
