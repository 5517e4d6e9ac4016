import json
import subprocess
import sys

import numpy as np
import pytest

from trendwave import cli, io
from trendwave.periods import DEFAULT_PERIODS, Period
from trendwave.synthetic import fixture_path, three_wave_series

FIXTURE_CFG = str(fixture_path("synthetic_3wave.cfg"))
FIXTURE_CSV = str(fixture_path("synthetic_3wave.csv"))


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def analyzed(tmp_path_factory):
    """Two independent analyze runs of the bundled fixture."""
    dirs = []
    for name in ("a", "b"):
        out = tmp_path_factory.mktemp(name)
        assert cli.main(["analyze", "--config", FIXTURE_CFG, "--out", str(out)]) == 0
        dirs.append(out)
    return dirs


class TestIngest:
    def test_three_rows(self, tmp_path):
        p = write(tmp_path / "s.csv", "date,close\n2020-01-05,1.1\n2020-01-12,1.2\n2020-01-19,1.15\n")
        s = io.ingest_csv(p)
        assert len(s) == 3 and s.index[0] == 1 and s.filled == 0
        assert s.start_label == "2020-01-05"

    def test_missing_week_filled(self, tmp_path):
        p = write(tmp_path / "s.csv", "date,close\n2020-01-05,1.1\n2020-01-12,1.2\n2020-01-26,1.3\n")
        s = io.ingest_csv(p)
        assert len(s) == 4 and s.filled == 1
        np.testing.assert_array_equal(s.values, [1.1, 1.2, 1.2, 1.3])

    def test_bad_value_names_line(self, tmp_path):
        rows = ["date,close", "2020-01-05,1", "2020-01-12,1", "2020-01-19,1", "2020-01-26,abc"]
        p = write(tmp_path / "s.csv", "\n".join(rows) + "\n")
        with pytest.raises(io.InputError, match=r":5:"):
            io.ingest_csv(p)

    def test_non_monotone(self, tmp_path, capsys):
        p = write(tmp_path / "s.csv", "date,close\n2020-01-12,1\n2020-01-05,1\n2020-01-19,1\n")
        with pytest.raises(io.InputError):
            io.ingest_csv(p)
        code, _, err = run(["analyze", "--input", p, "--out", str(tmp_path / "o")], capsys)
        assert code == 2 and "does not follow" in err

    @pytest.mark.parametrize("body", ["when,close\n2020-01-05,1\n", "date,close\n", "date,close\nnot-a-date,1\n",
                                      "date,close\n2020-01-05,1,2\n", "date,close\n2020-01-05,nan\n"])
    def test_rejections(self, tmp_path, body):
        with pytest.raises(io.InputError):
            io.ingest_csv(write(tmp_path / "s.csv", body))

    def test_missing_file(self, tmp_path):
        with pytest.raises(io.InputError):
            io.ingest_csv(tmp_path / "nope.csv")

    def test_round_trip(self, tmp_path):
        s = three_wave_series()
        io.write_csv_series(tmp_path / "x.csv", s)
        back = io.ingest_csv(tmp_path / "x.csv")
        np.testing.assert_array_equal(back.values, s.values)

    def test_bundled_fixture_matches_generator(self):
        np.testing.assert_array_equal(io.ingest_csv(FIXTURE_CSV).values, three_wave_series().values)


class TestConfig:
    def test_periods(self):
        assert io.parse_period("10:20") == Period("10:20", 10, 20)
        assert io.parse_period("X=3:9").label == "X"
        assert io.parse_periods("none") == []
        assert io.parse_periods("default") == list(DEFAULT_PERIODS)
        with pytest.raises(io.InputError):
            io.parse_period("9:3")
        with pytest.raises(io.InputError):
            io.parse_period("a:b")

    def test_precedence(self, tmp_path):
        p = write(tmp_path / "c.cfg", "# comment\ninput = data.csv\nseed = 5\nk-max = 4\nrestarts = 1\n")
        file_values = io.read_config_file(p)
        assert file_values["input"] == str(tmp_path / "data.csv")
        cfg = io.build_config(file_values, seed=9, k_max=None)
        assert cfg.seed == 9  # flag beats file
        assert cfg.k_max == 4  # file beats default
        assert cfg.shift_step == 0.5  # default
        assert cfg.periods == list(DEFAULT_PERIODS)

    def test_bad_config(self, tmp_path):
        with pytest.raises(io.InputError, match=":2:"):
            io.read_config_file(write(tmp_path / "c.cfg", "seed = 1\ncolour = red\n"))
        with pytest.raises(io.InputError):
            io.read_config_file(write(tmp_path / "c.cfg", "seed\n"))
        with pytest.raises(io.InputError):
            io.read_config_file(write(tmp_path / "c.cfg", "seed = one\n"))

    def test_json_rejects_nan(self):
        with pytest.raises(ValueError):
            io.dumps({"x": float("nan")})


class TestAnalyze:
    def test_fixture_summary(self, analyzed):
        summary = json.loads((analyzed[0] / "summary.json").read_text())
        assert summary["failures"] == 0 and len(summary["periods"]) == 1
        row = summary["periods"][0]
        assert row["k"] == 3 and row["r2"] >= 0.99
        for suffix in ("waves.json", "fit.json", "scalogram.csv", "scalogram.svg", "overlay.svg"):
            assert (analyzed[0] / f"period1.{suffix}").stat().st_size > 0

    def test_waves_schema(self, analyzed):
        doc = json.loads((analyzed[0] / "period1.waves.json").read_text())
        assert doc["schema"] == 1
        assert [w["i"] for w in doc["waves"]] == [1, 2, 3]
        assert set(doc["waves"][0]) == {"i", "a", "b", "y_sat", "ratio", "boundary"}
        assert [round(w["b"]) for w in doc["waves"]] == [60, 150, 240]

    def test_deterministic(self, analyzed):
        a, b = analyzed
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        for name in names:
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_svg_wellformed(self, analyzed):
        import xml.etree.ElementTree as ET
        for name in ("period1.scalogram.svg", "period1.overlay.svg"):
            root = ET.fromstring((analyzed[0] / name).read_text())
            assert root.tag.endswith("svg")

    def test_scalogram_csv_shape(self, analyzed):
        lines = (analyzed[0] / "period1.scalogram.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header[0] == "scale"
        assert all(len(row.split(",")) == len(header) for row in lines[1:])

    def test_empty_periods(self, tmp_path, capsys):
        code, out, _ = run(["analyze", "--input", FIXTURE_CSV, "--period", "none",
                            "--out", str(tmp_path)], capsys)
        assert code == 0
        assert json.loads(out)["periods"] == []

    def test_out_of_range_period_fails_alone(self, tmp_path, capsys):
        code, out, _ = run(["analyze", "--input", FIXTURE_CSV, "--period", "1:40", "--period", "250:400",
                            "--no-refine", "--out", str(tmp_path)], capsys)
        summary = json.loads(out)
        assert code == 0 and summary["failures"] == 1
        assert [r["status"] for r in summary["periods"]] == ["ok", "failed"]
        assert "outside data range" in summary["periods"][1]["error"]

    def test_missing_input(self, tmp_path, capsys):
        code, _, err = run(["analyze", "--out", str(tmp_path)], capsys)
        assert code == 2 and "input" in err


class TestFit:
    def test_round_trip_reproduces_report(self, analyzed, tmp_path, capsys):
        waves = str(analyzed[0] / "period1.waves.json")
        original = json.loads((analyzed[0] / "period1.fit.json").read_text())
        code, out, _ = run(["fit", "--input", FIXTURE_CSV, "--waves", waves, "--no-refine",
                            "--out", str(tmp_path)], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["rmse_after"] == pytest.approx(original["rmse_after"], abs=1e-12)
        assert report["r2"] == pytest.approx(original["r2"], abs=1e-12)
        assert (tmp_path / "fit.overlay.svg").exists()
        again = json.loads((tmp_path / "fit.waves.json").read_text())
        assert again["waves"] == json.loads(open(waves).read())["waves"]

    def test_refit_from_hand_written_file(self, tmp_path, capsys):
        doc = {"schema": 1, "period": {"label": "s", "start": 1, "end": 300}, "c": 0.0, "d": 0.0,
               "waves": [{"a": 6.5, "b": 61, "y_sat": 9.0}, {"a": 5.5, "b": 149, "y_sat": 3.3},
                         {"a": 6.2, "b": 238, "y_sat": 1.1}]}
        p = write(tmp_path / "w.json", json.dumps(doc))
        code, out, _ = run(["fit", "--input", FIXTURE_CSV, "--waves", p, "--restarts", "0",
                            "--out", str(tmp_path)], capsys)
        assert code == 0 and json.loads(out)["r2"] > 0.9999

    def test_bad_waves_file(self, tmp_path, capsys):
        p = write(tmp_path / "w.json", "{not json")
        code, _, _ = run(["fit", "--input", FIXTURE_CSV, "--waves", p, "--out", str(tmp_path)], capsys)
        assert code == 2
        p = write(tmp_path / "w.json", json.dumps({"schema": 7, "waves": []}))
        code, _, _ = run(["fit", "--input", FIXTURE_CSV, "--waves", p, "--out", str(tmp_path)], capsys)
        assert code == 2


class TestOtherCommands:
    def test_scalogram(self, tmp_path, capsys):
        code, out, _ = run(["scalogram", "--input", FIXTURE_CSV, "--period", "1:120",
                            "--scale-steps", "40", "--out", str(tmp_path)], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["shape"][0] == 40
        top = doc["extrema"][0]
        assert top["kind"] == "max" and abs(top["beta"] - 60) <= 1
        assert (tmp_path / "scalogram.csv").exists() and (tmp_path / "scalogram.svg").exists()

    def test_soliton(self, tmp_path, capsys):
        code, out, _ = run(["soliton", "--kappa", "1", "--x-range=-10:10", "--t-range=-0.5:0.5",
                            "--out", str(tmp_path)], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["residual"] <= 1e-3
        assert (tmp_path / "soliton.svg").exists()

    def test_soliton_multi_forces_c1_zero(self, tmp_path, capsys, caplog):
        code, out, _ = run(["soliton", "--kappa", "1,2", "--c1", "0.3", "--x-range=-10:10",
                              "--t-range=-0.2:0.2", "--hx", "0.02", "--ht", "0.02",
                              "--out", str(tmp_path)], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["c1"] == 0.0
        assert any("C1" in r.getMessage() for r in caplog.records)
        assert doc["phase_shifts"]["12"] == pytest.approx(1 / 9)

    def test_soliton_bad_kappas(self, tmp_path, capsys):
        code, _, _ = run(["soliton", "--kappa", "1,1", "--out", str(tmp_path)], capsys)
        assert code == 2

    def test_entropy(self, tmp_path, capsys):
        xor = [[[0.25, 0], [0, 0.25]], [[0, 0.25], [0.25, 0]]]
        code, out, _ = run(["entropy", "--table", json.dumps(xor)], capsys)
        assert code == 0 and json.loads(out)["T"] == pytest.approx(-1.0)
        p = write(tmp_path / "t.json", json.dumps({"probabilities": [[0.5, 0], [0, 0.5]]}))
        code, out, _ = run(["entropy", p], capsys)
        assert code == 0 and json.loads(out)["R"] == pytest.approx(-1.0)

    def test_entropy_bad_table(self, capsys):
        assert run(["entropy", "--table", "[0.5, 0.6]"], capsys)[0] == 2
        assert run(["entropy", "--table", "nope"], capsys)[0] == 2

    @pytest.mark.parametrize("suite", ["wavelet", "soliton", "entropy"])
    def test_verify(self, suite, capsys):
        code, out, err = run(["verify", suite], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["passed"] and report["checks"]
        assert "pass" in err

    def test_verify_mentions_named_checks(self, capsys):
        _, _, err = run(["verify", "all"], capsys)
        assert "psi_2^2 = 1 within 1e-6: pass" in err
        assert "XOR triad T123 = -1 bit: pass" in err

    def test_verify_failure_exit_code(self, monkeypatch, capsys):
        from trendwave import verify
        monkeypatch.setitem(verify.SUITES, "entropy", lambda: [verify.Check("forced", 1.0, 0.0, False)])
        assert run(["verify", "entropy"], capsys)[0] == 1

    def test_unknown_suite_exit_2(self):
        proc = subprocess.run([sys.executable, "-m", "trendwave", "verify", "bogus"],
                              capture_output=True, text=True)
        assert proc.returncode == 2

    def test_usage_error_exit_2(self):
        proc = subprocess.run([sys.executable, "-m", "trendwave", "soliton", "--hx", "-1"],
                              capture_output=True, text=True)
        assert proc.returncode == 2
