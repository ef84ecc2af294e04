import json
import math

import pytest

from fracgrow.cli import (
    load_bundle,
    load_observations,
    main,
    write_plot_csv,
)
from fracgrow.errors import ParseError

from synthetic import self_consistent_series


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_obs(path, lengths, start=1):
    lines = ["month,length"] + [f"{start + i},{h}" for i, h in enumerate(lengths)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestSpecialCommand:
    def test_ml(self, capsys):
        code, out, _ = run(capsys, "special", "ml", "--alpha", "1", "--z", "1")
        assert code == 0
        assert out.strip() == "2.71828182845905"

    def test_gamma(self, capsys):
        code, out, _ = run(capsys, "special", "gamma", "--x", "0.5")
        assert code == 0
        assert float(out) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_ml2(self, capsys):
        code, out, _ = run(
            capsys, "special", "ml2", "--alpha", "1", "--mlbeta", "2", "--z", "1"
        )
        assert code == 0
        assert float(out) == pytest.approx(math.expm1(1.0), rel=1e-13)

    def test_missing_argument_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["special", "gamma"])
        assert exc.value.code == 2

    def test_pole_is_domain_error(self, capsys):
        code, _, err = run(capsys, "special", "gamma", "--x", "-1")
        assert code == 1
        assert "error:" in err


class TestCaputoCommand:
    def test_paper_rule(self, capsys):
        code, out, _ = run(
            capsys, "caputo", "--rule", "paper", "--beta", "0.5", "--r", "0.04305", "--s", "0"
        )
        assert code == 0
        assert float(out) == pytest.approx(math.sqrt(0.04305), rel=1e-13)

    def test_compare(self, capsys):
        code, out, _ = run(capsys, "caputo", "--compare", "--beta", "0.5", "--r", "1", "--s", "1")
        assert code == 0
        values = {}
        for line in out.splitlines():
            key, _, val = line.partition(":")
            values[key.strip()] = float(val)
        assert values["paper"] == pytest.approx(math.e, rel=1e-13)
        assert values["exact"] == pytest.approx(2.2907, abs=1e-4)
        assert abs(values["numeric"] - values["exact"]) < 1e-6

    def test_bad_order_is_domain_error(self, capsys):
        code, _, err = run(capsys, "caputo", "--rule", "paper", "--beta", "1.5", "--r", "0.1", "--s", "0")
        assert code == 1
        assert "error:" in err


class TestSeriesCommand:
    def test_term_dump(self, capsys):
        code, out, _ = run(
            capsys, "series", "--eta", "0.4936", "--beta", "0.5", "--depth", "3"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("n")
        assert len(lines) == 5  # header + w_0..w_3
        first = lines[1].split()
        assert float(first[1]) == pytest.approx(0.5322)

    def test_depth_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("FRACGROW_SERIES_DEPTH", "2")
        code, out, _ = run(capsys, "series", "--eta", "0.1", "--beta", "1.0")
        assert code == 0
        assert len(out.strip().splitlines()) == 4  # header + w_0..w_2


class TestLoadObservations:
    def test_valid_file(self, tmp_path):
        path = write_obs(tmp_path / "obs.csv", [0.5322, 1.0])
        obs = load_observations(path)
        assert obs.points == ((1, 0.5322), (2, 1.0))

    def test_duplicate_month(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("month,length\n1,0.5\n1,0.6\n")
        with pytest.raises(Exception) as exc:
            load_observations(str(path))
        assert "increasing" in str(exc.value)

    def test_non_numeric_reports_line(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("month,length\n1,0.5\n2,abc\n")
        with pytest.raises(ParseError) as exc:
            load_observations(str(path))
        assert ":3:" in str(exc.value)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("1,0.5\n")
        with pytest.raises(ParseError):
            load_observations(str(path))


class TestPredictCommand:
    def test_reference_grid(self, capsys):
        code, out, _ = run(capsys, "predict", "--reference")
        assert code == 0
        rows = [l for l in out.splitlines() if l.strip() and l.strip()[0].isdigit()]
        assert len(rows) == 24
        first = rows[0].split()
        assert all(v == "0.5322" for v in first[1:])
        # later rows strictly increase across orders
        for row in rows[1:]:
            vals = [float(v) for v in row.split()[1:]]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_month8_warning_and_override(self, capsys):
        code, out, _ = run(capsys, "predict", "--reference", "--orders", "0.5")
        assert code == 0
        assert "decreases at month(s) [8]" in out
        code, out, _ = run(
            capsys, "predict", "--reference", "--orders", "0.5", "--correct-month8", "0.3800"
        )
        assert code == 0
        assert "all monthly steps increase" in out

    def test_single_order(self, capsys):
        code, out, _ = run(capsys, "predict", "--reference", "--orders", "1.0")
        assert code == 0
        rows = [l for l in out.splitlines() if l.strip() and l.strip()[0].isdigit()]
        assert all(len(r.split()) == 2 for r in rows)

    def test_deviation_report(self, capsys):
        code, out, _ = run(capsys, "predict", "--reference", "--deviation-report")
        assert code == 0
        for conv in ("closed_form_per_row", "cumulative", "cumulative_no_age"):
            assert conv in out

    def test_no_rates_is_domain_error(self, capsys):
        code, _, err = run(capsys, "predict")
        assert code == 1
        assert "error:" in err

    def test_obs_input_scores(self, capsys, tmp_path):
        path = write_obs(tmp_path / "obs.csv", self_consistent_series(0.5322, 0.04305, 0.7, 8))
        code, out, _ = run(capsys, "predict", "--obs", path, "--orders", "0.5,0.7,1.0")
        assert code == 0
        assert "MAE per order:" in out

    def test_config_file_etas(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("etas = 0.2, 0.3\nm0 = 1.0\norders = 0.5, 1.0\n")
        code, out, _ = run(capsys, "predict", "--config", str(cfg))
        assert code == 0
        rows = [l for l in out.splitlines() if l.strip() and l.strip()[0].isdigit()]
        assert len(rows) == 3
        assert rows[0].split()[1] == "1.0000"

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n")
        code, _, err = run(capsys, "predict", "--config", str(cfg))
        assert code == 1
        assert "bogus" in err


class TestOutputsAndRoundTrip:
    def test_json_csv_plot_outputs(self, capsys, tmp_path):
        json_path = tmp_path / "out.json"
        csv_path = tmp_path / "out.csv"
        plot_path = tmp_path / "plot.csv"
        code, _, _ = run(
            capsys,
            "predict", "--reference",
            "--json", str(json_path),
            "--csv", str(csv_path),
            "--plot", str(plot_path),
        )
        assert code == 0
        data = json.loads(json_path.read_text())
        assert list(data) == ["config", "grid", "provenance"]
        assert data["grid"]["months"][0] == 1
        assert data["provenance"]["config"]["r"] == 0.04305
        csv_text = csv_path.read_text()
        assert "# r = 0.04305" in csv_text  # provenance echo
        assert "month,h_0.5" in csv_text
        plot_text = plot_path.read_text()
        assert "month,order,predicted" in plot_text

    def test_plot_regenerates_byte_identical(self, capsys, tmp_path):
        json_path = tmp_path / "out.json"
        plot_path = tmp_path / "plot.csv"
        code, _, _ = run(
            capsys, "predict", "--reference", "--json", str(json_path), "--plot", str(plot_path)
        )
        assert code == 0
        bundle = load_bundle(str(json_path))
        import io

        regen = io.StringIO()
        write_plot_csv(bundle, regen)
        assert regen.getvalue() == plot_path.read_text()


class TestFitCommand:
    def test_round_trip(self, capsys, tmp_path):
        path = write_obs(tmp_path / "obs.csv", self_consistent_series(0.5322, 0.04305, 0.7, 10))
        code, out, _ = run(capsys, "fit", "--obs", path, "--orders", "0.5,0.7,1.0")
        assert code == 0
        assert "best order: beta=0.7" in out

    def test_fit_requires_obs(self):
        with pytest.raises(SystemExit) as exc:
            main(["fit"])
        assert exc.value.code == 2

    def test_short_series_is_domain_error(self, capsys, tmp_path):
        path = write_obs(tmp_path / "obs.csv", [1.0, 2.0])
        code, _, err = run(capsys, "fit", "--obs", path)
        assert code == 1
        assert "error:" in err

    def test_json_scores(self, capsys, tmp_path):
        obs_path = write_obs(tmp_path / "obs.csv", self_consistent_series(0.5322, 0.04305, 1.0, 8))
        json_path = tmp_path / "fit.json"
        code, _, _ = run(
            capsys, "fit", "--obs", obs_path, "--orders", "0.5,1.0", "--json", str(json_path)
        )
        assert code == 0
        data = json.loads(json_path.read_text())
        assert data["scores"]["1"] <= 1e-9
