"""CSV ingestion, report output and the command-line surface."""
import json

import numpy as np
import pytest

from fractalport.cli import main
from fractalport.errors import ParseError, ValidationError
from fractalport.fbm import generate_fbm
from fractalport.io import ingest_prices, write_prices_wide



class TestIngestLong:
    def test_three_rows_one_symbol(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text(
            "date,symbol,adj_close\n"
            "2020-01-01,SPY,100.0\n2020-01-02,SPY,101.5\n2020-01-03,SPY,99.25\n"
        )
        series = ingest_prices(f)
        assert len(series) == 1
        assert series[0].symbol == "SPY"
        np.testing.assert_array_equal(series[0].prices, [100.0, 101.5, 99.25])

    def test_interleaved_symbols_sorted(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text(
            "date,symbol,adj_close\n"
            "2020-01-02,B,2.0\n2020-01-01,A,1.0\n2020-01-01,B,1.9\n2020-01-02,A,1.1\n"
        )
        series = ingest_prices(f)
        assert [s.symbol for s in series] == ["A", "B"]
        assert series[1].dates == ("2020-01-01", "2020-01-02")

    def test_zero_price_names_date_and_symbol(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text(
            "date,symbol,adj_close\n2020-01-01,XLF,10.0\n2020-01-02,XLF,0.0\n"
        )
        with pytest.raises(ValidationError, match="XLF.*2020-01-02"):
            ingest_prices(f)

    def test_duplicate_observation(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text(
            "date,symbol,adj_close\n2020-01-01,A,1.0\n2020-01-01,A,1.1\n2020-01-02,A,1.2\n"
        )
        with pytest.raises(ValidationError, match="duplicate"):
            ingest_prices(f)

    def test_malformed_row_names_line(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("date,symbol,adj_close\n2020-01-01,A,1.0\n2020-01-02,A,oops\n")
        with pytest.raises(ParseError, match="line 3"):
            ingest_prices(f)

    def test_missing_price_dropped(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text(
            "date,symbol,adj_close\n2020-01-01,A,1.0\n2020-01-02,A,\n2020-01-03,A,1.2\n"
        )
        series = ingest_prices(f)
        assert series[0].dates == ("2020-01-01", "2020-01-03")

    def test_single_row_symbol_rejected(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("date,symbol,adj_close\n2020-01-01,A,1.0\n")
        with pytest.raises(ValidationError, match="A"):
            ingest_prices(f)


class TestIngestWide:
    def test_wide_multi_symbol(self, tmp_path):
        f = tmp_path / "w.csv"
        f.write_text("date,AAA,BBB\n2020-01-01,1.0,2.0\n2020-01-02,1.1,2.2\n")
        series = ingest_prices(f)
        assert [s.symbol for s in series] == ["AAA", "BBB"]

    def test_wide_twenty_five_symbols(self, tmp_path):
        symbols = [f"S{i:02d}" for i in range(25)]
        rows = ["date," + ",".join(symbols)]
        for d in ("2020-01-01", "2020-01-02", "2020-01-03"):
            rows.append(d + "," + ",".join("10.0" for _ in symbols))
        f = tmp_path / "w25.csv"
        f.write_text("\n".join(rows) + "\n")
        assert len(ingest_prices(f)) == 25

    def test_missing_cell_dropped_per_symbol(self, tmp_path):
        f = tmp_path / "w.csv"
        f.write_text(
            "date,AAA,BBB\n2020-01-01,1.0,2.0\n2020-01-02,,2.2\n2020-01-03,1.2,2.3\n"
        )
        series = {s.symbol: s for s in ingest_prices(f)}
        assert series["AAA"].dates == ("2020-01-01", "2020-01-03")
        assert series["BBB"].dates == ("2020-01-01", "2020-01-02", "2020-01-03")

    def test_duplicate_date_rejected(self, tmp_path):
        f = tmp_path / "w.csv"
        f.write_text("date,AAA\n2020-01-01,1.0\n2020-01-01,1.1\n2020-01-02,1.2\n")
        with pytest.raises(ValidationError, match="duplicate date"):
            ingest_prices(f)

    def test_bad_header_rejected(self, tmp_path):
        f = tmp_path / "w.csv"
        f.write_text("time,AAA\n2020-01-01,1.0\n")
        with pytest.raises(ParseError, match="header"):
            ingest_prices(f)

    def test_bad_date_names_line(self, tmp_path):
        f = tmp_path / "w.csv"
        f.write_text("date,AAA\n2020-01-01,1.0\nnot-a-date,1.1\n")
        with pytest.raises(ParseError, match="line 3"):
            ingest_prices(f)

    def test_round_trip_exact(self, tmp_path, universe):
        out = tmp_path / "roundtrip.csv"
        write_prices_wide(out, universe.prices)
        back = {s.symbol: s for s in ingest_prices(out)}
        assert set(back) == {p.symbol for p in universe.prices}
        for p in universe.prices:
            assert back[p.symbol].dates == p.dates
            np.testing.assert_array_equal(back[p.symbol].prices, p.prices)

    def test_universe_info(self, fixture_csv, universe):
        from fractalport.io import universe_info

        info = universe_info(fixture_csv)
        assert set(info.symbols) == {p.symbol for p in universe.prices} | {"MKT"}
        assert info.date_range[0] == universe.prices[0].dates[0]
        assert info.date_range[1] == universe.prices[0].dates[-1]


class TestCmdHurst:
    def test_symbol_json(self, fixture_csv, capsys):
        assert main(["hurst", "--input", str(fixture_csv), "--symbol", "A1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"h", "h_err", "n_scales", "clamped"}
        assert 0.0 < doc["h"] < 1.0
        assert doc["n_scales"] >= 3

    def test_column_of_fbm_path(self, tmp_path, capsys):
        path = generate_fbm(0.3, 1024, 1.0, 4)
        f = tmp_path / "series.csv"
        f.write_text("value\n" + "\n".join(repr(float(v)) for v in path) + "\n")
        assert main(["hurst", "--input", str(f), "--column", "value"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert 0.15 < doc["h"] < 0.45

    def test_missing_symbol_exits_3(self, fixture_csv, capsys):
        assert main(["hurst", "--input", str(fixture_csv), "--symbol", "NOPE"]) == 3
        assert "NOPE" in capsys.readouterr().err


class TestCmdSelect:
    def test_select_json_deterministic(self, fixture_csv, universe, tmp_path, capsys):
        start, end = universe.prices[0].dates[0], universe.prices[0].dates[125]
        args = [
            "select", "--prices", str(fixture_csv),
            "--start", start, "--end", end, "--horizon-days", "126",
        ]
        assert main(args) == 0
        out1 = capsys.readouterr().out
        assert main(args) == 0
        out2 = capsys.readouterr().out
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["schema_version"] == 1
        assert doc["spreads"], "expected selected spreads on the fixture window"
        for s in doc["spreads"]:
            assert s["hurst"] + s["hurst_err"] < 0.5

    def test_bad_range_exits_3(self, fixture_csv, capsys):
        args = [
            "select", "--prices", str(fixture_csv),
            "--start", "1990-01-01", "--end", "1990-06-01",
        ]
        assert main(args) == 3

    def test_bad_hurst_cap_exits_2(self, fixture_csv):
        args = [
            "select", "--prices", str(fixture_csv),
            "--start", "2015-01-02", "--end", "2015-12-31", "--hurst-cap", "0.9",
        ]
        assert main(args) == 2


class TestCmdBacktest:
    def test_report_written(self, fixture_csv, tmp_path, capsys):
        out = tmp_path / "report.json"
        equity = tmp_path / "equity.csv"
        args = [
            "backtest", "--prices", str(fixture_csv), "--benchmark", "MKT",
            "--output", str(out), "--equity-csv", str(equity),
        ]
        assert main(args) == 0
        doc = json.loads(out.read_text())
        assert doc["schema_version"] == 1
        assert doc["metrics"]["market_neutrality"] == pytest.approx(
            1.0 - abs(doc["metrics"]["benchmark_correlation"])
        )
        assert len(doc["windows"]) == 19
        summary = capsys.readouterr().out
        assert "sharpe" in summary and "max drawdown" in summary
        lines = equity.read_text().strip().splitlines()
        assert lines[0] == "date,equity"
        assert len(lines) == 1 + 19 * 126

    def test_train_days_below_minimum_exits_2(self, fixture_csv, tmp_path, capsys):
        args = [
            "backtest", "--prices", str(fixture_csv), "--benchmark", "MKT",
            "--train-days", "10", "--output", str(tmp_path / "r.json"),
        ]
        assert main(args) == 2
        assert "train" in capsys.readouterr().err

    def test_missing_benchmark_exits_3(self, fixture_csv, tmp_path, capsys):
        args = [
            "backtest", "--prices", str(fixture_csv), "--benchmark", "SPY",
            "--output", str(tmp_path / "r.json"),
        ]
        assert main(args) == 3
        assert "SPY" in capsys.readouterr().err

    def test_byte_identical_reports(self, fixture_csv, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            args = [
                "backtest", "--prices", str(fixture_csv), "--benchmark", "MKT",
                "--output", str(out),
            ]
            assert main(args) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestCmdMakeFixture:
    def test_fixture_generated_and_ingestable(self, tmp_path, capsys):
        out = tmp_path / "u.csv"
        assert main(["make-fixture", "--out", str(out), "--days", "300", "--seed", "5"]) == 0
        series = ingest_prices(out)
        assert len(series) == 11  # 10 assets + MKT benchmark
        assert {s.symbol for s in series} >= {"A1", "B1", "MKT"}
        assert "planted pairs" in capsys.readouterr().out

    def test_deterministic_per_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["make-fixture", "--out", str(a), "--days", "200", "--seed", "9"]) == 0
        assert main(["make-fixture", "--out", str(b), "--days", "200", "--seed", "9"]) == 0
        assert a.read_bytes() == b.read_bytes()
