import json

import pytest

from adia_tradeoff.cli import main
from adia_tradeoff.config import (
    CSV_HEADER,
    CSV_VERSION_LINE,
    RunConfig,
    parse_matrix_file,
    write_records_csv,
)
from adia_tradeoff.errors import ConfigError
from adia_tradeoff.sweep import closed_forms_records, run_sweep


class TestRunConfigValidation:
    def test_defaults_valid(self):
        RunConfig().validate()

    @pytest.mark.parametrize(
        "kwargs,field",
        [
            ({"N": 1}, "N"),
            ({"model": "bogus"}, "model"),
            ({"schedule": "bogus"}, "schedule"),
            ({"quad_tol": 1e30}, "quad_tol"),
            ({"integrator_tol": 0.0}, "integrator_tol"),
            ({"C": -1.0}, "C"),
            ({"T_list": [-5.0]}, "T_list"),
            ({"T_range": "10:5:3"}, "T_range"),
            ({"jobs": 0}, "jobs"),
            ({"schedule": "beta", "p": 0}, "p"),
            ({"model": "custom-matrix-file"}, "matrix_file"),
        ],
    )
    def test_offending_field_named(self, kwargs, field):
        with pytest.raises(ConfigError, match=field):
            RunConfig(**kwargs).validate()

    def test_config_file_and_overrides(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(
            "[run]\nmodel = grover-reduced\nschedule = linear\nN = 8\nC = 50\n"
            "T_list = 30, 60\ncsv_path = out.csv\n"
        )
        config = RunConfig.from_file(str(path))
        assert config.N == 8 and config.schedule == "linear"
        config.apply_overrides({"N": 16, "C": None})
        assert config.N == 16 and config.C == 50.0

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[run]\nwibble = 3\n")
        with pytest.raises(ConfigError, match="wibble"):
            RunConfig.from_file(str(path))

    def test_t_values_resolution(self):
        config = RunConfig(T_range="auto:5").validate()
        ts = config.resolve_T_values(10.0)
        assert len(ts) == 5
        assert ts[0] == pytest.approx(10.0) and ts[-1] == pytest.approx(80.0)


class TestMatrixFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "ham.txt"
        path.write_text(
            "2 2\n"
            "0.5 0.25\n0.25 0.5\n"
            "0.0 0.1j\n-0.1j 1.0\n"
        )
        h_i, h_f = parse_matrix_file(str(path))
        assert h_i[0, 1] == 0.25
        assert h_f[0, 1] == 0.1j

    @pytest.mark.parametrize(
        "content,message",
        [
            ("2 3\nrows", "m must be 2"),
            ("2 2\n1 0\n0 1\n1 0\n", "matrix rows"),
            ("2 2\n1 oops\n0 1\n1 0\n0 1\n", "bad entry"),
        ],
    )
    def test_malformed_rejected(self, tmp_path, content, message):
        path = tmp_path / "bad.txt"
        path.write_text(content)
        with pytest.raises(ConfigError, match=message):
            parse_matrix_file(str(path))


@pytest.fixture(scope="module")
def small_sweep():
    config = RunConfig(
        schedule="linear", N=8, C=50.0, T_list=[10.0, 40.0, 160.0], jobs=2
    )
    return run_sweep(config)


class TestSweep:

    def test_records_sorted_and_flagged(self, small_sweep):
        records, summary = small_sweep
        assert [r.T for r in records] == sorted(r.T for r in records)
        for record in records:
            assert ("below-validity" in record.flags) == (record.T < record.T_val)
            assert record.eps_numeric > 0
            assert record.eps_lower <= record.eps_upper

    def test_summary_exponent(self, small_sweep):
        _, summary = small_sweep
        assert summary["exponents"]["eps_upper_vs_T"] == pytest.approx(-1.0, abs=1e-9)
        assert summary["n_records"] == 3

    def test_deterministic_csv(self, small_sweep, tmp_path):
        records, _ = small_sweep
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_records_csv(records, a)
        write_records_csv(records, b)
        assert a.read_bytes() == b.read_bytes()
        header = a.read_text().splitlines()
        assert header[0] == CSV_VERSION_LINE
        assert header[1] == CSV_HEADER

    def test_custom_matrix_model(self, tmp_path):
        path = tmp_path / "ham.txt"
        path.write_text("2 2\n1 0\n0 0\n0 0.5\n0.5 0\n")
        config = RunConfig(
            model="custom-matrix-file",
            matrix_file=str(path),
            schedule="linear",
            N=2,
            C=20.0,
            T_list=[50.0],
        )
        records, summary = run_sweep(config)
        assert len(records) == 1
        assert records[0].jansen is None
        assert records[0].eps_numeric < 0.2

    def test_closed_forms_records(self):
        records, summary = closed_forms_records([16, 64, 256], "optimal", C=9.5)
        assert [r.N for r in records] == [16, 64, 256]
        assert summary["exponents"]["T_val_vs_N"] == pytest.approx(0.5, abs=0.06)
        for record in records:
            assert record.eps_numeric is None
            assert record.eps_tilde == pytest.approx(record.eps_upper, rel=1e-12)


class TestCli:
    def test_sweep_writes_files(self, tmp_path, capsys):
        csv = tmp_path / "out.csv"
        summary = tmp_path / "out.json"
        code = main(
            [
                "sweep", "--N", "8", "--schedule", "linear", "--C", "50",
                "--T_list", "20,80", "--csv_path", str(csv), "--json_path", str(summary),
            ]
        )
        assert code == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == CSV_VERSION_LINE and len(lines) == 4
        payload = json.loads(summary.read_text())
        assert payload["T_val"] == pytest.approx(50.0 / 3 * abs(2 * 7 - 17 * 7 / 8))

    def test_config_error_exit_code(self, capsys):
        assert main(["sweep", "--N", "1"]) == 2
        assert "N:" in capsys.readouterr().err

    def test_bad_tolerance_exit_code(self, capsys):
        assert main(["sweep", "--quad_tol", "1e30"]) == 2
        assert "quad_tol" in capsys.readouterr().err

    def test_closed_forms_subcommand(self, tmp_path):
        csv = tmp_path / "cf.csv"
        code = main(
            ["closed-forms", "--N_list", "16,32,64", "--schedule", "linear",
             "--C", "50", "--csv_path", str(csv)]
        )
        assert code == 0
        assert len(csv.read_text().splitlines()) == 5

    def test_trace_subcommand(self, tmp_path):
        out = tmp_path / "trace.csv"
        code = main(
            ["trace", "--N", "8", "--schedule", "linear", "--T", "40",
             "--trace_csv", str(out)]
        )
        assert code == 0
        assert out.read_text().splitlines()[0] == "s,norm,distance"

    def test_flags_override_config_file(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[run]\nN = 8\nschedule = linear\nC = 50\nT_list = 30\n")
        csv = tmp_path / "out.csv"
        code = main(["sweep", "--config", str(ini), "--N", "4", "--csv_path", str(csv)])
        assert code == 0
        assert csv.read_text().splitlines()[2].startswith("4,linear")
