import json

import pytest
import yaml

from graphene_ndr.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main, setup_argparse
from graphene_ndr.config import THREADS_ENV
from graphene_ndr.core.landauer import IVCurve
from graphene_ndr.errors import GrapheneNdrError
from graphene_ndr.io.writer import MANIFEST_NAME, RESOLVED_CONFIG_NAME
from graphene_ndr.tests.conftest import make_curve

IV_HEADER = "V_mV,I_norm,est_error,n_evals\n"


@pytest.fixture(autouse=True)
def serial_run(monkeypatch):
    """Run every command serially regardless of the caller's environment"""
    monkeypatch.delenv(THREADS_ENV, raising=False)


@pytest.fixture
def iv_csv(temp_dir):
    def factory(currents, name="iv_in.csv"):
        path = temp_dir / name
        rows = "".join(f"{v},{i},0,0\n" for v, i in enumerate(currents))
        path.write_text(IV_HEADER + rows)
        return path

    return factory


def _ndr_curve(cfg, workers=1, voltages=None):
    shape = [0.0, 2.0, 4.0, 3.0, 1.0, 2.0, 3.0]
    return make_curve(voltages, shape[: len(voltages)], cfg)


def _angle_dependent_curve(cfg, workers=1, voltages=None):
    peak = 5.0 - cfg.phi1 / 10.0
    valley = peak / (2.0 + cfg.phi1 / 10.0)
    shape = [0.0, 1.0, peak, (peak + valley) / 2.0, valley, peak + 1.0, peak + 2.0]
    return make_curve(voltages, shape[: len(voltages)], cfg)


class TestArgparse:
    def test_subcommands(self):
        """Test every command is a subcommand with the shared options"""
        parser = setup_argparse()
        args = parser.parse_args(["iv", "--config", "c.json", "--out", "run", "--svg"])

        assert args.command == "iv"
        assert args.config == "c.json"
        assert args.out == "run"
        assert args.svg is True
        assert args.log_level == "INFO"

    def test_missing_command(self):
        """Test a command is required"""
        with pytest.raises(SystemExit) as exc_info:
            setup_argparse().parse_args([])
        assert exc_info.value.code == 2

    def test_unknown_command(self):
        """Test unregistered command names are refused"""
        with pytest.raises(SystemExit):
            setup_argparse().parse_args(["plot"])

    def test_command_help(self, capsys, monkeypatch):
        """Test every command lists a one-line summary in the help"""
        monkeypatch.setenv("COLUMNS", "200")
        with pytest.raises(SystemExit):
            setup_argparse().parse_args(["--help"])
        out = capsys.readouterr().out

        assert "Current-voltage curve of one device" in out
        assert "Gap and NDR metrics of an existing I-V table" in out
        assert "Transmission and I-V families" in out


class TestTransmissionCommand:
    def test_sweep_run(self, temp_dir, config_file):
        """Test a bias sweep writes its table, resolved config and manifest"""
        out = temp_dir / "run"
        code = main(["transmission", "--config", str(config_file), "--out", str(out), "--sweep", "V:300:400:11"])

        assert code == EXIT_OK
        lines = (out / "transmission.csv").read_text().splitlines()
        assert lines[0] == "x,T,regime"
        assert len(lines) == 12
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert manifest["command"] == "transmission"
        assert manifest["outputs"] == ["transmission.csv", RESOLVED_CONFIG_NAME]
        resolved = json.loads((out / RESOLVED_CONFIG_NAME).read_text())
        assert resolved["V0"] == 200.0
        assert not (out / ".tmp").exists()

    def test_deterministic_output(self, temp_dir, config_file):
        """Test two runs produce byte-identical tables"""
        for name in ("a", "b"):
            code = main(["transmission", "--config", str(config_file), "--out", str(temp_dir / name), "--svg"])
            assert code == EXIT_OK

        assert (temp_dir / "a" / "transmission.csv").read_bytes() == (temp_dir / "b" / "transmission.csv").read_bytes()
        assert (temp_dir / "a" / "transmission.svg").read_bytes() == (temp_dir / "b" / "transmission.svg").read_bytes()

    def test_invalid_config(self, temp_dir):
        """Test a constraint violation exits 2 without writing anything"""
        config = temp_dir / "bad.json"
        config.write_text(json.dumps({"D": -1, "alpha": 0.3, "phi1": 15}))
        out = temp_dir / "run"

        assert main(["transmission", "--config", str(config), "--out", str(out)]) == EXIT_CONFIG
        assert list(out.iterdir()) == []

    def test_missing_config_option(self, temp_dir):
        """Test a command needing a device config without --config"""
        assert main(["transmission", "--out", str(temp_dir / "run")]) == EXIT_CONFIG

    def test_invalid_sweep(self, temp_dir, config_file):
        """Test a malformed sweep is a config error"""
        code = main(["transmission", "--config", str(config_file), "--out", str(temp_dir / "run"), "--sweep", "V:1:0:5"])
        assert code == EXIT_CONFIG

    def test_invalid_thread_count(self, temp_dir, config_file, monkeypatch):
        """Test a non-integer worker count is refused"""
        monkeypatch.setenv(THREADS_ENV, "many")
        assert main(["transmission", "--config", str(config_file), "--out", str(temp_dir / "run")]) == EXIT_CONFIG


class TestIvCommand:
    def test_iv_run(self, temp_dir, config_file, mocker):
        """Test the I-V table and manifest warnings"""
        cfg_holder = {}

        def fake_sweep(cfg, workers=1, voltages=None):
            cfg_holder["cfg"] = cfg
            curve = make_curve([0.0, 100.0, 200.0], [0.0, 1.5, 1.0], cfg)
            return IVCurve(points=curve.points, config_echo=cfg, warnings=("flagged point",))

        sweep = mocker.patch("graphene_ndr.commands.iv.iv_sweep", side_effect=fake_sweep)
        out = temp_dir / "run"

        assert main(["iv", "--config", str(config_file), "--out", str(out)]) == EXIT_OK
        sweep.assert_called_once()
        assert cfg_holder["cfg"].bias_sweep.count == 7
        lines = (out / "iv.csv").read_text().splitlines()
        assert lines[0] == IV_HEADER.strip()
        assert lines[2] == "100,1.5,0,0"
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert manifest["warnings"] == ["flagged point"]

    def test_failure_rolls_back(self, temp_dir, config_file, mocker):
        """Test a failing plot removes the table already written"""
        mocker.patch(
            "graphene_ndr.commands.iv.iv_sweep",
            side_effect=lambda cfg, workers=1: make_curve([0.0, 1.0], [0.0, 1.0], cfg),
        )
        mocker.patch("graphene_ndr.commands.iv.iv_plot", side_effect=GrapheneNdrError("render failed"))
        out = temp_dir / "run"

        assert main(["iv", "--config", str(config_file), "--out", str(out), "--svg"]) == EXIT_RUNTIME
        assert not (out / "iv.csv").exists()
        assert not (out / MANIFEST_NAME).exists()


class TestAnalyzeCommand:
    def test_ndr_report(self, temp_dir, config_file, iv_csv):
        """Test metrics of a curve with one NDR region"""
        out = temp_dir / "run"
        csv = iv_csv([0, 2, 4, 3, 1, 2, 3])

        assert main(["analyze", "--config", str(config_file), "--iv", str(csv), "--out", str(out), "--svg"]) == EXIT_OK
        report = json.loads((out / "report.json").read_text())
        assert report["ndr_detected"] is True
        assert report["ndr"]["pvr"] == 4.0
        assert report["ndr"]["V_peak"] == 2.0
        assert report["pvr_in_reported_range"] is True
        assert report["f_c_THz"] == pytest.approx(1.59, abs=0.01)
        assert report["gap"] is None
        assert report["gap_reason"]
        assert (out / "iv.svg").exists()

    def test_monotone_curve(self, temp_dir, config_file, iv_csv):
        """Test a curve without NDR is a result, not a failure"""
        out = temp_dir / "run"
        csv = iv_csv([0, 1, 2, 3, 4, 5, 6])

        assert main(["analyze", "--config", str(config_file), "--iv", str(csv), "--out", str(out)]) == EXIT_OK
        report = json.loads((out / "report.json").read_text())
        assert report["ndr_detected"] is False
        assert report["ndr"] is None
        assert report["ndr_reason"]

    def test_zero_valley_serializes_null(self, temp_dir, config_file, iv_csv):
        """Test an infinite ratio is written as null"""
        out = temp_dir / "run"
        csv = iv_csv([0, 2, 4, 0, 1])

        assert main(["analyze", "--config", str(config_file), "--iv", str(csv), "--out", str(out)]) == EXIT_OK
        report = json.loads((out / "report.json").read_text())
        assert report["ndr"]["pvr"] is None

    def test_malformed_csv(self, temp_dir, config_file):
        """Test a malformed table exits 3 without a report"""
        csv = temp_dir / "bad.csv"
        csv.write_text("V,I\n0,0\n")
        out = temp_dir / "run"

        assert main(["analyze", "--config", str(config_file), "--iv", str(csv), "--out", str(out)]) == EXIT_RUNTIME
        assert not (out / "report.json").exists()

    def test_missing_iv_option(self, temp_dir, config_file):
        """Test analyze requires an I-V table"""
        assert main(["analyze", "--config", str(config_file), "--out", str(temp_dir / "run")]) == EXIT_CONFIG


class TestFiguresCommand:
    @pytest.fixture
    def presets_file(self, temp_dir):
        document = {
            "version": 1,
            "base": {
                "D": 100,
                "alpha": 0.3,
                "phi1": 15,
                "bias_sweep": {"start": 0, "stop": 600, "count": 7},
            },
            "fig2": {"parameter": "alpha", "values": [0.25, 0.3, 0.35]},
            "fig3": {"parameter": "alpha", "values": [0.25, 0.3]},
            "fig4": {"parameter": "phi1", "values": [10, 20]},
            "width": {"parameter": "D", "values": [50, 100]},
        }
        path = temp_dir / "presets.yml"
        path.write_text(yaml.safe_dump(document))
        return path

    def test_figures_run(self, temp_dir, presets_file, mocker):
        """Test every family table and the summary are written"""
        sweep = mocker.patch("graphene_ndr.commands.figures.iv_sweep", side_effect=_ndr_curve)
        out = temp_dir / "run"

        assert main(["figures", "--presets", str(presets_file), "--out", str(out)]) == EXIT_OK
        assert sweep.call_count == 6
        header = (out / "fig2.csv").read_text().splitlines()[0]
        assert header == "V_mV,T_alpha_0.25,T_alpha_0.3,T_alpha_0.35"
        assert (out / "fig3.csv").read_text().splitlines()[0] == "V_mV,I_alpha_0.25,I_alpha_0.3"
        assert (out / "fig4.csv").read_text().splitlines()[0] == "V_mV,I_phi1_10,I_phi1_20"
        summary = json.loads((out / "figures_summary.json").read_text())
        assert set(summary["trends"]) == {"fig3", "fig4"}
        assert summary["ndr"]["I_alpha_0.25"]["pvr"] == 4.0
        assert summary["width_sensitivity"] == 0.0
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert "width.csv" in manifest["outputs"]
        assert manifest["resolved_config"]["version"] == 1
        assert manifest["warnings"] == [
            "fig3: pvr does not increase with alpha",
            "fig3: I_peak does not decrease with alpha",
            "fig4: pvr does not increase with phi1",
            "fig4: I_peak does not decrease with phi1",
        ]

    def test_trends_without_warnings(self, temp_dir, presets_file, mocker):
        """Test families that follow both trends add no manifest warnings"""
        mocker.patch("graphene_ndr.commands.figures.iv_sweep", side_effect=_angle_dependent_curve)
        out = temp_dir / "run"

        assert main(["figures", "--presets", str(presets_file), "--out", str(out)]) == EXIT_OK
        summary = json.loads((out / "figures_summary.json").read_text())
        assert summary["trends"]["fig4"]["pvr_increasing"]
        assert summary["trends"]["fig4"]["I_peak_decreasing"]
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert not any(w.startswith("fig4") for w in manifest["warnings"])
        assert "fig3: I_peak does not decrease with alpha" in manifest["warnings"]

    def test_invalid_presets(self, temp_dir):
        """Test a broken presets file exits 2"""
        path = temp_dir / "presets.yml"
        path.write_text("version: 7\n")
        assert main(["figures", "--presets", str(path), "--out", str(temp_dir / "run")]) == EXIT_CONFIG
