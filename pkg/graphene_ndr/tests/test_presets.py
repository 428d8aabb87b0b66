import pytest
import yaml

from graphene_ndr.errors import ConfigError
from graphene_ndr.figures.presets import DEFAULT_PRESETS, load_presets


@pytest.fixture
def presets_document():
    with open(DEFAULT_PRESETS) as f:
        return yaml.safe_load(f)


def _write(temp_dir, document):
    path = temp_dir / "presets.yml"
    path.write_text(yaml.safe_dump(document))
    return path


class TestPresets:
    def test_builtin_presets(self):
        """Test the packaged document describes the figure families"""
        presets = load_presets()

        assert presets.version == 1
        assert presets.base.D == 100.0
        assert presets.base.temperature == 300.0
        assert presets.fig2.values == [0.25, 0.3, 0.35]
        assert presets.fig3.parameter == "alpha"
        assert presets.fig4.values == [10.0, 15.0, 20.0]
        assert presets.width is not None

    def test_family_configs(self):
        """Test every curve gets its own validated configuration"""
        presets = load_presets()
        configs = presets.fig4.configs(presets.base)

        assert [value for value, _ in configs] == [10.0, 15.0, 20.0]
        assert [cfg.phi1 for _, cfg in configs] == [10.0, 15.0, 20.0]
        assert all(cfg.alpha == 0.3 for _, cfg in configs)

    def test_family_bias_sweep(self):
        """Test a family-level bias grid overrides the base one"""
        presets = load_presets()
        _, cfg = presets.fig2.configs(presets.base)[0]

        assert cfg.bias_sweep.count == 601
        assert cfg.bias_sweep.step == pytest.approx(1.0)

    def test_column_names(self):
        """Test wide-format column labels"""
        presets = load_presets()

        assert presets.fig3.column("I", 0.25) == "I_alpha_0.25"
        assert presets.fig4.column("I", 10.0) == "I_phi1_10"

    def test_wrong_version(self, temp_dir, presets_document):
        """Test an unknown document version is refused"""
        presets_document["version"] = 2
        with pytest.raises(ConfigError) as exc_info:
            load_presets(_write(temp_dir, presets_document))
        assert exc_info.value.key == "version"

    def test_unknown_parameter(self, temp_dir, presets_document):
        """Test a family can only vary alpha, phi1 or D"""
        presets_document["fig3"]["parameter"] = "V0"
        with pytest.raises(ConfigError) as exc_info:
            load_presets(_write(temp_dir, presets_document))
        assert exc_info.value.key == "fig3.parameter"

    def test_values_must_increase(self, temp_dir, presets_document):
        """Test family values are strictly increasing"""
        presets_document["fig4"]["values"] = [20, 15, 10]
        with pytest.raises(ConfigError):
            load_presets(_write(temp_dir, presets_document))

    def test_invalid_family_config(self, temp_dir, presets_document):
        """Test a family producing an invalid device is a config error"""
        presets_document["fig4"]["values"] = [10, 95]
        presets = load_presets(_write(temp_dir, presets_document))
        with pytest.raises(ConfigError):
            presets.fig4.configs(presets.base)

    def test_missing_file(self, temp_dir):
        """Test an unreadable presets path"""
        with pytest.raises(ConfigError) as exc_info:
            load_presets(temp_dir / "absent.yml")
        assert "cannot read presets" in str(exc_info.value)

    def test_malformed_yaml(self, temp_dir):
        """Test a YAML syntax error"""
        path = temp_dir / "broken.yml"
        path.write_text("version: [1\n")
        with pytest.raises(ConfigError):
            load_presets(path)
