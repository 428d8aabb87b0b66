import math

import pytest
import scipy.constants as sc

from graphene_ndr.config import DeviceConfig
from graphene_ndr.core.units import (
    CURRENT_UNIT_SI,
    PhysicalConstants,
    derive,
    hbar_vf,
    thermal_energy,
)


class TestUnits:
    def test_hbar_vf(self):
        """Test hbar*v_F for v_F = c/300 in meV*nm"""
        assert hbar_vf(sc.c / 300.0) == pytest.approx(657.8, abs=0.1)

    def test_thermal_energy(self):
        """Test k_B*T at room temperature in meV"""
        assert thermal_energy(300.0) == pytest.approx(25.85, abs=0.01)
        assert thermal_energy(0.0) == 0.0

    def test_current_unit(self):
        """Test (2e/h) * 1 meV is about 77.5 nA"""
        assert CURRENT_UNIT_SI == pytest.approx(7.748e-8, rel=1e-3)

    def test_constants_validated(self):
        """Test inconsistent constants are refused"""
        with pytest.raises(ValueError):
            PhysicalConstants(hbar=-1.0)
        with pytest.raises(ValueError):
            PhysicalConstants(h_planck=1.0)


class TestDerive:
    def test_fermi_energy_from_alpha(self, fig3_config):
        """Test alpha = 0.3 of 2*pi/50nm gives E_F near 24.8 meV"""
        dq = derive(fig3_config)

        assert dq.E_F == pytest.approx(24.8, abs=0.01)
        assert dq.k_F == pytest.approx(0.3 * 2 * math.pi / 50.0, rel=1e-12)

    def test_transverse_momentum(self, fig3_config):
        """Test hbar*v_F*k_y equals E_F*sin(phi1)"""
        dq = derive(fig3_config)

        assert dq.hbar_vF * dq.k_y == pytest.approx(dq.E_F * math.sin(math.radians(15)), rel=1e-12)

    def test_explicit_fermi_energy(self):
        """Test an explicit E_F is used as is"""
        dq = derive(DeviceConfig(D=100.0, E_F=24.8, phi1=-15.0, temperature=0.0))

        assert dq.E_F == 24.8
        assert dq.k_F == pytest.approx(24.8 / dq.hbar_vF, rel=1e-12)
        assert dq.k_y < 0
        assert dq.thermal_energy == 0.0

    @pytest.mark.parametrize("alpha", [0.25, 0.3, 0.35])
    def test_alpha_and_fermi_energy_agree(self, fig3_config, alpha):
        """Test a device given by alpha and the same device given by E_F derive alike"""
        by_alpha = derive(fig3_config.replace(alpha=alpha))
        by_energy = derive(fig3_config.replace(alpha=None, E_F=by_alpha.E_F))
        back = by_energy.k_F * fig3_config.lambda_F0 / (2 * math.pi)

        assert back == pytest.approx(alpha, rel=1e-12)
        assert by_energy.E_F == pytest.approx(by_alpha.E_F, rel=1e-12)
        assert by_energy.k_F == pytest.approx(by_alpha.k_F, rel=1e-12)
        assert by_energy.k_y == pytest.approx(by_alpha.k_y, rel=1e-12)
