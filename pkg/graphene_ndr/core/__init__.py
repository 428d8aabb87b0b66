from graphene_ndr.core.landauer import IVCurve, IVPoint, current, fermi_occupation, iv_sweep
from graphene_ndr.core.scattering import ScatteringSolution, solve_barrier

__all__ = [
    "IVCurve",
    "IVPoint",
    "ScatteringSolution",
    "current",
    "fermi_occupation",
    "iv_sweep",
    "solve_barrier",
]
