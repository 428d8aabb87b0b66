"""Ballistic transport through a gated graphene barrier: Dirac scattering, Landauer I-V and NDR metrics."""

from graphene_ndr.config import DeviceConfig, load_config
from graphene_ndr.errors import GrapheneNdrError

__version__ = "0.1.0"

__all__ = ["DeviceConfig", "GrapheneNdrError", "load_config", "__version__"]
