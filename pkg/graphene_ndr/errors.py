"""Exception hierarchy shared by the numeric core, the analysis layer and the CLI.

The CLI maps ``ConfigError`` to exit code 2 and every other
``GrapheneNdrError`` to exit code 3.
"""

from typing import Any, Optional


class GrapheneNdrError(Exception):
    """Base class for all errors raised by graphene_ndr."""


class ConfigError(GrapheneNdrError, ValueError):
    """Malformed or invalid configuration document."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


# ------------------------------
# Scattering
# ------------------------------
class ScatteringError(GrapheneNdrError):
    """The scattering problem has no well-defined solution at this point."""


class DegenerateEnergy(ScatteringError):
    """Energy sits on the Dirac point of one region."""

    def __init__(self, region: int, energy: float, potential: float):
        super().__init__(
            f"E = {energy!r} meV is within the degeneracy guard of region {region} "
            f"(U = {potential!r} meV)"
        )
        self.region = region
        self.energy = energy
        self.potential = potential


class NoInputMode(ScatteringError):
    """No propagating incident mode in region 1."""


class GrazingOutput(ScatteringError):
    """Transmitted mode travels parallel to the interface; flux normalization is singular."""


class SingularSystem(ScatteringError):
    """The dense matching system has a vanishing pivot."""

    def __init__(self, message: str, params: dict[str, Any]):
        super().__init__(f"{message}: {params}")
        self.params = params


# ------------------------------
# Transport
# ------------------------------
class QuadratureBudgetExceeded(GrapheneNdrError):
    """Adaptive quadrature did not meet its tolerance within the subdivision budget."""

    def __init__(self, point: Any):
        super().__init__(
            f"quadrature tolerance not met at V = {point.V} mV "
            f"(estimate {point.I}, error {point.est_error})"
        )
        self.point = point


# ------------------------------
# Analysis
# ------------------------------
class AnalysisError(GrapheneNdrError):
    """A device metric could not be extracted."""


class ZeroWidthGap(AnalysisError):
    """Normal incidence: the transmission gap collapses to a point."""


class NoGapFound(AnalysisError):
    """No zero-transmission run in the samples."""


class NoNdrDetected(AnalysisError):
    """Current never decreases with bias."""


# ------------------------------
# IO
# ------------------------------
class CsvFormatError(GrapheneNdrError):
    """Input CSV does not match the expected table layout."""

    def __init__(self, message: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
