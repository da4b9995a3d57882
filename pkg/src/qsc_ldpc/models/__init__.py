"""Data models."""
from .channel import ChannelParams, LayerProfile, QscStarParams
from .code import ConstructionSpec, DegreeDistribution, DesignProblem
from .config import (
    CapacitySection,
    CodeSource,
    DesignSection,
    ExitSection,
    LayeredSection,
    RunConfig,
    SimConfig,
)
from .results import (
    BerRecord,
    ConstructionReport,
    DesignResult,
    ExitCurve,
    McEstimate,
)

__all__ = [
    "BerRecord",
    "CapacitySection",
    "ChannelParams",
    "CodeSource",
    "ConstructionReport",
    "ConstructionSpec",
    "DegreeDistribution",
    "DesignProblem",
    "DesignResult",
    "DesignSection",
    "ExitCurve",
    "ExitSection",
    "LayerProfile",
    "LayeredSection",
    "McEstimate",
    "QscStarParams",
    "RunConfig",
    "SimConfig",
]
