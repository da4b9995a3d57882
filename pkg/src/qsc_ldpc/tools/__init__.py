"""Subcommand tools for the q-SC LDPC toolkit."""
from .capacity_tool import CapacityTool
from .construct_tool import ConstructTool
from .design_tool import DesignTool
from .exit_tool import ExitTool
from .layered_tool import LayeredTool
from .simulate_tool import SimulateTool
from .verifier_tool import VerifierTool

__all__ = [
    "CapacityTool",
    "ConstructTool",
    "DesignTool",
    "ExitTool",
    "LayeredTool",
    "SimulateTool",
    "VerifierTool",
]
