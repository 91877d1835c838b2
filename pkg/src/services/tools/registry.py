from typing import Dict

from src.services.tools.algcurve_tools import BranchPointsTool, ReciprocityTool, ReflectTool, TrapCheckTool
from src.services.tools.base import BaseTool
from src.services.tools.matching_tools import MatchMelnikovTool, MatchPowersTool, MatchVerifyTool, NonexistenceTool
from src.services.tools.potential_tools import DirichletTool, GaussCheckTool, SpectrumTool
from src.services.tools.sphere_tool import SphereCheckTool

TOOLS = (
    GaussCheckTool,
    SpectrumTool,
    DirichletTool,
    MatchVerifyTool,
    MatchMelnikovTool,
    MatchPowersTool,
    NonexistenceTool,
    BranchPointsTool,
    ReflectTool,
    TrapCheckTool,
    ReciprocityTool,
    SphereCheckTool,
)


def build_registry() -> Dict[str, BaseTool]:
    """Command name -> tool instance."""
    registry: Dict[str, BaseTool] = {}
    for tool_cls in TOOLS:
        tool = tool_cls()
        for command in tool.commands:
            registry[command] = tool
    return registry


def get_tool(command: str) -> BaseTool:
    registry = build_registry()
    if command not in registry:
        raise KeyError(f"no tool registered for command {command!r}")
    return registry[command]
