# src/services/graph/workflow.py
"""
Run pipeline for one command:

    START -> config_parser -> compute_worker -> checker -> reporter -> END
                          \\-> checker (config error)

Every stage is a BaseAgent node; routing reads the shared RunState.
"""
import logging
from typing import Any, Dict, Optional

from langgraph.graph import StateGraph, START, END
from src.utils.state import RunState
from src.services.agents.config_parser import ConfigParserAgent
from src.services.agents.compute_worker import ComputeWorkerAgent
from src.services.agents.checker import CheckerAgent
from src.services.agents.reporter import ReporterAgent

logger = logging.getLogger(__name__)


def route_after_config(state: RunState):
    """Config errors skip the computation."""
    if state.get("error"):
        logger.debug("[ROUTER] Config error → checker")
        return "checker"
    logger.debug("[ROUTER] Config parsed → compute_worker")
    return "compute"


def route_after_compute(state: RunState):
    logger.debug("[ROUTER] Computation finished → checker")
    return "checker"


def route_after_checker(state: RunState):
    logger.debug("[ROUTER] Summary ready → reporter")
    return "reporter"


def build_workflow():
    builder = StateGraph(RunState)

    builder.add_node("config_parser", ConfigParserAgent())
    builder.add_node("compute_worker", ComputeWorkerAgent())
    builder.add_node("checker", CheckerAgent())
    builder.add_node("reporter", ReporterAgent())

    builder.add_edge(START, "config_parser")
    builder.add_conditional_edges(
        "config_parser",
        route_after_config,
        {
            "compute": "compute_worker",
            "checker": "checker"
        }
    )
    builder.add_conditional_edges(
        "compute_worker",
        route_after_compute,
        {
            "checker": "checker"
        }
    )
    builder.add_conditional_edges(
        "checker",
        route_after_checker,
        {
            "reporter": "reporter"
        }
    )
    builder.add_edge("reporter", END)
    return builder.compile()


# Compile the workflow graph
app = build_workflow()


def run(command: Optional[str], raw_config: Dict[str, Any],
        overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Execute one command; returns the final state (exit_code, summary, report_path, artifacts)."""
    initial_state: RunState = {
        "command": command,
        "raw_config": raw_config,
        "overrides": overrides or {},
        "config": None,
        "result": None,
        "checks": [],
        "tables": {},
        "error": None,
        "messages": [],
        "completed_tasks": [],
        "summary": "",
        "exit_code": 1,
        "report_path": "",
        "artifacts": [],
    }
    return app.invoke(initial_state)
