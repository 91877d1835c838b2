# src/utils/state.py
from typing_extensions import TypedDict
from typing import List, Dict, Any, Optional
from typing_extensions import Annotated
import operator

from src.utils.run_config import RunConfig


class RunState(TypedDict, total=False):
    """
    State shared across all pipeline stages for one command run.
    """
    # Input
    command: str
    raw_config: Dict[str, Any]
    overrides: Dict[str, Any]

    # Parsed and computed data
    config: RunConfig
    result: Dict[str, Any]
    checks: List[Dict[str, Any]]
    tables: Dict[str, Any]
    error: Optional[Dict[str, Any]]

    # Stage coordination
    messages: Annotated[List[Dict[str, Any]], operator.add]
    completed_tasks: Annotated[List[str], operator.add]

    # Outcome
    summary: str
    exit_code: int
    report_path: str
    artifacts: List[str]
