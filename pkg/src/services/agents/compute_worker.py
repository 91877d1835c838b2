import logging
from typing import Dict, Any, Optional

import numpy as np

from src.lab.errors import ConfigError, LabError
from src.services.agents.base import BaseAgent
from src.services.tools.base import BaseTool
from src.services.tools.registry import build_registry
from src.utils.messages import MessageType

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


class ComputeWorkerAgent(BaseAgent):
    """
    Dispatches the parsed command to its tool and stores payload, checks and tables.
    Numerical failures are caught here and surfaced with their module and context.
    """
    name = "compute_worker"

    def __init__(self, registry: Optional[Dict[str, BaseTool]] = None):
        self.registry = registry if registry is not None else build_registry()

    def should_activate(self, state: Dict[str, Any]) -> bool:
        return state.get("config") is not None and state.get("result") is None and not state.get("error")

    def _fail(self, error: Dict[str, Any], exit_code: int) -> Dict[str, Any]:
        result = self.send_message(
            to_agent="reporter",
            message_type=MessageType.ERROR,
            content={"status": "failed", "module": error["module"], "error": error["error"]}
        )
        result.update({"error": error, "exit_code": exit_code})
        return result

    def run(self, state):
        config = state["config"]
        tool = self.registry[config.command]
        logger.info("[%s] running %s", self.name, tool.name)
        try:
            outcome = tool(config)
        except LabError as exc:
            logger.error("[%s] %s: %s", self.name, exc.module, exc.message)
            return self._fail(exc.to_dict(), EXIT_NUMERICAL_FAILURE)
        except ConfigError as exc:
            logger.error("[%s] config error (%s): %s", self.name, exc.field, exc.message)
            return self._fail(exc.to_dict(), EXIT_CONFIG_ERROR)
        except np.linalg.LinAlgError as exc:
            logger.error("[%s] linear algebra failure: %s", self.name, exc)
            return self._fail({"module": "lab", "error": "LinAlgError", "message": str(exc)}, EXIT_NUMERICAL_FAILURE)
        except ValueError as exc:
            # precondition violations on plain arguments
            logger.error("[%s] invalid input: %s", self.name, exc)
            return self._fail({"module": "cli", "error": "ValueError", "message": str(exc)}, EXIT_CONFIG_ERROR)

        result = self.send_message(
            to_agent="checker",
            message_type=MessageType.REQUEST,
            content={"status": "computed", "checks": len(outcome.checks), "tables": sorted(outcome.tables)}
        )
        result.update({
            "result": outcome.payload,
            "checks": [check.to_dict() for check in outcome.checks],
            "tables": outcome.tables,
        })
        return result
