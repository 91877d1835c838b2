import logging
from typing import Dict, Any

from src.services.agents.base import BaseAgent
from src.utils.messages import MessageType

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1


class CheckerAgent(BaseAgent):
    """
    Validates the computed checks against their tolerances and writes the
    one-line PASS/FAIL summary. Errors from earlier stages keep their exit code.
    """
    name = "checker"

    def should_activate(self, state: Dict[str, Any]) -> bool:
        already_checked = "summary" in state and state.get("summary")
        return not already_checked

    def run(self, state):
        command = state["config"].command if state.get("config") is not None else state.get("command", "?")
        error = state.get("error")
        if error:
            summary = f"FAIL {command}: {error['module']}: {error['message']}"
            logger.info("[%s] %s", self.name, summary)
            return {"summary": summary}

        checks = state.get("checks", [])
        failed = [c["name"] for c in checks if not c["passed"]]
        if failed:
            summary = f"FAIL {command}: {len(failed)}/{len(checks)} checks failed ({', '.join(failed)})"
            exit_code = EXIT_CHECK_FAILURE
        else:
            summary = f"PASS {command}: {len(checks)}/{len(checks)} checks passed"
            exit_code = EXIT_PASS
        logger.info("[%s] %s", self.name, summary)
        result = self.send_message(
            to_agent="reporter",
            message_type=MessageType.NOTIFY,
            content={"status": "checked", "passed": not failed, "failed": failed}
        )
        result.update({"summary": summary, "exit_code": exit_code})
        return result
