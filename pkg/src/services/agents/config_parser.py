import logging
from typing import Dict, Any

from src.lab.errors import ConfigError
from src.services.agents.base import BaseAgent
from src.services.config_service import get_settings
from src.utils.messages import MessageType
from src.utils.run_config import parse_run_config

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 2


class ConfigParserAgent(BaseAgent):
    """
    Turns the raw config document plus CLI overrides into a validated RunConfig.
    On failure the run skips the computation and exits with code 2.
    """
    name = "config_parser"

    def should_activate(self, state: Dict[str, Any]) -> bool:
        if state.get("config") is None:
            logger.debug("[%s] Activating: config not yet parsed", self.name)
            return True
        return False

    def run(self, state):
        settings = get_settings()
        try:
            config = parse_run_config(
                state.get("raw_config") or {},
                command=state.get("command"),
                overrides=state.get("overrides"),
                default_N=settings.default_N,
                default_out=settings.output_dir,
            )
        except ConfigError as exc:
            logger.error("[%s] config error (%s): %s", self.name, exc.field, exc.message)
            result = self.send_message(
                to_agent="reporter",
                message_type=MessageType.ERROR,
                content={"status": "config_error", "field": exc.field}
            )
            result.update({"error": exc.to_dict(), "exit_code": EXIT_CONFIG_ERROR})
            return result

        logger.info("[%s] %s with N=%d (config %s)", self.name, config.command, config.N, config.config_hash()[:12])
        result = self.send_message(
            to_agent="compute_worker",
            message_type=MessageType.REQUEST,
            content={"command": config.command, "config_hash": config.config_hash()}
        )
        result["config"] = config
        return result
