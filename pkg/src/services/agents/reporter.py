import logging
from pathlib import Path
from typing import Dict, Any, List

from src.lab import io as lab_io
from src.services.agents.base import BaseAgent
from src.services.config_service import get_settings
from src.utils.messages import MessageType
from src.utils.run_config import TOOL_NAME, TOOL_VERSION

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


class ReporterAgent(BaseAgent):
    """
    Gathers the outputs of all stages and persists them: report.json plus one CSV per table.
    Every artifact carries the tool version and the config hash; nothing time-dependent is written.
    """
    name = "reporter"

    def should_activate(self, state: Dict[str, Any]) -> bool:
        return not state.get("report_path")

    def _out_dir(self, state: Dict[str, Any]) -> Path:
        config = state.get("config")
        if config is not None:
            return Path(config.out)
        return Path((state.get("overrides") or {}).get("out") or get_settings().output_dir)

    def run(self, state):
        config = state.get("config")
        config_hash = config.config_hash() if config is not None else None
        out_dir = self._out_dir(state)
        provenance = f"{TOOL_NAME} {TOOL_VERSION} config_hash={config_hash}"

        artifacts: List[str] = []
        for table_name, table in sorted((state.get("tables") or {}).items()):
            path = out_dir / f"{table_name}.csv"
            lab_io.write_csv(path, table.header, table.rows, comment=provenance)
            artifacts.append(path.name)

        summary = state.get("summary", "")
        if not summary:
            summary = f"FAIL {state.get('command', '?')}: no checks were run"
        trace = [{"seq": seq, **msg} for seq, msg in enumerate(state.get("messages", []))]
        report = {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": config.command if config is not None else state.get("command"),
            "config_hash": config_hash,
            "config": config.to_dict() if config is not None else state.get("raw_config"),
            "result": state.get("result"),
            "checks": state.get("checks", []),
            "error": state.get("error"),
            "summary": summary,
            "exit_code": state.get("exit_code", 1),
            "artifacts": artifacts,
            "trace": trace,
        }
        path = out_dir / REPORT_NAME
        lab_io.write_json(path, report)
        logger.info("[%s] wrote %s (+%d csv)", self.name, path, len(artifacts))

        result = self.send_message(
            to_agent="broadcast",
            message_type=MessageType.NOTIFY,
            content={"status": "report_written", "artifacts": [REPORT_NAME] + artifacts}
        )
        result.update({"report_path": str(path), "artifacts": artifacts, "summary": summary,
                       "exit_code": state.get("exit_code", 1)})
        return result
