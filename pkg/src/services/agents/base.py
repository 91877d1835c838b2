# src/services/agents/base.py
import logging
from abc import ABC, abstractmethod
from typing import Dict, Any, List
from src.utils.messages import Message, MessageType

logger = logging.getLogger(__name__)


class BaseAgent(ABC):
    """
    Base class for all pipeline stages.

    Each stage:
    - Decides if it should activate based on current state
    - Leaves messages for the other stages in the run trace
    - Executes its one job
    """

    name: str = "base-agent"

    @abstractmethod
    def should_activate(self, state: Dict[str, Any]) -> bool:
        """
        Determine if this stage should run for the current state.

        Args:
            state: Current run state

        Returns:
            True if the stage should run, False otherwise
        """
        pass

    @abstractmethod
    def run(self, state: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execute the stage's core logic.

        Args:
            state: Current LangGraph state

        Returns:
            Partial state update
        """
        pass

    def read_messages(self, state: Dict[str, Any]) -> List[Message]:
        """Messages addressed to this stage (or broadcast), in trace order."""
        return [
            Message.from_dict(msg_data)
            for msg_data in state.get("messages", [])
            if msg_data["to_agent"] in (self.name, "broadcast")
        ]

    def send_message(self, to_agent: str, message_type: MessageType,
                     content: Dict[str, Any]) -> Dict[str, Any]:
        """
        Send a message to another stage.

        Returns:
            State update with the new message
        """
        message = Message(
            from_agent=self.name,
            to_agent=to_agent,
            message_type=message_type,
            content=content
        )
        return {"messages": [message.to_dict()]}

    def __call__(self, state: Dict[str, Any]) -> Dict[str, Any]:
        """
        Makes the stage usable as a LangGraph node.
        Runs when requested by another stage or when should_activate says so.
        """
        messages = self.read_messages(state)
        has_request = any(
            msg.message_type == MessageType.REQUEST and msg.to_agent == self.name for msg in messages
        )

        if has_request or self.should_activate(state):
            result = self.run(state)

            notification = self.send_message(
                to_agent="broadcast",
                message_type=MessageType.NOTIFY,
                content={"status": "completed", "agent": self.name}
            )
            result["messages"] = result.get("messages", []) + notification["messages"]
            result["completed_tasks"] = result.get("completed_tasks", []) + [self.name]
            return result

        logger.debug("[%s] skipped", self.name)
        return self.send_message(
            to_agent="broadcast",
            message_type=MessageType.NOTIFY,
            content={"status": "skipped", "agent": self.name, "reason": "not_needed"}
        )
