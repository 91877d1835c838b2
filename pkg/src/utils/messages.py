# src/utils/messages.py
"""
Stage-to-stage messages recorded in the run trace.
Messages carry no wall-clock data; the reporter numbers them in order.
"""
from typing import Dict, Any, Optional
from enum import Enum
from dataclasses import dataclass


class MessageType(Enum):
    """Types of messages stages can send."""
    REQUEST = "request"  # Ask another stage to act
    NOTIFY = "notify"  # Stage finished or skipped
    ERROR = "error"  # Stage stopped on a failure


@dataclass
class Message:
    """A message between pipeline stages."""
    from_agent: str
    to_agent: str  # Can be "broadcast" for all stages
    message_type: MessageType
    content: Dict[str, Any]
    reply_to: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "from_agent": self.from_agent,
            "to_agent": self.to_agent,
            "message_type": self.message_type.value,
            "content": self.content,
            "reply_to": self.reply_to
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Message":
        return cls(
            from_agent=data["from_agent"],
            to_agent=data["to_agent"],
            message_type=MessageType(data["message_type"]),
            content=data["content"],
            reply_to=data.get("reply_to")
        )
