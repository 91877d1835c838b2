# src/services/config_service.py
import os
from dataclasses import dataclass
from dotenv import load_dotenv

from src.lab.errors import ConfigError

# Load environment variables
load_dotenv()


@dataclass(frozen=True)
class Settings:
    """
    Process-level settings read from the environment (or a .env file).
    Run-level parameters live in the RunConfig document instead.
    """
    output_dir: str = "output"
    log_level: str = "INFO"
    default_N: int = 256

    @classmethod
    def from_env(cls) -> "Settings":
        raw_n = os.getenv("DLPLAB_DEFAULT_N", "256")
        try:
            default_N = int(raw_n)
        except ValueError:
            raise ConfigError(f"DLPLAB_DEFAULT_N must be an integer, got {raw_n!r}", field="DLPLAB_DEFAULT_N")
        return cls(
            output_dir=os.getenv("DLPLAB_OUTPUT_DIR", "output"),
            log_level=os.getenv("DLPLAB_LOG_LEVEL", "INFO").upper(),
            default_N=default_N,
        )


# Singleton instance
_settings = None


def get_settings() -> Settings:
    """Get or create the settings singleton."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
