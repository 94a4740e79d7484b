from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from envolved import EnvVar, env_var

__all__ = ["DEFAULT_RESIDUAL_LIMIT", "LogLevel", "Settings", "get_settings", "non_negative", "settings_ev", "wide_enough"]

# residual entries kept per check in a report unless --residual-limit says otherwise
DEFAULT_RESIDUAL_LIMIT = 10

MIN_REPORT_WIDTH = 40


class LogLevel(Enum):
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR


@dataclass(frozen=True)
class Settings:
    """
    Settings read from the environment. They only change stderr logging and the wrapping of the text
    report, never the content of a report.
    """

    log_level: LogLevel = LogLevel.WARNING
    report_width: int = 100


def non_negative(x: int) -> int:
    if x < 0:
        raise ValueError(f"expected a non-negative value, got {x}")
    return x


def wide_enough(x: int) -> int:
    if x < MIN_REPORT_WIDTH:
        raise ValueError(f"report width must be at least {MIN_REPORT_WIDTH}, got {x}")
    return x


settings_ev: EnvVar[Settings] = env_var(
    "HYDROBRACKET_",
    type=Settings,
    args={
        "log_level": env_var(
            "LOG_LEVEL",
            type=LogLevel,
            default=LogLevel.WARNING,
            description="Logging level of the command line (DEBUG, INFO, WARNING or ERROR).",
        ),
        "report_width": env_var(
            "REPORT_WIDTH",
            type=int,
            default=100,
            validators=[wide_enough],
            description="Wrap width of the text rendering of reports.",
        ),
    },
)


def get_settings() -> Settings:
    return settings_ev.get()
