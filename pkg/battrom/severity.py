import logging
from enum import Enum


class Severity(Enum):
    """How bad a failed operation is for the run it belongs to. HIGH
    means the inputs are unusable (bad config, a grid that cannot be
    built); MEDIUM and LOW concern a single call."""
    HIGH = 0
    MEDIUM = 1
    LOW = 2

    @property
    def log_level(self) -> int:
        return (logging.ERROR, logging.WARNING, logging.INFO)[self.value]
