from typing import Any, Optional
from .severity import Severity


class RomException(Exception):
    """RomException is the basic toolkit exception."""
    kind = 'error'

    def __init__(self, msg: str, severity: Severity = Severity.MEDIUM):
        assert msg, 'RomException message must not be empty'
        self.severity = severity
        super().__init__(msg)

    def to_dict(self):
        return {
            "error": self.__str__(),
            "kind": self.kind,
            "severity": self.severity.name.lower(),
        }


class DomainError(RomException):
    """Argument outside the domain of an operation."""
    kind = 'domain'


class NumericError(RomException):
    kind = 'numeric'


class ConfigError(RomException):
    """Invalid configuration, parameter table or geometry."""
    kind = 'config'

    def __init__(self, msg: str, severity: Severity = Severity.HIGH):
        super().__init__(msg, severity)


class StepError(RomException):
    """Explicit time step above the stability bound."""
    kind = 'step'

    def __init__(self, msg: str, suggested_dt: float):
        self.suggested_dt = suggested_dt
        super().__init__(msg)

    def to_dict(self):
        return {**super().to_dict(), 'suggested_dt': self.suggested_dt}


class FitError(RomException):
    """FitError carries the best candidate found before giving up."""
    kind = 'fit'

    def __init__(self, msg: str, best: Optional[Any] = None):
        self.best = best
        super().__init__(msg)


class BuildError(RomException):
    kind = 'build'

    def __init__(self, msg: str, vertex: Optional[tuple] = None):
        self.vertex = vertex
        super().__init__(msg, Severity.HIGH)

    def to_dict(self):
        return {
            **super().to_dict(),
            'vertex': None if self.vertex is None else list(self.vertex),
        }


class ConstructionError(RomException):
    kind = 'construction'
