"""
Exception hierarchy for wlan-htnet
"""

from typing import Optional, Sequence


class WlanHtnetError(Exception):
    """Base class for every error raised by the library"""


class InvalidNodeError(WlanHtnetError):
    """A node cannot be turned into a feature vector"""


class InvalidEdgeError(WlanHtnetError):
    """An edge cannot be turned into a feature vector"""


class DatasetParseError(WlanHtnetError):
    """A dataset line does not follow the JSON-lines schema"""

    def __init__(self, line: int, field: str, message: str) -> None:
        super().__init__(f"line {line}: field '{field}': {message}")
        self.line = line
        self.field = field


class ShapeError(WlanHtnetError):
    """Operands of a tensor op have incompatible shapes"""

    def __init__(
        self, op: str, left: Sequence[int], right: Optional[Sequence[int]] = None
    ) -> None:
        detail = f"{tuple(left)}" if right is None else f"{tuple(left)} vs {tuple(right)}"
        super().__init__(f"{op}: incompatible shapes {detail}")
        self.op = op
        self.left = tuple(left)
        self.right = tuple(right) if right is not None else None


class AutodiffUsageError(WlanHtnetError):
    """The tape was used out of order (e.g. backward before forward)"""


class NonFiniteError(WlanHtnetError):
    """A forward op produced NaN or Inf from finite inputs"""


class ConfigError(WlanHtnetError):
    """Invalid or infeasible configuration"""


class CheckpointError(WlanHtnetError):
    """Checkpoint missing, malformed or written by an incompatible version"""


class TrainingDivergedError(WlanHtnetError):
    """Training loss became NaN or Inf"""

    def __init__(self, epoch: int, message: str = "loss is not finite") -> None:
        super().__init__(f"epoch {epoch}: {message}")
        self.epoch = epoch


class EmptyTargetError(WlanHtnetError):
    """A loss or metric was requested over an empty set of labels"""
