"""Exception hierarchy shared across the toolkit."""


class PmirisError(Exception):
    """Base class for all toolkit errors."""


class GazeParseError(PmirisError):
    """A gaze-log row could not be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class GazeOrderingError(PmirisError):
    """Timestamps in a gaze log regressed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class EmptyMapError(PmirisError):
    """No fixation landed inside the image; an attention map cannot be built."""


class GridFormatError(PmirisError):
    """A saliency-grid file violates the grid format."""


class GridDomainError(PmirisError):
    """A saliency-grid value is outside the allowed domain (negative)."""


class DegenerateMapError(PmirisError):
    """An all-zero grid cannot be normalized into a probability map."""


class GridShapeError(PmirisError):
    """Two grids that must share dimensions do not."""


class ContractError(PmirisError):
    """An input violates a caller-side contract (e.g. unnormalized map)."""


class IncompleteGroupError(PmirisError):
    """An ensemble pair is missing a verdict from a selected member."""

    def __init__(self, pairs):
        self.pairs = list(pairs)
        super().__init__(f"missing member verdicts for pairs: {self.pairs}")


class CapacityError(PmirisError):
    """The pair pool cannot satisfy a session request."""


class NotFoundError(PmirisError):
    """Unknown session or resource."""


class SequenceError(PmirisError):
    """A decision was submitted for a pair other than the current one."""


class ConflictError(PmirisError):
    """A decision was already recorded for this pair."""
