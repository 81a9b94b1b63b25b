"""Exception types shared across the pipeline."""


class SeqcodeError(Exception):
    """Base class for all pipeline errors."""


class LexError(SeqcodeError):
    """Source text could not be tokenized. Carries a byte position."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at byte {position})")
        self.position = position


class ParseError(SeqcodeError):
    """Source text could not be parsed. Carries a byte position."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at byte {position})")
        self.position = position


class StructureError(SeqcodeError):
    """A syntax tree is missing an expected structural element."""


class TrainError(SeqcodeError):
    """Training could not start or produced a non-finite loss."""


class CapError(SeqcodeError):
    """Code/AST pairing instance could not be generated."""


class InputError(SeqcodeError):
    """Model input construction failed (e.g. empty code segment)."""


class DecodeError(SeqcodeError):
    """An id sequence contains ids outside the vocabulary."""


class LengthError(SeqcodeError):
    """A sequence exceeds the configured length budget."""


class MathError(SeqcodeError):
    """Numerically invalid input (e.g. zero vector for cosine)."""


class MetricError(SeqcodeError):
    """A metric was called on an empty or malformed input."""


class MiningError(SeqcodeError):
    """Negative mining exhausted the candidate pool."""


class CompatError(SeqcodeError):
    """Checkpoint and vocabulary do not match."""
