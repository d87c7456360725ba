"""Exception hierarchy shared across the package.

ConfigError maps to CLI exit code 2, DataError (and subclasses) to exit
code 3.
"""


class MoralnetError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MoralnetError):
    """Invalid configuration: bad flag values, missing files, bad config keys."""


class DataError(MoralnetError):
    """Malformed or inconsistent input data."""


class DictionaryError(DataError):
    """Dictionary file violates the expected grammar."""


class SynthesisError(MoralnetError):
    """Synthetic corpus parameters cannot be realized."""


class PipelineStageError(DataError):
    """A pipeline stage failed; carries the stage name and input position."""

    def __init__(self, stage: str, message: str, line: int | None = None):
        self.stage = stage
        self.line = line
        where = f"stage '{stage}'" + (f", line {line}" if line is not None else "")
        super().__init__(f"{where}: {message}")
