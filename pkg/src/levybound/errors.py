"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration/parameter
problems exit 1, file-format and I/O problems exit 2, analysis
precondition failures exit 3.
"""


class InvalidParameterError(ValueError):
    """A numeric argument or configuration value is outside its legal domain."""


class DimensionMismatchError(ValueError):
    """Vector/matrix shapes do not line up."""


class DivergedTraceError(RuntimeError):
    """A training trace flagged as diverged was fed to an estimator."""


class DataFormatError(ValueError):
    """A file (IDX, records CSV, config) failed to parse; message names the field."""


class AnalysisPreconditionError(ValueError):
    """An analysis routine's input does not satisfy its precondition."""
