"""Exception taxonomy shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 2, MissingArtifactError -> 3,
CorruptArtifactError (incl. version mismatches) -> 4, anything else -> 1.
"""


class TxnXrayError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(TxnXrayError):
    """Invalid configuration or corpus specification."""


class DataError(TxnXrayError):
    """Dataset violates a precondition (empty class, too small, ...)."""


class ContractError(TxnXrayError):
    """Caller violated an interface contract (dimension mismatch, ...)."""


class CapacityError(TxnXrayError):
    """Requested computation exceeds a stated capacity bound."""


class TrainingError(TxnXrayError):
    """Training diverged or produced non-finite values."""


class NumericalError(TxnXrayError):
    """A numerical solve failed beyond the documented recovery steps."""


class MissingArtifactError(TxnXrayError):
    """A pipeline stage requires an artifact that has not been produced."""

    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"missing artifact: {self.path}")


class CorruptArtifactError(TxnXrayError):
    """An artifact file exists but cannot be parsed."""


class ArtifactVersionError(CorruptArtifactError):
    """An artifact carries an unknown schema_version."""
