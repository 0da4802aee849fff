class BellCommError(Exception):
    """Base class for domain errors; ``code`` is a stable machine-readable tag."""

    code = "domain_error"


class ScenarioError(BellCommError, ValueError):
    code = "bad_scenario"


class InvalidTableError(BellCommError, ValueError):
    code = "invalid_table"


class DimensionError(BellCommError, ValueError):
    code = "dimension_mismatch"


class EnumerationCapError(BellCommError):
    code = "enumeration_cap"


class UnboundedError(BellCommError):
    code = "unbounded"


class SignalingError(BellCommError, ValueError):
    """Raised when a table signals in the direction a protocol needs."""

    code = "signaling"

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = list(witness)


class SchemaError(BellCommError, ValueError):
    code = "schema"
