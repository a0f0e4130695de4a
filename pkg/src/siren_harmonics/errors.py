"""Exception types shared across the package."""


class SirenHarmonicsError(Exception):
    """Base class for all package errors."""


class DomainError(SirenHarmonicsError, ValueError):
    """Input outside the supported numeric regime."""


class ValidationError(SirenHarmonicsError, ValueError):
    """Structurally valid input with inconsistent content (e.g. shape mismatch)."""


class ParseError(SirenHarmonicsError, ValueError):
    """Malformed serialized input; the message names the offending field."""


class EnumerationCapError(SirenHarmonicsError, RuntimeError):
    """Requested index enumeration exceeds the configured cap."""


class TrainingDivergedError(SirenHarmonicsError, RuntimeError):
    """Training loss blew past the divergence guard."""

    def __init__(self, step: int, loss: float):
        self.step = step
        self.loss = loss
        super().__init__(
            f"training diverged at step {step}: mse={loss:.6g} exceeds guard; "
            "lower the learning rate or check the dataset scale"
        )
