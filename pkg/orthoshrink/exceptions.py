"""Exception hierarchy shared by every orthoshrink module"""


class OrthoShrinkError(Exception):
    """Base class for all errors raised by orthoshrink."""


class NumericError(OrthoShrinkError):
    """Non-finite input or output, or a failed decomposition."""


class DegenerateSpectrumError(NumericError):
    """
    Raised when a formula with (λₖ−λₗ) or 1/λₖ denominators meets a
    spectrum that fails the gap check.

    Args:
        check: The failing GapCheck (carries the offending pair or index)
    """

    def __init__(self, check, message=None):
        self.check = check
        super().__init__(message or f"degenerate spectrum: {check.describe()}")


class SingularityError(NumericError):
    """A zero singular value met a nonzero shrinkage coefficient."""


class InvalidDimensionsError(OrthoShrinkError, ValueError):
    """Problem dimensions outside the range a formula is defined on."""


class EstimatorLabelError(OrthoShrinkError, ValueError):
    """Unknown estimator label; carries the list of valid labels."""

    def __init__(self, label, valid_labels):
        self.label = label
        self.valid_labels = tuple(valid_labels)
        super().__init__(
            f"unknown estimator '{label}'; valid labels: {', '.join(self.valid_labels)}"
        )


class SamplingError(OrthoShrinkError):
    """Monte Carlo rejection budget exceeded."""


class ConfigError(OrthoShrinkError, ValueError):
    """Invalid command-line or experiment configuration."""
