"""Error hierarchy shared by every app."""


class ManifoldConcError(Exception):
    """Base class for all harness errors."""
    pass


class DimensionMismatchError(ManifoldConcError, ValueError):
    """Operand shapes do not fit together."""
    pass


class NotOnManifoldError(ManifoldConcError, ValueError):
    """A point, tangent vector or projection violates its defining identity."""
    pass


class PreconditionError(ManifoldConcError, ValueError):
    """An argument is outside the domain of the operation."""
    pass


class SamplingError(ManifoldConcError):
    """The sampler exhausted its retry budget on degenerate Gram matrices."""
    pass


class RetractionError(ManifoldConcError):
    """The polar retraction became numerically rank deficient."""
    pass


class ValidityError(ManifoldConcError):
    """A bound is undefined for the requested parameters."""

    def __init__(self, message, threshold=None, provenance=''):
        super().__init__(message)
        self.threshold = threshold
        self.provenance = provenance

    def __str__(self):
        text = super().__str__()
        if self.provenance:
            text = f'{text} [{self.provenance}]'
        return text


class MissingNormError(ManifoldConcError, KeyError):
    """A bound variant was requested without the norm inputs it needs."""

    def __init__(self, missing, provenance=''):
        super().__init__(missing)
        self.missing = tuple(missing)
        self.provenance = provenance

    def __str__(self):
        return f"missing norm input(s) {', '.join(self.missing)} [{self.provenance}]"


class EvaluationError(ManifoldConcError):
    """A functional failed on a Monte Carlo sample."""

    def __init__(self, message, sample_index):
        super().__init__(f'{message} (sample {sample_index})')
        self.sample_index = sample_index


class ConfigError(ManifoldConcError):
    """Invalid experiment configuration."""
    pass


class MatrixFormatError(ConfigError):
    """Malformed matrix or tensor CSV file."""
    pass
