"""Shared exception types."""


class AmbientMismatch(ValueError):
    """Operands live in different graded ambient spaces."""


class ConstraintViolation(ValueError):
    """Parameters violate a cone-defining constraint (isotropy, fixed subspace)."""


class NumericalFailure(RuntimeError):
    """A numerical procedure could not certify its result (step-size failure,
    unstable rank, exhausted resampling)."""
