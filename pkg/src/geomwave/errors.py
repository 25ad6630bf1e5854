"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: schema/integrity problems -> 2,
geometry density (cut locus) problems -> 3, verification failures -> 4.
"""


class GeomwaveError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class SchemaError(GeomwaveError):
    """A file does not conform to the expected schema, or metadata is
    inconsistent (wrong predictor, corrupted pyramid, non-unit points)."""

    exit_code = 2


class BaseMismatchError(SchemaError):
    """Stored detail base point disagrees with the recomputed prediction."""


class CutLocusError(GeomwaveError):
    """A geometry operation was asked to cross (or get too close to) the
    cut locus; the data is not dense enough."""

    exit_code = 3


class DensityError(CutLocusError):
    """Cut-locus failure inside a multiscale transform, annotated with the
    level and index where it occurred."""

    def __init__(self, message, level=None, index=None):
        super().__init__(message)
        self.level = level
        self.index = index

    def __str__(self):
        base = super().__str__()
        loc = []
        if self.level is not None:
            loc.append(f"level {self.level}")
        if self.index is not None:
            loc.append(f"index {self.index}")
        return f"{base} ({', '.join(loc)})" if loc else base


class VerificationFailure(GeomwaveError):
    """One or more verification checks did not meet their threshold."""

    exit_code = 4
