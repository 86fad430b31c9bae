"""Exception types shared across the package."""


class VarorbitError(Exception):
    """Base class for all package errors."""


class CollisionError(VarorbitError):
    """A configuration was evaluated at or too close to a collision.

    ``sample_index`` is the quadrature node at fault, or None for a
    single-configuration evaluation.
    """

    def __init__(self, min_distance, sample_index=None):
        self.min_distance = min_distance
        self.sample_index = sample_index
        where = "" if sample_index is None else f" at sample {sample_index}"
        super().__init__(
            f"mutual distance {min_distance:.3e} below collision floor{where}"
        )


class ShapeError(VarorbitError):
    """Array arguments do not match the system's (n, d)."""


class InvalidGenerator(VarorbitError):
    """A group generator violates orthogonality or mass preservation."""


class CapExceeded(VarorbitError):
    """Group closure grew past the configured cap (likely infinite group)."""


class ClassificationError(VarorbitError):
    """The time-action image does not fit the cyclic/brake/dihedral scheme."""


class SymmetryViolation(VarorbitError):
    """A reconstructed trajectory failed a symmetry consistency check."""


class InitFailure(VarorbitError):
    """Random initialization kept producing near-collision paths."""


class TruncationError(VarorbitError):
    """Refused to drop occupied Fourier modes without an explicit flag."""
