"""Exception types shared across the package."""


class GroupComputationError(Exception):
    """Base class for every error raised by this package."""


class CapExceeded(GroupComputationError):
    """An enumeration grew past its element cap."""


class InvalidGenerator(GroupComputationError, ValueError):
    pass


class DegreeMismatch(GroupComputationError, ValueError):
    pass


class NotSubgroup(GroupComputationError, ValueError):
    pass


class NotElement(GroupComputationError, ValueError):
    pass


class NotMaterialized(GroupComputationError):
    pass


class NotTransitive(GroupComputationError, ValueError):
    pass


class NotNormal(GroupComputationError, ValueError):
    pass


class NotGeneratingCoset(GroupComputationError, ValueError):
    pass


class NotHall(GroupComputationError, ValueError):
    pass


class NoComplementFound(GroupComputationError):
    """Complement search exhausted; impossible for a genuine normal Hall subgroup."""


class BadPartition(GroupComputationError, ValueError):
    pass


class NotPrime(GroupComputationError, ValueError):
    pass


class TooLarge(GroupComputationError, ValueError):
    pass


class UnsupportedFamily(GroupComputationError, ValueError):
    pass


class Singular(GroupComputationError, ValueError):
    pass


class FamilyMismatch(GroupComputationError, ValueError):
    pass


class InexactCriterion(GroupComputationError):
    """The squarefree test does not characterize regular semisimple elements here."""


class UnknownCorpus(GroupComputationError, KeyError):
    pass


class SpecError(GroupComputationError, ValueError):
    """A group or classical spec document is malformed."""


class VerificationFailure(GroupComputationError, AssertionError):
    """Two routes that must agree exactly did not."""
