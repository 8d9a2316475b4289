"""Exception hierarchy shared by all corprod modules."""


class CorprodError(Exception):
    """Base class for all library errors."""


class InvariantViolation(CorprodError):
    """A structural invariant of a domain object does not hold."""


class SizeCapExceeded(CorprodError):
    """A computation would exceed the configured size cap."""


class NotASubgroup(InvariantViolation):
    """The given element set is not a subgroup of its parent."""


class NotNormal(InvariantViolation):
    """The given subgroup is not normal where normality is required."""


class SpecFileError(CorprodError):
    """A spec file could not be parsed or fails validation."""


class PreconditionError(CorprodError):
    """An operation was called outside its stated domain."""


class VerificationFailure(CorprodError):
    """An internal cross-check that must hold by theory has failed.

    Raised instead of silently returning wrong data; indicates a bug.
    """
