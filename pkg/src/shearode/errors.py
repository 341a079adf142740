"""Exception hierarchy.

Every error raised by the package derives from :class:`ShearOdeError`.  The
CLI maps the three families below to exit codes 2 (parse), 3 (precondition)
and 4 (verification).
"""


class ShearOdeError(Exception):
    pass


class ExprSyntaxError(ShearOdeError):
    """Malformed expression; ``pos`` is the 0-based offset of the bad token."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class PreconditionError(ShearOdeError):
    pass


class VerificationFailure(ShearOdeError):
    pass


class ZeroConstantTerm(PreconditionError):
    pass


class TruncationLoss(PreconditionError):
    pass


class SingularSample(PreconditionError):
    pass


class DegreeOverflow(PreconditionError):
    pass


class BranchFailure(VerificationFailure):
    pass


class SingularJet(PreconditionError):
    pass


class PoleHit(PreconditionError):
    pass


class NormalFormRequired(PreconditionError):
    pass


class TruncationTooLow(PreconditionError):
    pass


class InsufficientTruncation(PreconditionError):
    pass


class NotNormalizable(PreconditionError):
    pass


class ResonanceObstruction(PreconditionError):
    pass


class ZeroLeading(PreconditionError):
    pass


class NonInvertible(PreconditionError):
    pass


class OnSection(PreconditionError):
    pass


class NotEigenvector(VerificationFailure):
    pass
