"""Exception hierarchy shared by all modules.

The CLI maps a few of these onto fixed exit codes, so renaming a class is an
interface change.
"""


class KunnethError(Exception):
    """Base class for every error raised by this package."""


class CompositionNotZero(KunnethError):
    pass


class MixedPresentation(KunnethError):
    pass


class TruncationExceeded(KunnethError):
    pass


class BeyondTruncation(TruncationExceeded):
    pass


class UnknownGenerator(KunnethError):
    pass


class ParseError(KunnethError):
    pass


class UnsupportedEntry(KunnethError):
    pass


class IncompatibleSequence(KunnethError):
    pass


class NontrivialModule(KunnethError):
    pass


class UnknownAction(KunnethError):
    pass


class IncompleteActionData(KunnethError):
    pass


class NotExact(KunnethError):
    pass


class CollapseHypothesisFailed(KunnethError):
    pass


class UnsupportedIdealShape(KunnethError):
    pass


class UnsupportedShape(KunnethError):
    pass
