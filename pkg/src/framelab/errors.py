"""Exception types raised across framelab."""


class FramelabError(ValueError):
    """Base class for all framelab errors."""


class NotInDisc(FramelabError):
    pass


class DuplicatePoint(FramelabError):
    pass


class NonIntegerPowerOfComplex(FramelabError):
    pass


class SpectrumOnBoundary(FramelabError):
    pass


class NotHermitian(FramelabError):
    pass


class RankDeficient(FramelabError):
    pass


class DegenerateFamily(FramelabError):
    pass


class SymbolLeavesDisc(FramelabError):
    pass


class DegenerateSymbol(FramelabError):
    pass


class CutoffTooSmall(FramelabError):
    pass


class IndivisibleCutoff(FramelabError):
    pass


class IllConditioned(UserWarning):
    """Emitted when a linear solve has condition number above 1e12."""
