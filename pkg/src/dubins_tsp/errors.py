"""Exception and warning types raised by the solver."""


class DubinsTSPError(Exception):
    """Base class for all solver errors."""


class SeparationTooSmall(DubinsTSPError, ValueError):
    """Two points are closer than four turning radii."""


class NumericalDegeneracy(DubinsTSPError, ArithmeticError):
    pass


class InvalidInstance(DubinsTSPError, ValueError):
    pass


class InvalidSequence(DubinsTSPError, ValueError):
    pass


class NotUnit(DubinsTSPError, ValueError):
    pass


class TooLarge(DubinsTSPError, ValueError):
    """The exact ETSP search was asked for more points than it supports."""


class TooManyFlips(DubinsTSPError, RuntimeError):
    pass


class Infeasible(DubinsTSPError, ValueError):
    """A generation spec cannot place the requested points in its box."""


class MixingFailure(DubinsTSPError, RuntimeError):
    pass


class NonConvergence(RuntimeWarning):
    """Gradient descent hit its iteration cap above the tolerance."""


class DegenerateSeed(RuntimeWarning):
    """A seed heading was undefined and replaced by a transverse direction."""
