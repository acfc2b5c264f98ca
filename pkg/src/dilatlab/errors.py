"""Exception hierarchy shared by every module of the package."""


class DilatLabError(Exception):
    """Base class for all package errors."""


class AngleOutOfStrip(DilatLabError, ValueError):
    """The requested dilation angle is outside the analyticity strip."""


class BranchCut(DilatLabError, ValueError):
    """A principal-branch power was evaluated on its cut."""


class NonIntegrable(DilatLabError, ValueError):
    """The integrand |V_theta|^p is not integrable over the real line."""


class ToleranceNotMet(DilatLabError, RuntimeError):
    """Adaptive quadrature exhausted its refinement budget."""


class ConditionViolated(DilatLabError, ValueError):
    """A closed-form formula was called outside its validity region."""


class WrongRegime(DilatLabError, ValueError):
    """The parameters are outside the regime where the quantity is defined."""


class NoConvergence(DilatLabError, RuntimeError):
    """The eigensolver did not converge."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class MatchAmbiguity(DilatLabError, RuntimeError):
    """Two candidate eigenvalue matches are indistinguishable."""


class AngleOrder(DilatLabError, ValueError):
    """Probe and target angles are not ordered as 0 < probe < phi."""


class UnsupportedVariant(DilatLabError, ValueError):
    """The operation is not defined for this region variant."""


class InsufficientAlpha(DilatLabError, ValueError):
    """The potential's analyticity strip is narrower than a theorem requires."""


class KappaDomain(DilatLabError, ValueError):
    """The sector aperture parameter kappa must be positive."""


class ClassificationUnstable(DilatLabError, RuntimeError):
    """A contributing eigenvalue could not be tracked unambiguously."""


class ConfigError(DilatLabError, ValueError):
    """An experiment configuration failed validation.

    ``field`` holds the dotted path of the offending entry, e.g. ``grid.N``.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
