"""Exception hierarchy shared by all engine modules."""


class CQHMError(Exception):
    """Base class for every error raised by the engine."""


class NodeSingularity(CQHMError):
    """A log-derivative quantity was requested at a wavefunction node."""


class NodeApproach(CQHMError):
    """An integration entered a pole neighbourhood of the velocity field."""


class EquilibriumStart(CQHMError):
    """A trajectory was started on (or next to) an equilibrium point."""


class RootFindingFailure(CQHMError):
    """The simultaneous root iteration did not converge."""


class TransitionPole(CQHMError):
    """The active branch of the transition field has a vanishing denominator."""

    def __init__(self, message, t=None, x=None):
        super().__init__(message)
        self.t = t
        self.x = x


class NotClosed(CQHMError):
    """A contour integral was requested on an orbit that never closed."""


class UnsupportedField(CQHMError):
    """The residue oracle cannot treat the requested field."""


class ClassificationError(CQHMError):
    """Winding numbers were ambiguous (not close to an integer)."""


class IntegrationError(CQHMError):
    """The integrator exhausted its step budget."""
