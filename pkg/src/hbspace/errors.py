"""Exception hierarchy shared by all hbspace modules."""


class HBSpaceError(Exception):
    """Base class for every error raised by hbspace."""


class RadiusExceeded(HBSpaceError, ValueError):
    """Argument lies outside the radius where evaluation is certified."""


class DomainError(HBSpaceError, ValueError):
    pass


class NoSignChange(HBSpaceError, ValueError):
    pass


class PanelBudgetExceeded(HBSpaceError, RuntimeError):
    pass


class QuadratureFailure(HBSpaceError, RuntimeError):
    pass


class CoincidentNodes(HBSpaceError, ValueError):
    pass


class EmptySamples(HBSpaceError, ValueError):
    pass


class NodeMismatch(HBSpaceError, ValueError):
    pass


class SeparationViolated(HBSpaceError, ValueError):
    pass


class SingularPoint(HBSpaceError, ValueError):
    pass


class TailTooLarge(HBSpaceError, RuntimeError):
    pass


class ZeroFunction(HBSpaceError, ValueError):
    pass


class LengthMismatch(HBSpaceError, ValueError):
    pass


class GridTooCoarse(HBSpaceError, RuntimeError):
    pass


class NodeWindowEmpty(HBSpaceError, ValueError):
    pass


class PreconditionFailed(HBSpaceError, ValueError):
    pass


class UnknownNode(HBSpaceError, ValueError):
    pass


class ManifestError(HBSpaceError, ValueError):
    """Invalid run manifest; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
