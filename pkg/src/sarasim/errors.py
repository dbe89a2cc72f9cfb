class SarasimError(Exception):
    pass


class CoincidentCenters(SarasimError, ValueError):
    pass


class DegenerateCell(SarasimError, ValueError):
    pass


class NoIntersection(SarasimError, ValueError):
    pass


class TangentCircles(SarasimError, ValueError):
    pass


class NegativeRadius(SarasimError, ValueError):
    pass


class EmptyNeighborhood(SarasimError, ValueError):
    pass


class NeverCovered(SarasimError):
    """Coverage was already below the threshold at interval 0."""


class ConvergenceError(SarasimError, RuntimeError):
    """The protocol hit its hard iteration cap."""


class ConfigError(SarasimError, ValueError):
    pass
