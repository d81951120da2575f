"""Exception hierarchy. Every library error derives from :class:`MatroidError`."""


class MatroidError(Exception):
    pass


class AxiomViolation(MatroidError, ValueError):
    pass


class EmptyFamily(AxiomViolation):
    pass


class UnknownElement(MatroidError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument
        return str(self.args[0]) if self.args else ""


class Overlap(MatroidError, ValueError):
    pass


class LabelCollision(MatroidError, ValueError):
    pass


class CapExceeded(MatroidError, ValueError):
    pass


class DegenerateBasepoint(MatroidError, ValueError):
    pass


class DegenerateElement(MatroidError, ValueError):
    pass


class TooSmall(MatroidError, ValueError):
    pass


class RankZero(MatroidError, ValueError):
    pass


class NotCircuitHyperplane(MatroidError, ValueError):
    pass


class NotA2Separation(MatroidError, ValueError):
    pass


class BadChoice(MatroidError, ValueError):
    pass


class BadSize(MatroidError, ValueError):
    pass


class BadN(MatroidError, ValueError):
    pass


class BadEdge(MatroidError, ValueError):
    pass


class NotConnected(MatroidError, ValueError):
    pass


class PreconditionFailed(MatroidError, ValueError):
    pass


class UnknownName(MatroidError, ValueError):
    pass


class UnsupportedN(MatroidError, ValueError):
    pass
