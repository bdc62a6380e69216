"""Exception hierarchy shared by every layer of the package."""


class EvidentError(Exception):
    """Base class for all package errors."""


class InvalidMass(EvidentError, ValueError):
    pass


class NegativeMass(InvalidMass):
    pass


class MassOnEmptySet(InvalidMass):
    pass


class SumNotOne(InvalidMass):
    def __init__(self, total: float):
        super().__init__(f"masses sum to {total!r}, expected 1")
        self.total = total


class SubsetOutOfRange(InvalidMass):
    pass


class FrameMismatch(EvidentError, ValueError):
    pass


class TotalConflict(EvidentError, ArithmeticError):
    """Dempster combination of fully contradictory evidence."""


class EmptyList(EvidentError, ValueError):
    pass


class AlphaOutOfRange(EvidentError, ValueError):
    pass


class SelfEdge(EvidentError, ValueError):
    pass


class UnreadableInput(EvidentError, OSError):
    pass


class WriteFailure(EvidentError, OSError):
    pass


class CorruptSnapshot(EvidentError, ValueError):
    pass


class VersionMismatch(EvidentError, ValueError):
    pass


class BadSpec(EvidentError, ValueError):
    pass
