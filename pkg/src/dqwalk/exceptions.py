"""Exception hierarchy. Every error raised by the package derives from DQWalkError."""


class DQWalkError(ValueError):
    pass


class NonHermitian(DQWalkError):
    pass


class BadTrace(DQWalkError):
    pass


class NotUnitary(DQWalkError):
    pass


class IncompleteChannel(DQWalkError):
    def __init__(self, deviation, shift):
        self.deviation = deviation
        self.shift = shift
        super().__init__(
            f"Kraus family is not complete: max deviation {deviation:.3g} "
            f"at relative shift {shift}"
        )


class BadProbability(DQWalkError):
    pass


class MixedShiftOp(DQWalkError):
    pass


class DomainError(DQWalkError):
    pass


class UnphysicalState(DQWalkError):
    pass


class GridTooCoarse(DQWalkError):
    pass


class NotNormalized(DQWalkError):
    pass


class BoundaryBreach(DQWalkError):
    pass


class ConfigError(DQWalkError):
    pass
