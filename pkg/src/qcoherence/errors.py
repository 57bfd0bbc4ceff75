"""Exception hierarchy shared by every module in the package."""


class QCoherenceError(Exception):
    """Base class for all errors raised by qcoherence."""


class NotHermitian(QCoherenceError, ValueError):
    pass


class NotUnitTrace(QCoherenceError, ValueError):
    pass


class NotPositive(QCoherenceError, ValueError):
    pass


class NotUnitary(QCoherenceError, ValueError):
    pass


class NotDistribution(QCoherenceError, ValueError):
    pass


class DimensionMismatch(QCoherenceError, ValueError):
    pass


class Overflow(QCoherenceError, ValueError):
    pass


class NoConvergence(QCoherenceError, RuntimeError):
    pass


class BadPhaseCount(QCoherenceError, ValueError):
    pass


class BadParameter(QCoherenceError, ValueError):
    pass


class UnknownPreset(QCoherenceError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnsupportedDimension(QCoherenceError, ValueError):
    pass


class NotBipartite(QCoherenceError, ValueError):
    pass


class UnsupportedOperation(QCoherenceError, ValueError):
    pass


class UnknownSuite(QCoherenceError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(QCoherenceError, ValueError):
    pass


class BadRange(QCoherenceError, ValueError):
    pass
