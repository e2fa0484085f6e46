"""Exception hierarchy and the exit codes the command line maps them to."""


class ConelabError(Exception):
    exit_code = 2


class InputError(ConelabError):
    """Malformed input: schema, syntax or dimension problems."""

    exit_code = 2

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class PolySyntaxError(InputError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class InfeasiblePoint(ConelabError):
    """The reference point violates a constraint."""


class NotANormal(ConelabError):
    """No multiplier represents the reference normal."""


class DirectionNotTangent(ConelabError):
    """A direction leaves the linearized cone."""


class DirectionNotInCone(ConelabError):
    """A direction lies outside the critical cone."""


class EmptyCriticalCone(ConelabError):
    """An operation needs a nonzero critical direction but the critical cone is trivial."""


class InconsistentEquilibrium(ConelabError):
    """F at the reference pair does not equal minus the reference normal."""


class NotLicq(ConelabError):
    """The closed form needs linearly independent active gradients."""


class LpStatusError(ConelabError):
    def __init__(self, message: str, status: str):
        self.status = status
        super().__init__(message)


class GenerationExhausted(ConelabError):
    """Rejection sampling ran out of attempts."""


class InvariantBreach(ConelabError):
    """An internal consistency check failed; indicates a bug."""

    exit_code = 4


class LpUnbounded(ConelabError):
    """A maximization that should be finite is unbounded."""

    def __init__(self, message: str, direction=None):
        self.direction = direction
        super().__init__(message)


class InfeasibleXi(ConelabError):
    """The second-order feasible region is empty."""
