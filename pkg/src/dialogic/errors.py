"""Exception types shared across the engine."""


class DialogicError(Exception):
    """Base class for engine errors."""


class InvalidSketch(DialogicError):
    pass


class CyclicSketch(DialogicError):
    """Composition closure found a non-identity loop or ran out of budget."""


class InvalidRealization(DialogicError):
    pass


class InvalidMorphism(DialogicError):
    pass


class ShapeMismatch(DialogicError):
    """Objects built over different sketches (or incompatible ends) were combined."""


class ChaseBudgetExceeded(DialogicError):
    def __init__(self, budget: int, message: str = ""):
        self.budget = budget
        super().__init__(message or f"chase budget of {budget} steps exceeded")


class NotInclusion(DialogicError):
    pass


class NotEntailment(DialogicError):
    pass


class EntailmentNotPreserved(DialogicError):
    pass


class UnsupportedAddition(DialogicError):
    """decompose() only handles propagators that add arrows and composites."""


class BijectionFailure(DialogicError):
    pass


class UnknownLogic(DialogicError):
    pass


class UnknownRule(DialogicError):
    pass


class NoMatch(DialogicError):
    pass


class AmbiguousMatch(DialogicError):
    pass


class ProofError(DialogicError):
    pass


class ParseError(DialogicError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
