"""Exception hierarchy for the analysis engine."""


class GcsaError(Exception):
    """Base class for all engine errors."""


class LayoutError(GcsaError):
    """Configuration layout does not match the model."""


class DegenerateEntityError(GcsaError):
    """An entity has a zero-length direction or normal."""


class UnsupportedConstraintError(GcsaError):
    pass


class InvalidStepError(GcsaError, ValueError):
    pass


class NonConvergenceError(GcsaError):
    pass


class NumericalError(GcsaError):
    pass


class NotAWitnessError(GcsaError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class ScaleError(GcsaError):
    """Input exceeds the size an exhaustive oracle is allowed to handle."""


class ParseError(GcsaError):
    pass


class ValidationError(GcsaError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
