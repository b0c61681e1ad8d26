"""Exception hierarchy shared by all modules."""


class HesscayError(Exception):
    """Base class for library errors."""


class FieldMismatchError(HesscayError, TypeError):
    pass


class HypothesisViolation(HesscayError, ValueError):
    """Input curve violates a smoothness hypothesis (e.g. A*(4A^3+27B^2) = 0)."""


class NotOnCurveError(HesscayError, ValueError):
    pass


class SingularPointError(HesscayError, ValueError):
    pass


class DegenerateError(HesscayError, ValueError):
    """A construction degenerated (line inside a curve, zero form, pole, ...)."""


class InsufficientSamplesError(HesscayError, RuntimeError):
    pass
