"""Exception types raised by the estimators and the CLI."""


class CausalityError(ValueError):
    """Base class for all input and estimation errors in tscause."""


class ConstantSeries(CausalityError):
    pass


class LengthMismatch(CausalityError):
    pass


class TooShort(CausalityError):
    pass


class NonFinite(CausalityError):
    pass


class SingularDesign(CausalityError):
    """Regressor matrix is rank deficient (collinear or constant columns)."""


class BadAlphabet(CausalityError):
    pass


class BadEmbedding(CausalityError):
    pass


class DegenerateLibrary(CausalityError):
    pass


class Unstable(CausalityError):
    """AR coefficient outside the stationary region."""


class Diverged(CausalityError):
    """Map trajectory left the unit interval."""


class DataError(CausalityError):
    """Problem with an input file rather than with an estimator."""


class MalformedCsv(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyFile(DataError):
    pass
