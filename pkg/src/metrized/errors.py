"""Exception hierarchy shared by all modules."""


class MetrizedError(Exception):
    """Base class for every error raised by this package."""


class InvalidGraph(MetrizedError):
    pass


class InvalidPolarization(MetrizedError):
    pass


class InvalidGenus(MetrizedError):
    pass


class InvalidEpsilon(MetrizedError):
    pass


class SolverInconsistency(MetrizedError):
    """A linear system was singular beyond its expected kernel.

    This signals a broken assumption inside the library rather than bad
    user input.
    """


class DegreeCertificateFailure(MetrizedError):
    """A per-edge profile turned out not to be a quadratic."""


class GenerationFailure(MetrizedError):
    pass
