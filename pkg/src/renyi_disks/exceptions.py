class NonConvergence(RuntimeError):
    """An adaptive Chebyshev fit hit its degree cap without the tail decaying."""


class OutOfDomain(ValueError):
    """A point lies outside the interval on which a function is known."""
