"""Exception hierarchy shared by every module."""


class HaarforgeError(Exception):
    pass


class PoleError(HaarforgeError, ValueError):
    """A gamma function or Pochhammer denominator was evaluated at a pole."""


class ConvergenceError(HaarforgeError, ArithmeticError):
    pass


class DomainError(HaarforgeError, ValueError):
    pass


class SingularityError(HaarforgeError, ValueError):
    """A weight or kernel with a non-integrable power was evaluated at its singular point."""


class DimensionError(HaarforgeError, ValueError):
    pass
