"""Exception types raised by the simulator."""


class DomainError(ValueError):
    """Evaluation at a point where a model is undefined (e.g. a Lorentzian pole)."""


class SingularFrontEndError(ArithmeticError):
    """An analog front-end whose Gram matrix ``A A^H`` cannot be inverted.

    Attributes
    ----------
    rows : tuple of int
        Indices of the rows (RF chains) responsible for the rank deficiency.
    condition_number : float
        Condition number of ``A A^H`` that tripped the guard.
    """

    def __init__(self, rows, condition_number):
        self.rows = tuple(int(r) for r in rows)
        self.condition_number = float(condition_number)
        super().__init__(
            f"singular analog front-end (cond(A A^H) = {self.condition_number:.3g}); "
            f"offending rows: {list(self.rows)}"
        )


class NumericalError(RuntimeError):
    """A post-condition of a numerical routine was violated at run time."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""
