"""Exception types raised by plspress."""


class PlsPressError(Exception):
    """Base class for all plspress errors."""


class DimensionError(PlsPressError, ValueError):
    """Array shapes or a requested rank are incompatible."""


class InputError(PlsPressError, ValueError):
    """Input contains non-finite values or is otherwise malformed."""


class DegeneracyError(PlsPressError, ArithmeticError):
    """A latent factor or design column collapsed to (numerically) zero."""


class LeverageSingularityError(PlsPressError, ArithmeticError):
    """Removing an observation would make a Gram matrix singular.

    Attributes
    ----------
    index : int or None
        Row of the pivotal observation.
    block : str or None
        Which latent space ("t" or "s") or design ("x") was singular.
    leverage : float or None
    """

    def __init__(self, message, index=None, block=None, leverage=None):
        super().__init__(message)
        self.index = index
        self.block = block
        self.leverage = leverage
