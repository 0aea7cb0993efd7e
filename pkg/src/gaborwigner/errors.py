"""Exception and warning types raised by the library."""


class GaborWignerError(Exception):
    """Base class. ``anchor`` names the identity or definition that failed."""

    anchor = ""

    def __init__(self, message="", anchor=None):
        super().__init__(message)
        if anchor is not None:
            self.anchor = anchor


class NonLatticeShift(GaborWignerError, ValueError):
    """A shift is not an integer multiple of the grid spacing."""


class UnsupportedDilation(GaborWignerError, ValueError):
    """Only the dyadic factors 2 and 1/2 are available."""


class ZeroWindow(GaborWignerError, ValueError):
    """The analysis window has zero norm."""

    anchor = "Def:STFT"


class OrthogonalWindows(GaborWignerError, ValueError):
    """Analysis and synthesis windows are (numerically) orthogonal."""

    anchor = "Eq:STFTInversion"


class NonHermitianResidue(GaborWignerError, ArithmeticError):
    """A Wigner function has a large imaginary part; the grid is too coarse."""

    anchor = "Def:Wigner"


class GridTooLarge(GaborWignerError, ValueError):
    """A brute-force quadrature was requested above its size cap."""


class GridMismatch(GaborWignerError, ValueError):
    """Operands live on different grids."""


class WindowNotRealUnit(GaborWignerError, ValueError):
    """The phase-space NLSE forms need a real window of unit norm."""


class StepDiverged(GaborWignerError, ArithmeticError):
    """A time step changed the mass by more than 10 percent."""


class InsufficientSamples(GaborWignerError, ValueError):
    """Too few trajectory samples for a finite-difference estimate."""


class CheckFailed(GaborWignerError, AssertionError):
    """A certification check exceeded its tolerance."""


class MalformedCsv(GaborWignerError, ValueError):
    """A CSV file does not follow the expected column layout."""


class WindowNotRealEven(UserWarning):
    """The diamond-product identity needs a real, even window."""


class ResolutionWarning(UserWarning):
    """A signal is not well resolved: it reaches the edge of the period or band."""
