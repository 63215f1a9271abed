"""Exception hierarchy shared by all modules."""


class LoopBracketError(Exception):
    """Base class for all package-specific errors."""


class PoleEvaluation(LoopBracketError):
    """Evaluation requested too close to a pole of a rational matrix."""


class SizeMismatch(LoopBracketError):
    """Matrix operands have incompatible sizes."""


class DegenerateInput(LoopBracketError):
    """Input is identically zero or otherwise degenerate."""


class NonConvergent(LoopBracketError):
    """A contour quadrature failed its node-doubling stability test."""


class BadLattice(LoopBracketError):
    """Lattice periods do not span (Im of the period ratio must be > 0)."""


class SplitFailure(LoopBracketError):
    """The plus/minus splitting could not be carried out (singular
    interpolation system or residual above tolerance)."""


class WrongCase(LoopBracketError):
    """Operation not defined for this base-curve case."""


class DimensionMismatch(LoopBracketError):
    """Numerically computed rank disagrees with the expected dimension."""


class ProbeOnPole(LoopBracketError):
    """Probe point of a coordinate functional sits on a pole of g."""


class WrongSubalgebra(LoopBracketError):
    """Dressing parameter is not in the indicated subalgebra."""


class StepRejected(LoopBracketError):
    """Flow integration step left the modelled leaf (re-expansion
    residual above threshold)."""

    def __init__(self, message, time=None, residual=None):
        super().__init__(message)
        self.time = time
        self.residual = residual


class FitFailure(LoopBracketError):
    """A scalar-function-space least-squares fit left too large a residual."""


class NonGenericDivisor(LoopBracketError):
    """Divisor chart has coincident points, vanishing eigenvalues or points
    on poles; reported, usually not fatal."""


class SamplerFailure(LoopBracketError):
    """Random leaf sampler failed to produce a well-conditioned point."""


class ConfigInvalid(LoopBracketError):
    """Experiment configuration failed validation."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class PathThroughBranchPoint(LoopBracketError):
    """Integration path for an Abelian integral passes too close to a
    branch point of the spectral curve."""
