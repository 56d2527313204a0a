"""Shared exception types.  Flat on purpose; modules raise, the CLI reports."""


class DomainError(ValueError):
    """Arguments outside the mathematical domain of an operation."""


class NonPolynomialDivision(ArithmeticError):
    """A division that must be exact left a remainder (upstream data error)."""


class SingularSystem(ArithmeticError):
    """A linear system that should be generic came out singular."""


class SingularBasis(ArithmeticError):
    """Basis vectors expected independent are not."""


class ZeroNorm(ArithmeticError):
    """Degenerate state with vanishing norm."""


class ZeroEigenvalue(ArithmeticError):
    """Eigenvalue too close to zero for the requested branch operation."""


class BranchAmbiguity(ArithmeticError):
    """Non-integer power of a negative/complex eigenvalue requested."""


class NumericalDegeneracy(ArithmeticError):
    """Evaluation points too close for the determinant-ratio formula."""


class NonConvergence(ArithmeticError):
    """A quadrature or series failed its self-consistency check."""


class NoConvergence(ArithmeticError):
    """Iteration did not reach tolerance within the allowed steps."""


class ContourViolation(ValueError):
    """Contour parameters violate the validity conditions of the state."""


class SingularKernel(ArithmeticError):
    """Discretized integral operator was not invertible."""


class NotInvariant(ValueError):
    """Matrix expected to commute with the quantum-group action does not."""


class TableMismatch(ValueError):
    """Tables fed to a consumer disagree on n, nu or provenance."""


class RankDeficient(ArithmeticError):
    """Harvested equation system has too small a rank; enlarge the plan."""


class InterpolationMismatch(ArithmeticError):
    """Interpolated exact table fails holdout re-evaluation."""


class EigenvectorAmbiguity(ArithmeticError):
    """Eigenvalue collision prevents selecting a unique eigenvector."""


class NoMatch(LookupError):
    """No dense eigenvector matches the Bethe data (convention error upstream)."""


class IllConditioned(ArithmeticError):
    """Fit/solve problem too ill-conditioned for the requested output."""
