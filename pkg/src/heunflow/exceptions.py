"""Exception and warning types.

Every error carries a short stable ``code`` string; the command line
interface reports it in the diagnostics block.
"""


class HeunflowError(Exception):
    """Base class for all package errors."""

    code = "error"


class PoleError(HeunflowError, ZeroDivisionError):
    """A Gamma function or series denominator hit a pole."""

    code = "pole"


class NonConvergence(HeunflowError, ArithmeticError):
    """A series or iteration did not converge within its budget."""

    code = "non_convergence"


class BranchError(HeunflowError, ValueError):
    """Argument lies on a branch cut where the principal value is ambiguous."""

    code = "branch"


class OutsideDomain(HeunflowError, ValueError):
    """Evaluation point lies outside the convergence domain of a series."""

    code = "outside_domain"


class InadmissibleNu(HeunflowError, ValueError):
    """Two-sided index shift is an integer or half-integer."""

    code = "inadmissible_nu"


class NoRoot(HeunflowError, ArithmeticError):
    """Root finder failed to converge."""

    code = "no_root"


class Diverged(NoRoot):
    """Root finder iterate ran away."""

    code = "diverged"


class CharacteristicUnsatisfied(HeunflowError, ValueError):
    """Coefficients requested at a parameter that is not a characteristic root."""

    code = "characteristic_unsatisfied"


class RuleInapplicable(HeunflowError, ValueError):
    """Transformation rule undefined for the given parameters (e.g. z0 = 0)."""

    code = "rule_inapplicable"


class ConnectionUndefined(HeunflowError, ValueError):
    """Coefficient connection factor hits a Gamma pole."""

    code = "connection_undefined"


class IndicialClash(HeunflowError, ValueError):
    """Indicial exponents differ by an integer where the series needs them distinct."""

    code = "indicial_clash"


class InadmissibleFraction(HeunflowError, ValueError):
    """Rational Floquet index l/m does not satisfy the gcd/ordering constraints."""

    code = "inadmissible_fraction"


class RootCount(HeunflowError, ArithmeticError):
    """Finite spectrum produced the wrong number of roots."""

    code = "root_count"


class RatioNotConstant(HeunflowError, ArithmeticError):
    """Two solutions that should be proportional are not (spurious root)."""

    code = "ratio_not_constant"


class StepUnderflow(HeunflowError, ArithmeticError):
    """Finite-difference step became too small to be meaningful."""

    code = "step_underflow"


class DegenerateTarget(HeunflowError, ValueError):
    """Limit comparison target is (numerically) zero."""

    code = "degenerate_target"


class GridTooCoarse(UserWarning):
    """Finite-difference grid is too coarse for the requested accuracy."""
