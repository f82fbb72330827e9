"""Exception taxonomy for the splitdec package."""

from __future__ import annotations


class SplitdecError(Exception):
    """Base class for all package-specific errors."""


# ---------------------------------------------------------------- field/linalg


class DivideByZero(SplitdecError, ZeroDivisionError):
    """Division by a zero scalar."""


class CalledInRationalMode(SplitdecError):
    """sigma (q -> -q) requested on a field in rational mode."""


class FieldMismatch(SplitdecError):
    """Operands belong to different ground fields."""


class ShapeMismatch(SplitdecError):
    """Matrix operands have incompatible shapes."""


class AmbientMismatch(SplitdecError):
    """Subspaces live in different ambient spaces."""


class SingularMatrix(SplitdecError, ArithmeticError):
    """Inversion or solve on a singular matrix."""


class NotADirectSum(SplitdecError):
    """Concatenated cell bases do not form a basis of the ambient space."""


class ScalarParseError(SplitdecError, ValueError):
    """Malformed scalar or matrix text encoding."""


# -------------------------------------------------------------------- graphs


class ParseError(SplitdecError, ValueError):
    """Malformed graph file; carries a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Disconnected(SplitdecError):
    """Graph is not connected."""


class LoopOrMultiEdge(SplitdecError):
    """Graph file declares a loop or a repeated edge."""


class NotDistanceRegular(SplitdecError):
    """Intersection numbers are not well defined; carries a witness."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class UnsupportedFieldOrder(SplitdecError, ValueError):
    """Finite field order outside the supported table."""


# kept as an alias for the shorter historical name
UnsupportedOrder = UnsupportedFieldOrder


class DegenerateParameters(SplitdecError, ValueError):
    """Family parameters that do not yield a connected graph with D >= 1."""


# -------------------------------------------------------------------- scheme


class EigenvalueNotInField(SplitdecError):
    """An eigenvalue is neither rational nor rational*r over the ground field."""


class PropertyViolation(SplitdecError):
    """A named algebraic property of computed scheme data failed exactly."""

    def __init__(self, prop, detail=""):
        self.prop = prop
        super().__init__(f"{prop}: {detail}" if detail else prop)


class NegativeKrein(SplitdecError):
    """A Krein parameter evaluated to a negative real; upstream bug."""


class NonConstantOnSphere(SplitdecError):
    """|X|(E_1)_{xy} is not constant on a distance sphere around x."""


class ProductRuleViolation(SplitdecError):
    """A*_i A*_j disagrees with the Krein expansion."""


class NotQPolynomial(SplitdecError):
    """No Q-polynomial ordering exists for the scheme."""


class NotSelfDual(SplitdecError):
    """No Q-polynomial ordering makes the scheme formally self-dual."""


# --------------------------------------------------------------------- split


class IndexOutOfRange(SplitdecError, IndexError):
    """A split-cell index is outside the legal range -1..D."""


class CrossExpressionMismatch(SplitdecError):
    """Two expressions required to define the same matrix disagree."""


# ------------------------------------------------------------------ tmodules


class NotFullySplit(SplitdecError):
    """Module decomposition incomplete after the draw budget.

    Carries the partial decomposition in ``partial``.
    """

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class NonContiguousSupport(SplitdecError):
    """A module's E_i or E*_i support is not an interval."""


# ---------------------------------------------------------------------- qtet


class NotClassical(SplitdecError):
    """No classical parameter set (D, b, alpha, beta) with alpha = b - 1 fits.

    ``candidates`` lists (b, reason) pairs for every rejected candidate.
    """

    def __init__(self, message, candidates=()):
        self.candidates = list(candidates)
        super().__init__(message)


class BEqualsOne(NotClassical):
    """The only fitting classical base is b = 1, which is excluded."""

    def __init__(self, message="classical fit requires b = 1, which is excluded", candidates=()):
        super().__init__(message, candidates)


class AmbiguousClassical(SplitdecError):
    """More than one classical parameter set fits; carries both."""

    def __init__(self, message, candidates=()):
        self.candidates = list(candidates)
        super().__init__(message)


class EigenvalueShapeMismatch(SplitdecError):
    """theta_i / theta*_i do not fit a single alpha0 + alpha1 * q^(D-2i) law."""


class SpectralMismatch(SplitdecError):
    """A or A* fails its expected spectral decomposition."""


class TableViolation(SplitdecError):
    """One of B, B*, K, K*, Phi, Psi acts wrongly on a tilde cell."""


class SingularFactor(SingularMatrix):
    """A factor needed in a generator chain is not invertible."""


# the classical fit rejects everything / the alpha fit fails (aliases kept for
# the documented public error vocabulary)
NotClassicalAlphaBMinusOne = NotClassical
AlphaFitFailure = EigenvalueShapeMismatch


# ----------------------------------------------------------------- cli/cache


class SuiteInapplicable(SplitdecError):
    """A requested verification suite cannot run on this input."""


class ReportInvariantViolation(SplitdecError):
    """A report entry breaks the schema (bad status, duplicate name, ...)."""


class CacheCorrupt(SplitdecError):
    """Cached artifact failed its checksum or parse; caller should recompute."""


class ConfigError(SplitdecError, ValueError):
    """Invalid run configuration."""
