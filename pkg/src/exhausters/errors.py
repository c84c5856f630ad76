"""Exception and warning types shared across the package."""


class ExhausterError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ExhausterError):
    """Operands live in different ambient dimensions."""


class UnsupportedPair(ExhausterError):
    """The requested operation is not decidable for this operand combination."""


class ConversionUnavailable(ExhausterError):
    """Vertex/halfspace conversion requested outside dimensions 1-3."""


class PointNotInSet(ExhausterError):
    """Base point handed to a tangent-cone computation lies outside the set."""


class WrongKind(ExhausterError):
    """Operation defined only for the other exhauster kind."""


class DomainNotFullSpace(ExhausterError):
    """Covering reduction requires an exhauster whose domain is all of R^n."""


class KindMismatch(ExhausterError):
    """Equivalence check across a lower and an upper exhauster."""


class DomainMismatch(ExhausterError):
    """Equivalence check across exhausters with different domain cones."""


class MissingConfiguration(ExhausterError):
    """A problem file lacks a cone/decomposition required by the command."""


class ProblemFormatError(ExhausterError):
    """Problem file failed schema validation."""


class DomainViolationWarning(UserWarning):
    """Evaluation direction lies outside the exhauster's domain cone.

    Warning-level only: the max/min value is still a well-defined number,
    it just carries no representation guarantee off the domain.
    """
