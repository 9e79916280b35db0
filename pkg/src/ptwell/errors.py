"""Exception hierarchy.

Two families: ``HypothesisViolation`` for potentials that fall outside the
single-well PT setting, and ``NumericalFailure`` for everything that goes
wrong while computing.  The CLI maps them to exit codes 2 and 3.
"""


class PtwellError(Exception):
    pass


class HypothesisViolation(PtwellError):
    pass


class NumericalFailure(PtwellError):
    pass


# potential
class ParityViolation(HypothesisViolation):
    pass


class EmptySpec(HypothesisViolation):
    pass


class GrowthViolation(HypothesisViolation):
    pass


class SingleWellViolation(HypothesisViolation):
    pass


class DegenerateTurningPoint(HypothesisViolation):
    pass


# turning points
class NewtonDivergence(NumericalFailure):
    pass


class NonSimpleTurningPoint(NumericalFailure):
    pass


class RootCollision(NumericalFailure):
    pass


# quadrature and branch tracking
class BranchJump(NumericalFailure):
    pass


class NotConverged(NumericalFailure):
    pass


class PathThroughTurningPoint(NumericalFailure):
    pass


class GridTooCoarse(NumericalFailure):
    pass


class StalledStep(NumericalFailure):
    pass


# Bohr-Sommerfeld
class EmptyWindow(NumericalFailure):
    pass


class OracleMissing(NumericalFailure):
    pass


# shooting
class StepUnstable(NumericalFailure):
    pass


class BoxTooSmall(NumericalFailure):
    pass


class ImaginaryResidue(NumericalFailure):
    pass


class ZeroOnBoundary(NumericalFailure):
    pass


class InsufficientResolution(NumericalFailure):
    pass
