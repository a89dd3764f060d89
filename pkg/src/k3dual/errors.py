"""Exception types raised by k3dual.

Every failure that stems from bad input or a violated precondition is a
subclass of :class:`K3DualError`, so callers (notably the CLI) can separate
input errors from programming errors.
"""

from __future__ import annotations


class K3DualError(Exception):
    """Base class for all library errors."""


class DegenerateInput(K3DualError):
    """Points do not span R^3 affinely."""


class OriginNotInterior(K3DualError):
    """The origin is not strictly inside the polytope."""


class NonIntegralDual(K3DualError):
    """The polar dual has non-integral vertices.

    ``vertices`` holds the dual vertices as tuples of ``Fraction``.
    """

    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        super().__init__(f"polar dual is not integral ({len(self.vertices)} vertices)")


class NotReflexive(K3DualError):
    pass


class WrongDegree(K3DualError):
    pass


class NotInLattice(K3DualError):
    pass


class RankDeficient(K3DualError):
    pass


class InvalidOverride(K3DualError):
    pass


class NoBasis(K3DualError):
    pass


class L0NotZero(K3DualError):
    """Intersection formulas are only valid when rk L0 = 0."""


class FormulaMismatch(K3DualError):
    """Two independent Picard-number counts disagree."""


class NotEven(K3DualError):
    pass


class Degenerate(K3DualError):
    """The bilinear form has a nontrivial radical."""


class GroupTooLarge(K3DualError):
    pass


class NonIntegral(K3DualError):
    pass


class InputError(K3DualError):
    """Malformed input file or value; the message carries file/line context."""
