"""Exception hierarchy.

Two families: ``InvalidInput`` subclasses signal malformed requests
(bad dimension, mismatched sizes), ``PhysicsError`` subclasses signal
inputs that are well formed but violate a physical precondition such as
a closed gap. The CLI maps the first to exit code 2 and the second to 3.
"""

from __future__ import annotations


class TopologyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(TopologyError, ValueError):
    pass


class PhysicsError(TopologyError):
    pass


class InvalidDimension(InvalidInput):
    pass


class GridTooSmall(InvalidInput):
    pass


class AxisOutOfRange(InvalidInput):
    pass


class WrongDimension(InvalidInput):
    pass


class BandMismatch(InvalidInput):
    pass


class CarrierMismatch(InvalidInput):
    pass


class UnsupportedCarrier(InvalidInput):
    pass


class NotHermitian(InvalidInput):
    pass


class NotGrading(InvalidInput):
    pass


class NotUnitary(InvalidInput):
    pass


class NotProjection(InvalidInput):
    pass


class MidpointMismatch(InvalidInput):
    pass


class Gapless(PhysicsError):
    pass


class GridTooCoarse(PhysicsError):
    pass


class NotChiral(PhysicsError):
    pass


class SingularLink(PhysicsError):
    pass
