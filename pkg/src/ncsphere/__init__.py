"""Exact computations on the noncommutative sphere U(su(2)_h) / (x^2 + y^2 + z^2 - alpha)."""
from .algebra import NCElement, make_algebra
from .scalars import ALPHA, H, I, LAMBDA1, LAMBDA2, ONE, S, ZERO, Scalar, Specialization, specialize

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "H",
    "I",
    "LAMBDA1",
    "LAMBDA2",
    "NCElement",
    "ONE",
    "S",
    "Scalar",
    "Specialization",
    "ZERO",
    "make_algebra",
    "specialize",
]
