"""Tensor products of Eilenberg–Moore algebras for monoidal monads on finite sets."""

__version__ = "0.1.0"
