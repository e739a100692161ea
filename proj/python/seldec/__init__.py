"""Selective dynamical decoupling with 2pi phase-flip pulses."""

from ._seldec import *  # noqa: F401,F403
from ._seldec import InputError, NumericalError, SeldecError

__all__ = [name for name in dir() if not name.startswith("_")]
