"""Concrete triangle backends, selectable by name."""
from __future__ import annotations

from .quantum import QuantumBackend
from .setb import SetBackend
from .stochastic import StochasticBackend

BACKEND_NAMES = ("set", "stochastic", "quantum")


def make_backend(name: str):
    if name == "set":
        return SetBackend()
    if name == "stochastic":
        return StochasticBackend()
    if name == "quantum":
        return QuantumBackend()
    raise ValueError(f"unknown backend {name!r}; choose from {', '.join(BACKEND_NAMES)}")
