"""Vortex thermostats on the Bolza surface."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND"]
