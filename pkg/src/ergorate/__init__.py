"""Exact V-geometric convergence rates for reflected random walks with
bounded identically-distributed increments."""

__version__ = "0.1.0"

from . import closedform, drift, eliminate, oracle, polycalc, rwmodel, specialmodels, spectrum  # noqa: F401
from .eliminate import rate  # noqa: F401
from .rwmodel import IncrementLaw, BoundaryRows, RandomWalkModel, load_model  # noqa: F401
