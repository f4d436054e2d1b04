"""Generalized boson Hopf algebra, its dual, and their coherent states."""
from .qspecial import DeformationParams, ScalarSeriesBudget, SeriesDivergence
from .coeffring import ExpPoly

__all__ = ["DeformationParams", "ScalarSeriesBudget", "SeriesDivergence", "ExpPoly"]
__version__ = "0.1.0"
