"""Generalized complex geometry for thermodynamic fluctuations and the Unruh phase."""

from . import coherent, fluctuations, gcs, unruh
from .errors import DomainError

__all__ = ["coherent", "fluctuations", "gcs", "unruh", "DomainError"]
__version__ = "0.1.0"
