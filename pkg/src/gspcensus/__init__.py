"""Exact and empirical census of characteristic polynomials in GSp_2g(F_l)."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, ConsistencyError, DomainError

__all__ = ["BudgetExceeded", "ConsistencyError", "DomainError", "__version__"]
