"""Exact-arithmetic conjugacy testing and centralisers in GL(n,Z)."""

from .config import Budgets, default_budgets
from .errors import (
    EnumerationBudgetExceeded,
    FactorisationTooHard,
    IntconjError,
    NotContained,
    OrbitBudgetExceeded,
)

__all__ = [
    "Budgets",
    "default_budgets",
    "IntconjError",
    "NotContained",
    "FactorisationTooHard",
    "EnumerationBudgetExceeded",
    "OrbitBudgetExceeded",
]
