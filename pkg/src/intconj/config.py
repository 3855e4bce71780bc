"""Resource budgets threaded through the whole pipeline.

One record configures every enumeration; certificates report the values
actually used.  Environment variables override the defaults so the CLI and
batch runs can be tuned without code changes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budgets:
    orbit_max: int = 200_000          # max lattices per orbit closure
    enum_max: int = 1_000_000         # max enumerated submodules / transversal tuples
    elem_search_max: int = 300_000    # max field elements per box enumeration
    elem_radius: int = 4              # initial coordinate radius for element boxes
    factor_trial_limit: int = 100_000 # trial division bound
    factor_rho_iters: int = 300_000   # Pollard rho iteration budget per cofactor
    escalations: int = 2              # retries with doubled radii before "unknown"

    def doubled_radius(self) -> "Budgets":
        return replace(self, elem_radius=self.elem_radius * 2)

    def as_dict(self) -> dict:
        return {
            "orbit_max": self.orbit_max,
            "enum_max": self.enum_max,
            "elem_search_max": self.elem_search_max,
            "elem_radius": self.elem_radius,
            "factor_trial_limit": self.factor_trial_limit,
            "factor_rho_iters": self.factor_rho_iters,
            "escalations": self.escalations,
        }


_ENV_FIELDS = {
    "INTCONJ_BUDGET_ORBIT": "orbit_max",
    "INTCONJ_BUDGET_ENUM": "enum_max",
    "INTCONJ_BUDGET_ELEMS": "elem_search_max",
    "INTCONJ_BUDGET_RADIUS": "elem_radius",
    "INTCONJ_BUDGET_TRIAL": "factor_trial_limit",
    "INTCONJ_BUDGET_RHO": "factor_rho_iters",
}


def default_budgets() -> Budgets:
    """Budgets with any INTCONJ_BUDGET_* environment overrides applied."""
    b = Budgets()
    overrides = {}
    for var, field in _ENV_FIELDS.items():
        val = os.environ.get(var)
        if val is not None:
            overrides[field] = int(val)
    return replace(b, **overrides) if overrides else b
