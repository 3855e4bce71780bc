"""Typed errors shared across the library.

Budget errors are deliberate: hard instances must terminate with a named
resource limit instead of running unbounded.
"""


class IntconjError(Exception):
    pass


class NotContained(IntconjError):
    """A lattice claimed as a sublattice is not contained in the other."""


class FactorisationTooHard(IntconjError):
    """An integer could not be fully factored within the configured budget."""

    def __init__(self, n, remaining):
        super().__init__(f"cannot factor within budget, stuck cofactor has {len(str(remaining))} digits")
        self.n = n
        self.remaining = remaining


class EnumerationBudgetExceeded(IntconjError):
    """A submodule or element enumeration exceeded its configured cap."""


class OrbitBudgetExceeded(IntconjError):
    """A lattice orbit grew past the configured maximum size."""
