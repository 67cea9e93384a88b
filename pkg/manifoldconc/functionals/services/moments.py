"""Exact low-order moments of the uniform measures on W_{n,d} and G_{n,d}."""
from dataclasses import dataclass

from core.exceptions import DimensionMismatchError


@dataclass(frozen=True)
class EntryMoments:
    """E A_ij = 0, E A_ij A_kl = δ/n, third moments 0, E P_ij = (d/n)δ_ij."""

    n: int
    d: int

    @property
    def variance(self):
        return 1.0 / self.n

    @property
    def squared_norm(self):
        """Σ A²_kl, equal to d for every sample."""
        return float(self.d)

    def first(self, entry):
        return 0.0

    def second(self, entry, other):
        return self.variance if tuple(entry) == tuple(other) else 0.0

    def third(self, first, second, third):
        return 0.0

    def projection(self, i, j):
        return self.d / self.n if i == j else 0.0


def entry_moment_table(n, d):
    if not 1 <= d <= n:
        raise DimensionMismatchError(f'moments are defined for 1 <= d <= n, got n={n}, d={d}')
    return EntryMoments(n, d)
