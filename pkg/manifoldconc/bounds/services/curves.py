"""Tail-bound curves and the norm inputs they are evaluated at."""
import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from core.constants import NORM_BRACKETED, NORM_EMPIRICAL_MAX, NORM_EXACT, NORM_MC, SIGMA_LEVEL
from core.exceptions import PreconditionError

from .constants import TheoremConstant

logger = logging.getLogger(__name__)


class NormInput(NamedTuple):
    """A norm parameter with its provenance.

    Monte Carlo estimates carry a standard error and bracketed operator norms
    an upper end; ``conservative`` is the value bounds are evaluated at.
    """

    name: str
    value: float
    kind: str = NORM_EXACT
    std_error: float = 0.0
    upper: Optional[float] = None

    @classmethod
    def exact(cls, name, value):
        return cls(name, float(value))

    @classmethod
    def estimated(cls, name, value, std_error):
        return cls(name, float(value), NORM_MC, float(std_error))

    @classmethod
    def bracketed(cls, name, lower, upper):
        return cls(name, float(lower), NORM_BRACKETED, 0.0, float(upper))

    @classmethod
    def empirical_max(cls, name, value):
        return cls(name, float(value), NORM_EMPIRICAL_MAX)

    @property
    def conservative(self):
        if self.kind == NORM_MC:
            return self.value + SIGMA_LEVEL * self.std_error
        if self.kind == NORM_BRACKETED and self.upper is not None:
            return self.upper
        return self.value

    @property
    def certified(self):
        return self.kind != NORM_EMPIRICAL_MAX

    def as_dict(self):
        return {
            'name': self.name,
            'value': self.value,
            'kind': self.kind,
            'std_error': self.std_error,
            'upper': self.upper,
            'conservative': self.conservative,
        }


def as_norm_input(name, value):
    """Wrap a bare number as an exact input; reject negative norms."""
    norm = value if isinstance(value, NormInput) else NormInput.exact(name, value)
    if not np.isfinite(norm.conservative) or norm.conservative < 0:
        raise PreconditionError(f'norm input {name} must be finite and non-negative, got {norm.conservative!r}')
    return norm


def ratio(t, scale, power):
    """(t/scale)^power with 0 at t = 0 and +inf for a zero scale at t > 0."""
    t = np.asarray(t, dtype=float)
    if scale == 0.0:
        return np.where(t > 0, np.inf, 0.0)
    return (t / scale) ** power


@dataclass(frozen=True)
class TailBound:
    """t ↦ prefactor·exp(−rate(t)/C) for a theorem constant C.

    ``rate`` is vectorized over t. ``validity`` states the parameter
    condition the bound was checked against.
    """

    prefactor: float
    constant: TheoremConstant
    rate: Callable[[np.ndarray], np.ndarray]
    provenance: str
    inputs: tuple = ()
    validity: str = ''
    centering: Optional[float] = None
    divisor: int = 1

    def __call__(self, t):
        values = self.evaluate(t)
        return float(values) if np.ndim(values) == 0 else values

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over='ignore', invalid='ignore'):
            values = self.prefactor * np.exp(-self.rate(t) / self.constant.value)
        return values

    @property
    def certified(self):
        """False when an input is an uncertified empirical supremum."""
        return all(norm.certified for norm in self.inputs)

    def weakened(self, divisor):
        """The same curve with C divided by ``divisor``, for fault injection."""
        return dataclasses.replace(
            self,
            constant=self.constant.divided(divisor),
            provenance=f'{self.provenance} [constant / {divisor}]',
            divisor=self.divisor * divisor,
        )

    def describe(self):
        return {
            'provenance': self.provenance,
            'constant': str(self.constant),
            'constant_value': self.constant.value,
            'validity': self.validity,
            'centering': self.centering,
            'certified': self.certified,
            'inputs': [norm.as_dict() for norm in self.inputs],
        }

    def shape_violations(self, scale=1.0, points=200, vanish=1e-6):
        """Problems with the curve's shape: below 1 at 0, increasing, or not vanishing at 10³·scale."""
        problems = []
        if self(0.0) < 1.0:
            problems.append(f'value at t=0 is {self(0.0)!r} < 1')
        grid = np.linspace(0.0, 10.0 * scale, points)
        values = self.evaluate(grid)
        if np.any(np.diff(values) > 1e-15):
            problems.append('curve increases on the grid')
        if self(1e3 * scale) > vanish:
            problems.append(f'curve does not vanish: {self(1e3 * scale)!r} at t={1e3 * scale}')
        if problems:
            logger.warning('Shape check failed for %s: %s', self.provenance, '; '.join(problems))
        return problems
