"""
Theorem constants kept in exact form: a rational times e^a / (log 2)^b.

They are evaluated in double precision only when a curve is computed.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL
from core.exceptions import PreconditionError


@dataclass(frozen=True)
class TheoremConstant:
    rational: Fraction
    e_power: int = 0
    log2_power: int = 0

    @property
    def value(self):
        return float(self.rational) * math.e ** self.e_power / math.log(2.0) ** self.log2_power

    def divided(self, divisor):
        return TheoremConstant(self.rational / Fraction(divisor), self.e_power, self.log2_power)

    def __str__(self):
        text = str(self.rational)
        if self.e_power == 1:
            text += 'e'
        elif self.e_power:
            text += f'e^{self.e_power}'
        if self.log2_power == 1:
            text += '/log 2'
        elif self.log2_power:
            text += f'/(log 2)^{self.log2_power}'
        return text


def e2_over_log2(rational):
    return TheoremConstant(Fraction(rational), 2, 1)


def plain(rational):
    return TheoremConstant(Fraction(rational))


def by_manifold(table, manifold):
    if manifold not in table:
        raise PreconditionError(f'unknown manifold {manifold!r}')
    return table[manifold]


LIPSCHITZ = {MANIFOLD_STIEFEL: plain(8), MANIFOLD_GRASSMANN: plain(16)}
SECOND_ORDER = {MANIFOLD_STIEFEL: e2_over_log2(16), MANIFOLD_GRASSMANN: e2_over_log2(32)}
KTH_ORDER = {MANIFOLD_STIEFEL: e2_over_log2(4), MANIFOLD_GRASSMANN: e2_over_log2(8)}
HANSON_WRIGHT = {1: e2_over_log2(128), 2: e2_over_log2(32), 3: e2_over_log2(256)}
NORM_CONCENTRATION = e2_over_log2(384)
LINEAR_FORM = plain(8)
GRASSMANN_DISTANCE = plain(64)
EXP_MOMENT = {MANIFOLD_STIEFEL: TheoremConstant(Fraction(32), 1), MANIFOLD_GRASSMANN: TheoremConstant(Fraction(64), 1)}

# Functional inequalities: constant c/(n - 2)
LOG_SOBOLEV = {MANIFOLD_STIEFEL: 4, MANIFOLD_GRASSMANN: 8}
# Centered-gradient condition n - 2 - b·d > 0 and factor sqrt(a/(n - 2 - b·d))
CENTERED_GRADIENT = {MANIFOLD_STIEFEL: (8, 8), MANIFOLD_GRASSMANN: (16, 16)}
