"""
Closed-form tail bounds.

Every function returns a TailBound; evaluate it at t (scalar or grid). The
second-order and k-th order curves bound μ(|f − E f| ≥ t); centering the
functional is the caller's job, and the exposed ``centering`` is advisory.
"""
import logging
import math

import numpy as np

from core.constants import ALL_SUBSPACE_MODES, MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL, SUBSPACE_ONTO
from core.exceptions import DimensionMismatchError, MissingNormError, PreconditionError, ValidityError

from .constants import (
    CENTERED_GRADIENT,
    GRASSMANN_DISTANCE,
    HANSON_WRIGHT,
    KTH_ORDER,
    LINEAR_FORM,
    LIPSCHITZ,
    NORM_CONCENTRATION,
    SECOND_ORDER,
    by_manifold,
)
from .curves import NormInput, TailBound, as_norm_input, ratio

logger = logging.getLogger(__name__)

PROVENANCE_LIPSCHITZ = {
    MANIFOLD_STIEFEL: 'Lipschitz tail, Stiefel (exp(-(n-1)t^2/(8L^2)))',
    MANIFOLD_GRASSMANN: 'Lipschitz tail, Grassmann (exp(-(n-1)t^2/(16L^2)))',
}
PROVENANCE_SECOND_ORDER = {
    MANIFOLD_STIEFEL: 'second-order tail, Stiefel (C = 16e^2/log 2)',
    MANIFOLD_GRASSMANN: 'second-order tail, Grassmann (C = 32e^2/log 2)',
}
PROVENANCE_CENTERED_GRADIENT = {
    MANIFOLD_STIEFEL: 'second-order tail with centered gradient, Stiefel (sqrt(8/(n-2-8d)))',
    MANIFOLD_GRASSMANN: 'second-order tail with centered gradient, Grassmann (sqrt(16/(n-2-16d)))',
}
PROVENANCE_KTH_ORDER = {
    MANIFOLD_STIEFEL: 'k-th order chaos tail, Stiefel (C = 4e^2/log 2)',
    MANIFOLD_GRASSMANN: 'k-th order chaos tail, Grassmann (C = 8e^2/log 2)',
}
PROVENANCE_HANSON_WRIGHT = {
    1: 'Hanson-Wright variant 1, Stiefel (C = 128e^2/log 2, centering tr(M)/n)',
    2: 'Hanson-Wright variant 2, Stiefel (C = 32e^2/log 2, centering tr(M)/n)',
    3: 'Hanson-Wright variant 3, Stiefel (C = 256e^2/log 2, centering tr(M)/n)',
}
PROVENANCE_LINEAR_FORM = 'linear form tail, Stiefel (2exp(-(n-1)t^2/(8 sup|P_A V|^2)))'
PROVENANCE_NORM_CONCENTRATION = 'norm concentration |MA| about |M|_HS/sqrt(n) (C = 384e^2/log 2)'
PROVENANCE_DIST_SUBSPACE = 'distance to a fixed subspace, Stiefel (C = 384e^2/log 2, centering sqrt(md/n))'
PROVENANCE_GRASSMANN_DISTANCE = 'distance to a fixed subspace, Grassmann (2exp(-(n-1)t^2/(64d)), mean 2d(1-d/n))'

# Norm inputs each Hanson-Wright variant needs
HANSON_WRIGHT_NORMS = {
    1: ('M_hs', 'M_op'),
    2: ('PU_hs2', 'PBP_op_sup'),
    3: ('PBP_hs2', 'PBP_op_sup'),
}


def _require_n(n, minimum, provenance):
    if n < minimum:
        raise ValidityError(f'n must be at least {minimum}, got n={n}', threshold=minimum, provenance=provenance)


def lipschitz_tail(L, n, manifold=MANIFOLD_STIEFEL):
    """One-sided μ(f − E f ≥ t) ≤ exp(−(n−1)t²/(8L²)); 16L² on the Grassmannian.

    ``L`` may be a Lipschitz constant or a sup-norm of the intrinsic gradient.
    """
    provenance = by_manifold(PROVENANCE_LIPSCHITZ, manifold)
    _require_n(n, 2, provenance)
    L = as_norm_input('L', L)
    if L.conservative <= 0:
        raise PreconditionError(f'the Lipschitz constant must be positive [{provenance}]')
    scale = L.conservative
    return TailBound(
        1.0,
        by_manifold(LIPSCHITZ, manifold),
        lambda t: (n - 1) * ratio(t, scale, 2),
        provenance,
        inputs=(L,),
        validity='n >= 2, L > 0',
    )


def _second_order(n, g2, hop, manifold, provenance, validity):
    scale_g, scale_h = g2.conservative, hop.conservative
    return TailBound(
        2.0,
        by_manifold(SECOND_ORDER, manifold),
        lambda t: (n - 2) * np.minimum(ratio(t, scale_g, 2), ratio(t, scale_h, 1)),
        provenance,
        inputs=(g2, hop),
        validity=validity,
    )


def second_order_tail(n, g2, hop, manifold=MANIFOLD_STIEFEL):
    """2·exp(−(n−2)/C · min(t²/g2², t/hop)) with g2 = ‖∇f‖_{HS,2} and hop = ‖f''‖_{op,∞}."""
    provenance = by_manifold(PROVENANCE_SECOND_ORDER, manifold)
    _require_n(n, 3, provenance)
    return _second_order(n, as_norm_input('grad_hs2', g2), as_norm_input('hess_op_sup', hop), manifold,
                         provenance, 'n >= 3')


def centered_gradient_factor(n, d, manifold=MANIFOLD_STIEFEL):
    """√(8/(n−2−8d)) (Stiefel) or √(16/(n−2−16d)) (Grassmann)."""
    provenance = by_manifold(PROVENANCE_CENTERED_GRADIENT, manifold)
    numerator, per_d = by_manifold(CENTERED_GRADIENT, manifold)
    denominator = n - 2 - per_d * d
    if denominator <= 0:
        raise ValidityError(
            f'needs n - 2 - {per_d}d > 0, got n={n}, d={d}', threshold=per_d * d + 2, provenance=provenance
        )
    return math.sqrt(numerator / denominator)


def second_order_tail_centered_grad(n, d, hess_hs2, hop, manifold=MANIFOLD_STIEFEL):
    """The second-order tail with ‖∇f‖_{HS,2} replaced by factor·‖f''‖_{HS,2}."""
    provenance = by_manifold(PROVENANCE_CENTERED_GRADIENT, manifold)
    factor = centered_gradient_factor(n, d, manifold)
    hess_hs2 = as_norm_input('hess_hs2', hess_hs2)
    g2 = hess_hs2._replace(
        name='grad_hs2',
        value=factor * hess_hs2.value,
        std_error=factor * hess_hs2.std_error,
        upper=None if hess_hs2.upper is None else factor * hess_hs2.upper,
    )
    _, per_d = by_manifold(CENTERED_GRADIENT, manifold)
    return _second_order(n, g2, as_norm_input('hess_op_sup', hop), manifold, provenance,
                         f'n - 2 - {per_d}d > 0')


def kth_order_tail(n, k, l2norms, kop, manifold=MANIFOLD_STIEFEL):
    """2·exp(−(n−2)/(Ck²)·min(min_ℓ t^{2/ℓ}/‖f^{(ℓ)}‖_{op,2}^{2/ℓ}, t^{2/k}/‖f^{(k)}‖_op^{2/k})).

    ℓ runs over 1..k−1; the last term uses the pointwise operator norm of f^{(k)}.
    """
    provenance = by_manifold(PROVENANCE_KTH_ORDER, manifold)
    _require_n(n, 3, provenance)
    if k < 1:
        raise PreconditionError(f'k must be at least 1, got {k} [{provenance}]')
    l2norms = [as_norm_input(f'deriv{ell}_op2', value) for ell, value in enumerate(l2norms, start=1)]
    if len(l2norms) != k - 1:
        raise DimensionMismatchError(f'order {k} needs {k - 1} L2 derivative norms, got {len(l2norms)}')
    kop = as_norm_input(f'deriv{k}_op', kop)
    scales = [(norm.conservative, 2.0 / ell) for ell, norm in enumerate(l2norms, start=1)]
    scales.append((kop.conservative, 2.0 / k))

    def rate(t):
        terms = [ratio(t, scale, power) for scale, power in scales]
        return (n - 2) / k ** 2 * np.minimum.reduce(terms)

    return TailBound(2.0, by_manifold(KTH_ORDER, manifold), rate, provenance, inputs=(*l2norms, kop),
                     validity='n >= 3, k >= 1')


def hanson_wright_validity(n, d, variant):
    """The parameter condition of a Hanson–Wright variant; raises when (n, d) violates it."""
    if variant not in HANSON_WRIGHT:
        raise PreconditionError(f'Hanson-Wright variant must be 1, 2 or 3, got {variant!r}')
    provenance = PROVENANCE_HANSON_WRIGHT[variant]
    _require_n(n, 3, provenance)
    if variant == 3:
        if n - 2 - 8 * d <= 0:
            raise ValidityError(f'variant 3 needs n > 8d + 2, got n={n}, d={d}', threshold=8 * d + 2,
                                provenance=provenance)
        return 'n - 2 - 8d > 0'
    return 'n >= 3'


def hanson_wright_tail(n, d, variant, norms, centering=None):
    """The three Hanson–Wright curves for f₂ − tr(M)/n on W_{n,d}.

    ``norms`` maps the names in HANSON_WRIGHT_NORMS[variant] to numbers or NormInputs.
    """
    validity = hanson_wright_validity(n, d, variant)
    provenance = PROVENANCE_HANSON_WRIGHT[variant]
    gap = n - 2 - 8 * d
    missing = [name for name in HANSON_WRIGHT_NORMS[variant] if norms.get(name) is None]
    if missing:
        raise MissingNormError(missing, provenance)
    first, second = (as_norm_input(name, norms[name]) for name in HANSON_WRIGHT_NORMS[variant])
    hs, op = first.conservative, second.conservative

    if variant == 1:
        def rate(t):
            return np.minimum(ratio((n - 2) * np.asarray(t, dtype=float), hs, 2),
                              ratio((n - 2) * np.asarray(t, dtype=float), op, 1))
    elif variant == 2:
        def rate(t):
            return np.minimum((n - 2) * ratio(t, hs, 2), (n - 2) * ratio(t, op, 1))
    else:
        def rate(t):
            return np.minimum(ratio(gap * np.asarray(t, dtype=float), hs, 2), (n - 2) * ratio(t, op, 1))

    return TailBound(2.0, HANSON_WRIGHT[variant], rate, provenance, inputs=(first, second), validity=validity,
                     centering=centering)


def linear_form_tail(n, pv_norm):
    """2·exp(−(n−1)t²/(8·sup_A ‖π_A V‖²_HS))."""
    _require_n(n, 2, PROVENANCE_LINEAR_FORM)
    pv_norm = as_norm_input('PV_hs_sup', pv_norm)
    scale = pv_norm.conservative
    return TailBound(2.0, LINEAR_FORM, lambda t: (n - 1) * ratio(t, scale, 2), PROVENANCE_LINEAR_FORM,
                     inputs=(pv_norm,), validity='n >= 2', centering=0.0)


def norm_conc_tail(n, m_op, centering=None, provenance=PROVENANCE_NORM_CONCENTRATION):
    """2·exp(−(n−2)t²/(C‖M‖²_op)) for ‖M vec(A)‖ about ‖M‖_HS/√n."""
    _require_n(n, 3, provenance)
    m_op = as_norm_input('M_op', m_op)
    scale = m_op.conservative
    return TailBound(2.0, NORM_CONCENTRATION, lambda t: (n - 2) * ratio(t, scale, 2), provenance,
                     inputs=(m_op,), validity='n >= 3', centering=centering)


def dist_subspace_tail(n, d, rank=None, mode=SUBSPACE_ONTO):
    """norm_conc_tail with ‖M‖_op = 1, centered at √(md/n) for a rank-m subspace (m = d unless given)."""
    rank = d if rank is None else rank
    if mode not in ALL_SUBSPACE_MODES:
        raise PreconditionError(f'unknown subspace mode {mode!r}')
    dim = rank if mode == SUBSPACE_ONTO else n - rank
    return norm_conc_tail(n, NormInput.exact('M_op', 1.0), centering=math.sqrt(dim * d / n),
                          provenance=PROVENANCE_DIST_SUBSPACE)


def grassmann_dist_tail(n, d):
    """2·exp(−(n−1)t²/(64d)) for ‖P − P_F‖² about 2d(1 − d/n)."""
    _require_n(n, 2, PROVENANCE_GRASSMANN_DISTANCE)
    if not 1 <= d <= n:
        raise DimensionMismatchError(f'need 1 <= d <= n, got n={n}, d={d}')
    return TailBound(2.0, GRASSMANN_DISTANCE, lambda t: (n - 1) * np.asarray(t, dtype=float) ** 2 / d,
                     PROVENANCE_GRASSMANN_DISTANCE, validity='n >= 2', centering=2.0 * d * (1.0 - d / n))
