"""Special functions used by the nearest-neighbor entropy estimators.

Thin wrappers around scipy.special with explicit domain checks; ``digamma``
follows the standard sign convention psi(x) = Gamma'(x)/Gamma(x).
"""

import numpy as np
from scipy import special as _sp

from .errors import DomainError

__all__ = ["gamma_ln", "digamma", "unit_ball_volume"]


def gamma_ln(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"gamma_ln requires x > 0, got {x!r}")
    return float(_sp.gammaln(x))


def digamma(x: float) -> float:
    """Digamma psi(x) = d/dx ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    return float(_sp.psi(x))


def unit_ball_volume(m: int) -> float:
    """Volume of the Euclidean unit ball in dimension m >= 1.

    V_m = pi^(m/2) / Gamma(m/2 + 1).
    """
    if int(m) != m or m < 1:
        raise DomainError(f"unit_ball_volume requires an integer m >= 1, got {m!r}")
    m = int(m)
    return float(np.exp(0.5 * m * np.log(np.pi) - _sp.gammaln(0.5 * m + 1.0)))
