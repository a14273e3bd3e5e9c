"""Closed forms and regression machinery for Gaussian and heavy-tailed models.

Everything is computed in natural log internally and converted to the
requested base on output, which keeps log-base bookkeeping in one place.
All functions here are pure and thread-safe.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq
from scipy.special import gammaln

from .errors import DomainError, RankDeficiencyError

__all__ = [
    "GaussianModel",
    "RegressionFit",
    "gaussian_renyi_entropy",
    "least_squares_fit",
    "granger_f",
    "alpha_gaussian_entropy_unit",
    "alpha_gaussian_cond_mi",
    "taylor_correction",
    "escort_distribution",
]

_SYM_TOL = 1e-12


@dataclass(frozen=True)
class GaussianModel:
    """A zero-mean multivariate Gaussian given by its covariance matrix."""

    covariance: np.ndarray

    def __post_init__(self):
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=float))
        if cov.shape[0] != cov.shape[1]:
            raise DomainError("covariance must be square")
        if not np.allclose(cov, cov.T, atol=_SYM_TOL, rtol=0.0):
            raise DomainError("covariance must be symmetric to 1e-12")
        if np.linalg.eigvalsh(cov).min() <= 0.0:
            raise DomainError("covariance must be positive definite")
        cov = np.ascontiguousarray(cov)
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.covariance.shape[0]


@dataclass(frozen=True)
class RegressionFit:
    """Ordinary least-squares fit X = a + Y A + e.

    coefficients : (p, q) matrix A mapping predictors to targets
    intercept : (q,) vector a
    residual_cov : (q, q) residual covariance Sigma(e), population-normalized
    """

    coefficients: np.ndarray
    intercept: np.ndarray
    residual_cov: np.ndarray


def _log_alpha_power(alpha: float) -> float:
    # ln(alpha^(alpha'/alpha)) = ln(alpha)/(alpha-1), -> 1 as alpha -> 1.
    if alpha == 1.0:
        return 1.0
    return math.log(alpha) / (alpha - 1.0)


def gaussian_renyi_entropy(model: GaussianModel, alpha: float,
                           log_base: float = math.e) -> float:
    """Order-alpha entropy of a multivariate Gaussian.

    H_alpha = (1/2) ln|Sigma| + (D/2) ln(2 pi alpha^(alpha'/alpha)) with
    alpha' the Hoelder dual of alpha; the alpha -> 1 limit replaces
    alpha^(alpha'/alpha) by e, recovering the Shannon value.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    sign, logdet = np.linalg.slogdet(model.covariance)
    if sign <= 0:
        raise DomainError("covariance must be positive definite")
    d = model.dim
    nats = 0.5 * logdet + 0.5 * d * (math.log(2.0 * math.pi)
                                     + _log_alpha_power(alpha))
    return nats / math.log(log_base)


def least_squares_fit(predictors: np.ndarray, targets: np.ndarray) -> RegressionFit:
    """OLS with intercept via QR factorization (rank-revealing).

    Raises RankDeficiencyError when the design matrix with intercept
    column is numerically rank deficient.
    """
    y = np.asarray(predictors, dtype=float)
    x = np.asarray(targets, dtype=float)
    if y.ndim == 1:
        y = y.reshape(-1, 1)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    n = y.shape[0]
    if x.shape[0] != n:
        raise DomainError("predictors and targets must have equal length")
    design = np.column_stack([np.ones(n), y])
    coef, _, rank, _ = lstsq(design, x, lapack_driver="gelsy")
    if rank < design.shape[1]:
        raise RankDeficiencyError(
            f"design matrix rank {rank} < {design.shape[1]} columns")
    resid = x - design @ coef
    return RegressionFit(
        coefficients=coef[1:],
        intercept=coef[0],
        residual_cov=(resid.T @ resid) / n,
    )


def _lag_matrix(series: np.ndarray, lags: int, anchor_from: int) -> np.ndarray:
    cols = [series[anchor_from - j:len(series) - j] for j in range(1, lags + 1)]
    return np.column_stack(cols)


def granger_f(target, source, k: int, l: int,
              log_base: float = math.e) -> float:
    """Log residual-variance ratio of nested autoregressions.

    Full model: target_t on an intercept, k target lags and l source lags;
    reduced model drops the source lags. Both are fit on the same anchor
    rows, so the sample statistic is non-negative up to rounding. Scale
    invariant in both series.
    """
    x = np.asarray(target, dtype=float).ravel()
    y = np.asarray(source, dtype=float).ravel()
    if x.shape != y.shape:
        raise DomainError("target and source must have equal length")
    if k < 1 or l < 1:
        raise DomainError("lag orders k, l must be >= 1")
    p = max(k, l)
    if len(x) <= p + max(k + l + 1, 10):
        raise DomainError("series too short for the requested lag orders")
    resp = x[p:]
    x_lags = _lag_matrix(x, k, p)
    y_lags = _lag_matrix(y, l, p)
    full = least_squares_fit(np.column_stack([x_lags, y_lags]), resp)
    reduced = least_squares_fit(x_lags, resp)
    var_full = float(full.residual_cov[0, 0])
    var_reduced = float(reduced.residual_cov[0, 0])
    if var_full <= 0.0:
        raise RankDeficiencyError("full model residual variance is zero")
    return math.log(var_reduced / var_full) / math.log(log_base)


def _validity_lower(d: int) -> float:
    return d / (2.0 + d)


def alpha_gaussian_entropy_unit(D: int, alpha: float,
                                log_base: float = math.e) -> float:
    """Order-alpha entropy of the D-dim unit-covariance alpha-Gaussian.

    Valid on the finite-covariance region alpha in (D/(2+D), 1]; the
    alpha -> 1 limit is the Gaussian value (D/2) ln(2 pi e).
    """
    if int(D) != D or D < 1:
        raise DomainError(f"D must be a positive integer, got {D!r}")
    D = int(D)
    low = _validity_lower(D)
    if not (low < alpha <= 1.0):
        raise DomainError(
            f"alpha={alpha} outside validity range ({low}, 1] for D={D}")
    if alpha == 1.0:
        nats = 0.5 * D * math.log(2.0 * math.pi * math.e)
    else:
        x = 1.0 / (1.0 - alpha)
        nats = (0.5 * D * math.log(2.0 * math.pi * alpha)
                + float(gammaln(x - 0.5 * D)) - float(gammaln(x))
                - 0.5 * D * math.log(1.0 - alpha)
                + (0.5 * D - x) * math.log1p(-D * (1.0 - alpha) / (2.0 * alpha)))
    return nats / math.log(log_base)


def alpha_gaussian_cond_mi(k: int, l: int, alpha: float,
                           log_base: float = math.e) -> float:
    """Conditional mutual information between unit alpha-Gaussian blocks.

    The Gamma-ratio closed form for I(scalar : l-block | k-block); valid
    for alpha in ((1+k+l)/(3+k+l), 1], non-positive throughout, with the
    supremum 0 attained in the alpha -> 1 limit.
    """
    if int(k) != k or k < 1 or int(l) != l or l < 1:
        raise DomainError("k and l must be integers >= 1")
    k, l = int(k), int(l)
    low = (1.0 + k + l) / (3.0 + k + l)
    if not (low < alpha <= 1.0):
        raise DomainError(
            f"alpha={alpha} outside validity range ({low}, 1] "
            f"for k={k}, l={l}")
    if alpha == 1.0:
        return 0.0
    x = 1.0 / (1.0 - alpha)
    y = alpha / (1.0 - alpha)
    halves = np.array([1.0 + k, k, k + l, 1.0 + k + l]) / 2.0
    signs = np.array([1.0, -1.0, 1.0, -1.0])
    gam = float(np.dot(signs, gammaln(x - halves)))
    pow_ = float(np.dot(signs, (halves - x) * np.log(y - halves)))
    return (gam + pow_) / math.log(log_base)


def taylor_correction(l: int, alpha: float) -> float:
    """Leading-order gap l (alpha-1)^2 / 4 between the log variance-ratio
    statistic and twice the transfer entropy for heavy-tailed blocks."""
    return l * (alpha - 1.0) ** 2 / 4.0


def escort_distribution(p, alpha: float) -> np.ndarray:
    """Escort reweighting rho_i = p_i^alpha / sum_j p_j^alpha.

    alpha < 1 amplifies rare outcomes, alpha > 1 amplifies probable ones.
    Zero entries stay zero at every alpha (support convention 0^0 = 0).
    """
    if not alpha >= 0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError("p must be a nonempty 1-D probability vector")
    if np.any(p < 0):
        raise DomainError("probabilities must be non-negative")
    total = p.sum()
    if total == 0.0:
        raise DomainError("all-zero probability vector")
    if abs(total - 1.0) > 1e-9:
        raise DomainError(f"p must sum to 1 within 1e-9, got {total!r}")
    powered = np.where(p > 0.0, p, 1.0) ** alpha
    powered = np.where(p > 0.0, powered, 0.0)
    return powered / powered.sum()
