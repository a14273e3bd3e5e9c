"""Nearest-neighbor Renyi and Shannon differential entropy estimation.

The order-alpha estimator follows the Leonenko-Pronzato-Savani construction:
for neighbor rank ell and N points in m dimensions,

    H_alpha = ln(N-1) + ln V_m
              + [ln Gamma(ell) - ln Gamma(ell+1-alpha) + ln S] / (1-alpha),
    S = (1/N) sum_i rho_ell(i)^(m(1-alpha)),

in natural log, converted to the configured base on output. At alpha = 1 the
standard Kozachenko-Leonenko form applies:

    H_1 = psi(N) - psi(ell) + ln V_m + (m/N) sum_i ln rho_ell(i).

Estimates are exactly translation invariant and obey the scaling law
H(c*X) = H(X) + m*log_B(c). Single-rank estimates are deterministic pure
functions; ensembles over a rank range share one neighbor table, which is
the intended axis of concurrent evaluation.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, psi

from .errors import ConvergenceRangeError, DegenerateSampleError, DomainError
from .neighbors import NeighborTable, PointCloud, knn_table

__all__ = [
    "EstimatorConfig",
    "EntropyEstimate",
    "renyi_entropy_knn",
    "shannon_entropy_knn",
    "entropy_ensemble",
    "conditional_renyi_entropy",
]

_JITTER_SEED = 0x5EED
_JITTER_SCALE = 1e-12


@dataclass(frozen=True)
class EstimatorConfig:
    """Estimator settings: Renyi order, neighbor-rank range, log base.

    With n_min > 1 the admissible order is alpha <= (n_min + 1) / 2
    (so the default n_min = 5 admits alpha in [0, 3]); for n_min = 1 the
    dimension-dependent bound alpha <= 1 + 1/(2m) is enforced at
    evaluation time. ``degenerate_policy`` controls what happens when
    zero neighbor distances (duplicate samples) are detected: "error"
    raises, "jitter" adds uniform noise of amplitude 1e-12 times the
    cloud diameter and retries.
    """

    alpha: float
    n_min: int = 5
    n_max: int = 50
    log_base: float = math.e
    degenerate_policy: str = "error"
    workers: int = 1

    def __post_init__(self):
        if not (self.alpha >= 0):
            raise DomainError(f"alpha must be >= 0, got {self.alpha!r}")
        if not (1 <= self.n_min <= self.n_max):
            raise DomainError(
                f"need 1 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.log_base <= 0 or self.log_base == 1:
            raise DomainError(f"log_base must be positive and != 1")
        if self.degenerate_policy not in ("error", "jitter"):
            raise DomainError(
                f"degenerate_policy must be 'error' or 'jitter', "
                f"got {self.degenerate_policy!r}")
        if self.n_min > 1 and self.alpha > (self.n_min + 1) / 2:
            raise ConvergenceRangeError(
                f"alpha={self.alpha} outside convergence range [0, "
                f"{(self.n_min + 1) / 2}] for n_min={self.n_min}")

    @property
    def ranks(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)


@dataclass(frozen=True)
class EntropyEstimate:
    """Per-rank entropy values with their ensemble mean and spread.

    ``mean`` is the arithmetic mean over ranks; ``std`` is the
    Bessel-corrected sample deviation, defined as 0 for a single rank.
    """

    ranks: np.ndarray
    values: np.ndarray
    mean: float
    std: float

    @property
    def per_rank(self):
        """List of (rank, value) pairs."""
        return list(zip(self.ranks.tolist(), self.values.tolist()))


def _ensemble_stats(ranks, values) -> "EntropyEstimate":
    values = np.asarray(values, dtype=float)
    mean = float(values.mean())
    std = 0.0 if values.size == 1 else float(values.std(ddof=1))
    return EntropyEstimate(ranks=np.asarray(ranks), values=values,
                           mean=mean, std=std)


def _check_rank_alpha(alpha: float, rank: int, m: int) -> None:
    if rank == 1:
        bound = 1.0 + 1.0 / (2.0 * m)
    else:
        bound = (rank + 1) / 2.0
    if alpha > bound:
        raise ConvergenceRangeError(
            f"alpha={alpha} outside convergence range [0, {bound}] "
            f"for rank {rank} in dimension {m}")
    if rank + 1 - alpha <= 0:
        raise ConvergenceRangeError(
            f"Gamma argument rank+1-alpha = {rank + 1 - alpha} must be positive")


def _log_unit_ball(m: int) -> float:
    return 0.5 * m * math.log(math.pi) - float(gammaln(0.5 * m + 1.0))


def _renyi_values(n, m, rho, ranks, alpha):
    """Vectorized alpha != 1 estimator over rank columns, in nats.

    rho has one column per requested rank, aligned with ``ranks``.
    """
    expo = m * (1.0 - alpha)
    if expo < 0 and np.any(rho == 0.0):
        raise DegenerateSampleError(
            "zero neighbor distance with negative rho exponent "
            f"(alpha={alpha}, m={m})")
    s = np.mean(rho ** expo, axis=0)
    if np.any(s <= 0.0) or not np.all(np.isfinite(s)):
        raise DegenerateSampleError(
            "degenerate rho-power sum in Renyi estimator")
    lgr = gammaln(ranks) - gammaln(ranks + 1.0 - alpha)
    return (math.log(n - 1) + _log_unit_ball(m)
            + (lgr + np.log(s)) / (1.0 - alpha))


def _shannon_values(n, m, rho, ranks):
    """Vectorized Kozachenko-Leonenko estimator over rank columns, in nats."""
    if np.any(rho == 0.0):
        raise DegenerateSampleError(
            "zero neighbor distance in Shannon estimator")
    mean_log = np.mean(np.log(rho), axis=0)
    return psi(n) - psi(ranks.astype(float)) + _log_unit_ball(m) + m * mean_log


def renyi_entropy_knn(cloud: PointCloud, table: NeighborTable,
                      alpha: float, rank: int) -> float:
    """Order-alpha differential entropy from the rank-th neighbor distances.

    Requires alpha != 1 (use :func:`shannon_entropy_knn` for the limit),
    alpha inside the convergence range for the rank, and a positive Gamma
    argument rank + 1 - alpha. Returns nats.
    """
    if alpha == 1.0:
        raise DomainError("alpha = 1 is the Shannon branch; "
                          "use shannon_entropy_knn")
    if not alpha >= 0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    if not 1 <= rank <= table.max_rank:
        raise DomainError(f"rank {rank} outside table range 1..{table.max_rank}")
    _check_rank_alpha(alpha, rank, cloud.dim)
    rho = table.rank(rank).reshape(-1, 1)
    out = _renyi_values(cloud.n, cloud.dim, rho, np.array([rank], float), alpha)
    return float(out[0])


def shannon_entropy_knn(cloud: PointCloud, table: NeighborTable,
                        rank: int) -> float:
    """Kozachenko-Leonenko Shannon entropy from rank-th neighbor distances."""
    if not 1 <= rank <= table.max_rank:
        raise DomainError(f"rank {rank} outside table range 1..{table.max_rank}")
    rho = table.rank(rank).reshape(-1, 1)
    out = _shannon_values(cloud.n, cloud.dim, rho, np.array([rank]))
    return float(out[0])


def _jitter_cloud(cloud: PointCloud) -> PointCloud:
    # Deterministic tie-breaking noise; scaled to the cloud diameter so the
    # perturbation is negligible relative to any resolvable structure.
    amp = _JITTER_SCALE * cloud.diameter()
    if amp == 0.0:
        amp = _JITTER_SCALE
    rng = np.random.default_rng(_JITTER_SEED)
    noise = rng.uniform(-amp, amp, size=cloud.points.shape)
    return PointCloud(cloud.points + noise)


def _rank_values(cloud: PointCloud, cfg: EstimatorConfig) -> np.ndarray:
    """Per-rank entropy values for ranks n_min..n_max, in cfg.log_base units.

    Builds the neighbor table once at n_max. Any rank failing aborts the
    whole ensemble; no silent partial means.
    """
    if cfg.n_max > cloud.n - 1:
        raise DomainError(
            f"n_max={cfg.n_max} needs at least {cfg.n_max + 1} points, "
            f"cloud has {cloud.n}")
    if cfg.n_min == 1:
        _check_rank_alpha(cfg.alpha, 1, cloud.dim)
    table = knn_table(cloud, cfg.n_max, workers=cfg.workers)
    used = table.dist[:, cfg.n_min - 1:cfg.n_max]
    if np.any(used == 0.0):
        if cfg.degenerate_policy == "jitter":
            cloud = _jitter_cloud(cloud)
            table = knn_table(cloud, cfg.n_max, workers=cfg.workers)
            used = table.dist[:, cfg.n_min - 1:cfg.n_max]
            if np.any(used == 0.0):
                raise DegenerateSampleError(
                    "duplicate samples persist after jitter")
        else:
            raise DegenerateSampleError(
                "zero neighbor distances within the rank range "
                "(duplicate samples); set degenerate_policy='jitter' to "
                "perturb them")
    ranks = cfg.ranks.astype(float)
    if cfg.alpha == 1.0:
        vals = _shannon_values(cloud.n, cloud.dim, used, cfg.ranks)
    else:
        vals = _renyi_values(cloud.n, cloud.dim, used, ranks, cfg.alpha)
    return vals / math.log(cfg.log_base)


def entropy_ensemble(cloud: PointCloud, cfg: EstimatorConfig) -> EntropyEstimate:
    """Rank-ensemble entropy estimate over ell = n_min..n_max."""
    vals = _rank_values(cloud, cfg)
    return _ensemble_stats(cfg.ranks, vals)


def conditional_renyi_entropy(joint: PointCloud, condition_dims,
                              cfg: EstimatorConfig) -> EntropyEstimate:
    """Conditional entropy H(rest | condition_dims) of a joint cloud.

    Realized as H(joint) - H(projection onto condition_dims), subtracted
    rank-wise before the ensemble statistics are formed (shared neighbor
    ranks correlate estimation errors, so rank-wise differences have lower
    variance than differences of means). ``condition_dims`` are 0-based
    column indices and must form a nonempty proper subset of the columns.
    """
    dims = sorted(set(int(d) for d in condition_dims))
    if not dims:
        raise DomainError("condition_dims must be nonempty")
    if any(d < 0 or d >= joint.dim for d in dims):
        raise DomainError(f"condition_dims {dims} outside 0..{joint.dim - 1}")
    if len(dims) == joint.dim:
        raise DomainError("condition_dims must be a proper subset of columns")
    marginal = PointCloud(joint.points[:, dims])
    joint_vals = _rank_values(joint, cfg)
    cond_vals = _rank_values(marginal, cfg)
    return _ensemble_stats(cfg.ranks, joint_vals - cond_vals)
