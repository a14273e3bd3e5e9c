"""Point clouds and exact k-nearest-neighbor distance tables.

The tree path uses a k-d tree with exact backtracking (scipy's cKDTree);
an O(n^2) brute-force path is kept behind ``method="brute"`` as the test
oracle. Only distances are exposed: neighbor identities are irrelevant
downstream, so distance ties cannot alter results.

Both ``PointCloud`` and ``NeighborTable`` are immutable after construction
and safe to share across threads.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError

__all__ = ["PointCloud", "NeighborTable", "knn_table"]


@dataclass(frozen=True)
class PointCloud:
    """N points in m-dimensional Euclidean space.

    Parameters
    ----------
    points : array_like, shape (n, m)
        Row-per-point coordinates. A 1-D array is treated as n points in
        one dimension. Requires n >= 2 and m >= 1.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise DomainError(f"points must be a 2-D array, got ndim={pts.ndim}")
        if pts.shape[0] < 2:
            raise DomainError("a point cloud needs at least 2 points")
        if pts.shape[1] < 1:
            raise DomainError("point dimension must be >= 1")
        if not np.all(np.isfinite(pts)):
            raise DomainError("point coordinates must be finite")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def diameter(self) -> float:
        """Upper bound on the cloud diameter via the coordinate bounding box."""
        span = self.points.max(axis=0) - self.points.min(axis=0)
        return float(np.linalg.norm(span))


@dataclass(frozen=True)
class NeighborTable:
    """Euclidean distances to the 1st..Lth nearest neighbors of each point.

    ``dist[i, r]`` is the distance from point i to its (r+1)-th nearest
    neighbor, self excluded by index. Rows are non-decreasing.
    """

    dist: np.ndarray
    max_rank: int = field(init=False)

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2:
            raise DomainError("dist must be an (n, L) matrix")
        if np.any(d < 0):
            raise DomainError("neighbor distances must be non-negative")
        d = np.ascontiguousarray(d)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "max_rank", d.shape[1])

    def rank(self, ell: int) -> np.ndarray:
        """Distances to the ell-th nearest neighbor, ell = 1..max_rank."""
        if not 1 <= ell <= self.max_rank:
            raise DomainError(f"rank {ell} outside 1..{self.max_rank}")
        return self.dist[:, ell - 1]


def _knn_brute(points: np.ndarray, max_rank: int) -> np.ndarray:
    # All-pairs oracle; quadratic memory, intended for n <= a few thousand.
    diff = points[:, None, :] - points[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(d, np.inf)
    d.sort(axis=1)
    return d[:, :max_rank]


def knn_table(cloud: PointCloud, max_rank: int, method: str = "tree",
              workers: int = 1) -> NeighborTable:
    """Exact ell-th nearest-neighbor distances for ell = 1..max_rank.

    Parameters
    ----------
    cloud : PointCloud
    max_rank : int
        Highest neighbor rank L; must satisfy L <= n - 1.
    method : {"tree", "brute"}
        "tree" uses a k-d tree with exact backtracking; "brute" is the
        O(n^2) all-pairs oracle.
    workers : int
        Parallel query workers for the tree path (-1 uses all cores).
        Output is identical for any worker count.
    """
    if int(max_rank) != max_rank or max_rank < 1:
        raise DomainError(f"max_rank must be a positive integer, got {max_rank!r}")
    max_rank = int(max_rank)
    if max_rank >= cloud.n:
        raise DomainError(
            f"max_rank={max_rank} must be <= n-1 = {cloud.n - 1}")
    if method == "brute":
        return NeighborTable(_knn_brute(cloud.points, max_rank))
    if method != "tree":
        raise DomainError(f"unknown method {method!r}")
    tree = cKDTree(cloud.points)
    # k=max_rank+1 includes the query point itself at distance 0; dropping
    # the first column excludes self while keeping duplicate points countable.
    d, _ = tree.query(cloud.points, k=max_rank + 1, workers=workers)
    return NeighborTable(d[:, 1:])
