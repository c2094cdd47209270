"""Geometric complexity functionals of finite point sets.

Covers the [k]-norm (root of the k largest squared entries), Monte
Carlo Gaussian mean width, the width of the localized difference set,
greedy covering nets, and the derived quantities d* and Q_k that the
parameter planner and the regularity checks consume.
"""

from dataclasses import dataclass

import numpy as np

# Substream tag for width trials; trial t draws from (seed, (_TAG, t)).
_TAG_WIDTH = 7

# Pairs are processed in slabs of this many when the difference set is
# large, keeping peak memory flat.
_PAIR_BLOCK = 1 << 16


@dataclass
class PointSet:
    """A finite set of points stored as the rows of a (count, n) array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.ndim != 2:
            raise ValueError(f"points must be 2-d, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("point set needs at least one point and one coordinate")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite coordinates")
        self.points = pts

    @property
    def count(self):
        return self.points.shape[0]

    @property
    def n(self):
        return self.points.shape[1]

    def radius(self):
        """sup of the Euclidean norms of the points."""
        return float(np.linalg.norm(self.points, axis=1).max())


@dataclass
class ComplexityEstimate:
    value: float
    std_error: float
    trials: int
    seed: int


def k_support_norm(x, k):
    """Root of the sum of the k largest squared entries of x.

    Uses an O(n) partial selection rather than a sort.
    """
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise ValueError("x must be a vector")
    n = a.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    sq = a * a
    if k == n:
        return float(np.sqrt(sq.sum()))
    top = np.partition(sq, n - k)[n - k:]
    return float(np.sqrt(top.sum()))


def k_support_norms(rows, k):
    """Row-wise [k]-norm of a (count, n) array."""
    a = np.asarray(rows, dtype=np.float64)
    n = a.shape[-1]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    sq = a * a
    if k < n:
        sq = np.partition(sq, n - k, axis=-1)[..., n - k:]
    return np.sqrt(sq.sum(axis=-1))


def _trial_gaussian(seed, trial, n):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_TAG_WIDTH, trial))
    return np.random.default_rng(ss).standard_normal(n)


def _projected_sup(points, seed, trials, start=0):
    """max_x |<G_t, x>| for trials t = start..start+trials-1.

    Each trial's Gaussian is derived from (seed, trial index), so the
    result set does not depend on evaluation order, and two point sets
    compared under the same seed share their random numbers.
    """
    n = points.shape[1]
    sups = np.empty(trials)
    chunk = max(1, min(trials, (1 << 22) // max(n, 1)))
    for lo in range(0, trials, chunk):
        hi = min(lo + chunk, trials)
        gaussians = np.empty((hi - lo, n))
        for t in range(lo, hi):
            gaussians[t - lo] = _trial_gaussian(seed, start + t, n)
        sups[lo:hi] = np.abs(points @ gaussians.T).max(axis=0)
    return sups


def gaussian_mean_width(T, trials=4096, seed=0):
    """Monte Carlo estimate of E sup_{x in T} |<G, x>|."""
    if not isinstance(T, PointSet):
        T = PointSet(T)
    trials = int(trials)
    if trials < 2:
        raise ValueError("trials must be >= 2")
    sups = _projected_sup(T.points, seed, trials)
    value = float(sups.mean())
    stderr = float(sups.std(ddof=1) / np.sqrt(trials))
    return ComplexityEstimate(value, stderr, trials, seed)


def localized_width(T, theta, trials=4096, seed=0):
    """Squared width of the localized difference set (T - T) intersected
    with the ball of radius theta.

    All ordered pairwise differences with norm <= theta survive, plus
    the zero vector.  Returns the squared width with the error
    propagated through the square; an intersection of {0} alone gives
    an exact zero.
    """
    if not isinstance(T, PointSet):
        T = PointSet(T)
    if theta <= 0:
        raise ValueError("theta must be positive")
    trials = int(trials)
    if trials < 2:
        raise ValueError("trials must be >= 2")

    pts = T.points
    sq_norms = (pts * pts).sum(axis=1)
    gram = pts @ pts.T
    dist_sq = sq_norms[:, None] + sq_norms[None, :] - 2.0 * gram
    ii, jj = np.nonzero((dist_sq <= theta * theta) & ~np.eye(T.count, dtype=bool))
    if ii.size == 0:
        return ComplexityEstimate(0.0, 0.0, trials, seed)

    n = T.n
    sups = np.zeros(trials)
    chunk = max(1, min(trials, (1 << 22) // max(n, 1)))
    for lo in range(0, trials, chunk):
        hi = min(lo + chunk, trials)
        gaussians = np.empty((hi - lo, n))
        for t in range(lo, hi):
            gaussians[t - lo] = _trial_gaussian(seed, t, n)
        proj = pts @ gaussians.T
        for plo in range(0, ii.size, _PAIR_BLOCK):
            phi = min(plo + _PAIR_BLOCK, ii.size)
            block = np.abs(proj[ii[plo:phi]] - proj[jj[plo:phi]]).max(axis=0)
            sups[lo:hi] = np.maximum(sups[lo:hi], block)

    width = float(sups.mean())
    stderr = float(sups.std(ddof=1) / np.sqrt(trials))
    return ComplexityEstimate(width * width, 2.0 * width * stderr, trials, seed)


def greedy_net(T, theta):
    """Greedy covering net: a subset of T whose open theta-balls cover T.

    Centers are chosen by maximum coverage of the still-uncovered
    points (ties to the lowest index), which is deterministic, upper
    bounds the minimal net size, and hits the optimum on small
    structured instances.  Downstream consumers are monotone in log of
    the net size, so an upper bound is conservative.
    """
    if not isinstance(T, PointSet):
        T = PointSet(T)
    if theta <= 0:
        raise ValueError("theta must be positive")
    pts = T.points
    sq_norms = (pts * pts).sum(axis=1)
    dist_sq = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (pts @ pts.T)
    np.maximum(dist_sq, 0.0, out=dist_sq)
    covers = dist_sq < theta * theta  # covers[c, i]: center c covers point i
    chosen = []
    uncovered = np.ones(T.count, dtype=bool)
    gains = covers.sum(axis=1)
    while uncovered.any():
        c = int(gains.argmax())
        chosen.append(c)
        newly = covers[c] & uncovered
        uncovered &= ~covers[c]
        gains -= covers[:, newly].sum(axis=1)
    chosen.sort()
    return PointSet(pts[chosen])


def d_star(T, trials=4096, seed=0):
    """(l*(T) / R(T))^2 with the width estimated by Monte Carlo."""
    if not isinstance(T, PointSet):
        T = PointSet(T)
    radius = T.radius()
    if radius <= 0:
        raise ValueError("R(T) must be positive")
    width = gaussian_mean_width(T, trials=trials, seed=seed)
    return (width.value / radius) ** 2


def q_k(width, R, k, m, rho):
    """rho * sqrt(width^2 + R^2 * k * log(e*m/k)) for a width estimate
    width ~ l*(T)."""
    if R <= 0:
        raise ValueError("R must be positive")
    if rho <= 0:
        raise ValueError("rho must be positive")
    k = int(k)
    m = int(m)
    if not 1 <= k <= m:
        raise ValueError(f"k must be in [1, m], got k={k}, m={m}")
    return float(rho * np.sqrt(width**2 + R**2 * k * np.log(np.e * m / k)))
