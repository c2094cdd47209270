"""Empirical checks of the operator properties the theory promises.

Every supremum here is taken over finitely many sampled vectors, so the
measured values are lower bounds on the true suprema; reports label
them "observed" and thresholds carry calibrated headroom.  Probabilistic
statements are exercised through a seed-replicated protocol: a check
runs across many independently seeded trials and a pass fraction is
asserted, since the theory only promises high probability with
unspecified constants.
"""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .complexity import k_support_norms
from .quantize import KAPPA, embed_points

# Substream tags for sampler draws; disjoint from operator/dither tags.
_TAG_SPARSE = 11
_TAG_BLOCK = 13


def worker_count():
    """Parallelism degree: HC_THREADS when set, else the core count."""
    env = os.environ.get("HC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def trial_map(fn, args_list, max_workers=None):
    """Run independent trials, possibly threaded, preserving order."""
    workers = max_workers or worker_count()
    if workers <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list))


@dataclass
class SparseSampler:
    """Unit-norm vectors with exactly r nonzeros.

    Supports are uniform, values Gaussian then normalized.  Sample t is
    derived from (seed, t), so a longer run extends a shorter one: the
    first h vectors of samples=H coincide with samples=h, which makes
    empirical suprema monotone in the sample count.
    """

    r: int
    n: int
    samples: int
    seed: int

    def __post_init__(self):
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def with_r(self, r):
        return SparseSampler(r, self.n, self.samples, self.seed)

    def vectors(self):
        out = np.zeros((self.samples, self.n))
        for t in range(self.samples):
            ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(_TAG_SPARSE, t))
            rng = np.random.default_rng(ss)
            support = rng.choice(self.n, size=self.r, replace=False)
            vals = rng.standard_normal(self.r)
            out[t, support] = vals / np.linalg.norm(vals)
        return out


def check_l1_concentration(op, points, kappa=KAPPA, include_origin=False):
    """sup over pairs of | (kappa/m) ||A(x-y)||_1 - ||x-y||_2 |.

    With include_origin the singleton deviations (each x against 0) join
    the supremum.
    """
    pts = np.atleast_2d(np.asarray(points.points if hasattr(points, "points") else points))
    imgs = op.apply(pts)
    scale = kappa / op.rows
    worst = 0.0
    count = pts.shape[0]
    for i in range(count):
        diffs = imgs[i + 1:] - imgs[i]
        if diffs.size:
            l1 = np.abs(diffs).sum(axis=1)
            true = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
            worst = max(worst, np.abs(scale * l1 - true).max())
    if include_origin:
        l1 = np.abs(imgs).sum(axis=1)
        true = np.linalg.norm(pts, axis=1)
        worst = max(worst, np.abs(scale * l1 - true).max())
    return float(worst)


@dataclass
class WellSpreadResult:
    net_value: float
    net_passed: bool
    diff_value: float
    diff_passed: bool

    @property
    def passed(self):
        return self.net_passed and self.diff_passed


def check_well_spread(op, net, diffs, k, lam, delta):
    """The two [k]-norm conditions a well-spread embedding operator needs.

    Evaluates (1/sqrt(k)) sup ||Ax||_[k] exactly over the supplied net
    (against lambda) and over the localized difference set (against
    delta).
    """
    k = int(k)
    if not 1 <= k <= op.rows:
        raise ValueError(f"k must be in [1, {op.rows}], got {k}")
    root_k = math.sqrt(k)
    net_imgs = op.apply(np.atleast_2d(net.points))
    net_value = float(k_support_norms(net_imgs, k).max() / root_k)
    diff_imgs = op.apply(np.atleast_2d(diffs.points))
    diff_value = float(k_support_norms(diff_imgs, k).max() / root_k)
    return WellSpreadResult(net_value, net_value <= lam, diff_value, diff_value <= delta)


def check_rip(apply_B, r, sampler):
    """Observed sup over unit r-sparse samples of | ||Bx||^2 - 1 |."""
    if sampler.r != r:
        sampler = sampler.with_r(r)
    x = sampler.vectors()
    y = np.atleast_2d(apply_B(x))
    sq = (y * y).sum(axis=1)
    return float(np.abs(sq - 1.0).max())


@dataclass
class RegularityRecord:
    r: int
    rip_deviation: float
    spread_deviation: float


@dataclass
class RegularityProfile:
    """Per-sparsity deviations of a normalized operator.

    rho_hat is the implied regularity level max_r max(dev)/sqrt(r);
    predicted_rho carries the theory rate log^{5/2}(n)/sqrt(m) (unit
    constant) for side-by-side display.
    """

    n: int
    m: int
    records: list = field(default_factory=list)

    @property
    def rho_hat(self):
        return max(
            max(rec.rip_deviation, rec.spread_deviation) / math.sqrt(rec.r)
            for rec in self.records
        )

    @property
    def predicted_rho(self):
        return math.log(self.n) ** 2.5 / math.sqrt(self.m)

    @property
    def s_rho(self):
        return math.ceil(self.rho_hat**-2) if self.rho_hat > 0 else self.m

    @property
    def upsilon(self):
        return self.rho_hat * math.sqrt(self.m)


def geometric_grid(r_max):
    grid = []
    r = 1
    while r < r_max:
        grid.append(r)
        r *= 2
    grid.append(int(r_max))
    return grid


def check_strong_regularity(apply_B, r_max, sampler):
    """Regularity profile over the geometric sparsity grid {1,2,4,...}.

    For each r the sampler draws unit r-sparse vectors and both the
    restricted isometry deviation and the [r]-norm of the image are
    maximized over the samples.
    """
    first = np.atleast_2d(apply_B(sampler.with_r(1).vectors()[:1]))
    m = first.shape[-1]
    if not 1 <= r_max <= m:
        raise ValueError(f"r_max must be in [1, {m}], got {r_max}")
    profile = RegularityProfile(n=sampler.n, m=m)
    for r in geometric_grid(r_max):
        x = sampler.with_r(r).vectors()
        y = np.atleast_2d(apply_B(x))
        sq = (y * y).sum(axis=1)
        rip_dev = float(np.abs(sq - 1.0).max())
        spread_dev = float(k_support_norms(y, r).max())
        profile.records.append(RegularityRecord(r, rip_dev, spread_dev))
    return profile


@dataclass
class BlockRegularityResult:
    augmented_deviation: float
    rip_deviation: float
    spread_deviation: float
    tolerance: float

    @property
    def bound(self):
        return 3.0 * self.rip_deviation + 2.0 * self.spread_deviation + self.tolerance

    @property
    def passed(self):
        return self.augmented_deviation <= self.bound


def _block_pairs(n, m, r, samples, seed):
    xs = np.zeros((samples, n))
    ys = np.zeros((samples, m))
    for t in range(samples):
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(_TAG_BLOCK, t))
        rng = np.random.default_rng(ss)
        sx = rng.choice(n, size=r, replace=False)
        sy = rng.choice(m, size=r, replace=False)
        vals = rng.standard_normal(2 * r)
        vals /= np.linalg.norm(vals)
        xs[t, sx] = vals[:r]
        ys[t, sy] = vals[r:]
    return xs, ys


def check_block_regularity(apply_B, m, r, sampler, tolerance=0.0):
    """Deviation of the augmented map (x, y) -> Bx + y on sparse pairs.

    The augmented deviation is compared against 3 x (base restricted
    isometry deviation) + 2 x (base [r]-norm supremum) + tolerance,
    the bound that lets regularity of B carry over to the block map.
    """
    if not 1 <= r <= m:
        raise ValueError(f"r must be in [1, {m}], got {r}")
    base = sampler.with_r(r).vectors()
    imgs = np.atleast_2d(apply_B(base))
    if imgs.shape[-1] != m:
        raise ValueError(f"apply_B produced {imgs.shape[-1]} rows, expected {m}")
    sq = (imgs * imgs).sum(axis=1)
    rip_dev = float(np.abs(sq - 1.0).max())
    spread_dev = float(k_support_norms(imgs, r).max())

    xs, ys = _block_pairs(sampler.n, m, r, sampler.samples, sampler.seed)
    aug = np.atleast_2d(apply_B(xs)) + ys
    pair_dev = float(np.abs((aug * aug).sum(axis=1) - 1.0).max())
    # The augmented sphere contains the restrictions (x, 0) and (0, y):
    # the first reproduces the base deviation, the second is exactly
    # isometric, so the supremum folds them in.
    aug_dev = max(pair_dev, rip_dev)
    return BlockRegularityResult(aug_dev, rip_dev, spread_dev, float(tolerance))


def measure_binary_distortion(op, tau, plan, T):
    """Worst pairwise | estimate - true distance | over the embedded set."""
    pts = np.atleast_2d(T.points)
    codes = embed_points(op, tau, pts)
    packed = np.stack([c.bits for c in codes])
    est_scale = 2.0 * plan.lam * plan.kappa / codes[0].m
    worst = 0.0
    count = pts.shape[0]
    for i in range(count):
        if i + 1 >= count:
            break
        d_h = np.bitwise_count(packed[i + 1:] ^ packed[i]).sum(axis=1)
        true = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        worst = max(worst, np.abs(est_scale * d_h - true).max())
    return float(worst)


def measure_l2l1_distortion(apply_C, T):
    """Worst pairwise | ||C(x-y)||_1 / ||x-y||_2 - 1 |.

    Coincident pairs carry no information for a relative error and are
    skipped; a set with no two distinct points is rejected.
    """
    pts = np.atleast_2d(T.points)
    imgs = np.atleast_2d(apply_C(pts))
    worst = -1.0
    count = pts.shape[0]
    for i in range(count):
        true = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        keep = true > 0
        if not keep.any():
            continue
        l1 = np.abs(imgs[i + 1:] - imgs[i]).sum(axis=1)
        worst = max(worst, np.abs(l1[keep] / true[keep] - 1.0).max())
    if worst < 0:
        raise ValueError("all points identical; relative distortion undefined")
    return float(worst)


@dataclass
class BenchRow:
    n: int
    m: int
    operator: str
    median_us: float
    p90_us: float


BENCH_CSV_HEADER = "n,m,operator,median_us,p90_us"


def _time_apply(apply_fn, x, repetitions):
    apply_fn(x)
    apply_fn(x)  # warm caches and plan buffers before timing
    samples = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        apply_fn(x)
        samples.append((time.perf_counter() - t0) * 1e6)
    arr = np.array(samples)
    return float(np.median(arr)), float(np.percentile(arr, 90))


def bench_scaling(n_list, m_rule, repetitions, seed=0, include_dense=True,
                  dense_entry_limit=2**27):
    """Median/p90 wall time per apply for both operator families.

    m_rule is either a fixed row count or a callable n -> m.  Dense
    rows are skipped (not fabricated) when the matrix would exceed the
    entry limit.
    """
    from .operators import build_double_circulant, build_gaussian

    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    rows = []
    for n in n_list:
        m = int(m_rule(n)) if callable(m_rule) else int(m_rule)
        rng = np.random.default_rng(seed + n)
        x = rng.standard_normal(n)
        op = build_double_circulant(n, m, seed=seed)
        med, p90 = _time_apply(op.apply, x, repetitions)
        rows.append(BenchRow(n, m, "double_circulant", med, p90))
        if include_dense and m * n <= dense_entry_limit:
            gop = build_gaussian(n, m, seed=seed)
            med, p90 = _time_apply(gop.apply, x, repetitions)
            rows.append(BenchRow(n, m, "gaussian", med, p90))
    return rows


def bench_rows_to_csv(rows):
    lines = [BENCH_CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row.n},{row.m},{row.operator},{row.median_us:.3f},{row.p90_us:.3f}"
        )
    return "\n".join(lines) + "\n"


@dataclass
class CheckResult:
    name: str
    parameters: dict
    seeds: list
    observed: float
    threshold: float
    passed: bool
    wall_time_s: float

    def to_dict(self):
        return {
            "name": self.name,
            "parameters": self.parameters,
            "seeds": list(self.seeds),
            "observed": self.observed,
            "threshold": self.threshold,
            "passed": bool(self.passed),
            "wall_time_s": self.wall_time_s,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            name=d["name"],
            parameters=dict(d["parameters"]),
            seeds=list(d["seeds"]),
            observed=float(d["observed"]),
            threshold=float(d["threshold"]),
            passed=bool(d["passed"]),
            wall_time_s=float(d["wall_time_s"]),
        )


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def extend(self, other):
        self.checks.extend(other.checks)
        return self

    def to_dict(self):
        return {"checks": [c.to_dict() for c in self.checks]}

    @classmethod
    def from_dict(cls, d):
        return cls([CheckResult.from_dict(c) for c in d.get("checks", [])])
