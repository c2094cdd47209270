"""Dithered binary embedding into the Hamming cube.

A point x is encoded as sign(A x + tau) with tau uniform in
[-lambda, lambda]^m, and Euclidean distances are read back from Hamming
distances via d(x, y) ~ (2 * lambda * kappa / m) * d_H.  The planner
turns a target additive error delta and measured set complexity into
concrete (lambda, theta, m, k).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

KAPPA = math.sqrt(math.pi / 2.0)

DEFAULT_CONSTANTS = {"c0": 1.0, "c1": 1.0, "c2": 1.0, "c3": 1.0}

# Substream tag for dither draws, disjoint from the operator tags.
_TAG_DITHER = 5


class PlanInfeasibleError(ValueError):
    """Raised when the planned parameters cannot support the estimator."""


@dataclass
class DitherVector:
    entries: np.ndarray
    lam: float

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        if e.ndim != 1 or e.size < 1:
            raise ValueError("dither entries must form a non-empty vector")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if np.abs(e).max() > self.lam:
            raise ValueError("dither entries exceed [-lambda, lambda]")
        self.entries = e

    @property
    def m(self):
        return self.entries.size


def make_dither(m, lam, seed=0):
    """Uniform dither on [-lambda, lambda]^m, deterministic per seed."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_TAG_DITHER,))
    entries = np.random.default_rng(ss).uniform(-lam, lam, size=int(m))
    return DitherVector(entries, float(lam))


@dataclass
class BinaryCode:
    """A length-m sign pattern packed LSB-first into bytes.

    Bit 1 encodes +1 and bit 0 encodes -1; pad bits past m are zero.
    """

    bits: np.ndarray
    m: int

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=np.uint8)
        if b.ndim != 1:
            raise ValueError("packed bits must be 1-d")
        if self.m < 1:
            raise ValueError("code length must be >= 1")
        if b.size != (self.m + 7) // 8:
            raise ValueError(
                f"packed length {b.size} does not match m={self.m}"
            )
        pad = b.size * 8 - self.m
        if pad and (b[-1] >> (8 - pad)) != 0:
            raise ValueError("pad bits past m must be zero")
        self.bits = b

    @classmethod
    def from_signs(cls, signs):
        """Pack a boolean array (True <-> +1) into a code."""
        s = np.asarray(signs, dtype=bool)
        if s.ndim != 1:
            raise ValueError("signs must be 1-d")
        return cls(np.packbits(s, bitorder="little"), s.size)

    def unpack(self):
        return np.unpackbits(self.bits, count=self.m, bitorder="little").astype(bool)


def embed_binary(op, tau, x):
    """f(x) = sign(A x + tau), with sign(0) := +1."""
    if tau.m != op.rows:
        raise ValueError(
            f"dither length {tau.m} does not match operator output {op.rows}"
        )
    a = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("input contains non-finite values")
    z = op.apply(a) + tau.entries
    return BinaryCode.from_signs(z >= 0)


def embed_points(op, tau, points):
    """Embed every row of a (count, n) array; one batched operator pass."""
    if tau.m != op.rows:
        raise ValueError(
            f"dither length {tau.m} does not match operator output {op.rows}"
        )
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if not np.all(np.isfinite(pts)):
        raise ValueError("points contain non-finite values")
    z = op.apply(pts) + tau.entries
    packed = np.packbits(z >= 0, axis=1, bitorder="little")
    return [BinaryCode(row, op.rows) for row in packed]


def hamming(a, b):
    """Hamming distance between two codes of equal length.

    Pad bits are zero by the code invariant, so the XOR popcount over
    packed bytes already counts exactly the m significant bits.
    """
    if a.m != b.m:
        raise ValueError(f"code lengths differ: {a.m} vs {b.m}")
    return int(np.bitwise_count(a.bits ^ b.bits).sum())


@dataclass
class EmbeddingPlan:
    """Planned embedding parameters for a target additive error."""

    delta: float
    R: float
    theta: float
    lam: float
    k: int
    m: int
    kappa: float = KAPPA
    constants: dict = field(default_factory=lambda: dict(DEFAULT_CONSTANTS))

    def to_dict(self):
        return {
            "delta": self.delta,
            "R": self.R,
            "theta": self.theta,
            "lambda": self.lam,
            "k": self.k,
            "m": self.m,
            "kappa": self.kappa,
            "constants": dict(self.constants),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            delta=float(d["delta"]),
            R=float(d["R"]),
            theta=float(d["theta"]),
            lam=float(d["lambda"]),
            k=int(d["k"]),
            m=int(d["m"]),
            kappa=float(d.get("kappa", KAPPA)),
            constants=dict(d.get("constants", DEFAULT_CONSTANTS)),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def estimate_distance(a, b, plan):
    """Distance estimate (2 * lambda * kappa / m) * d_H(a, b).

    The code length is used as m, so selector-mode operators (whose
    realized row count fluctuates around the planned m) are normalized
    by the rows they actually produced.
    """
    d_h = hamming(a, b)
    return 2.0 * plan.lam * plan.kappa / a.m * d_h


def dither_scale_and_net_scale(R, delta, constants=None):
    """The (lambda, theta) pair the planner derives before sizing m."""
    c = dict(DEFAULT_CONSTANTS)
    if constants:
        c.update(constants)
    if delta <= 0 or delta > R / 2:
        raise ValueError(
            f"requires 0 < delta <= R/2, got delta={delta}, R={R}"
        )
    lam = c["c1"] * R * math.sqrt(max(math.log(R / delta), 1.0))
    theta = delta / (c["c0"] * math.sqrt(math.log(math.e * lam / delta)))
    return lam, theta


def plan_parameters(R, delta, net_size, local_width_sq, constants=None, kappa=KAPPA):
    """Size the embedding for additive error delta on a set of radius R.

    net_size is log N(T, theta) and local_width_sq the squared width of
    the localized difference set, both measured by the complexity
    module.  Computes lambda and theta first (theta depends only on
    lambda, so a single pass suffices), then the minimal m with

        m >= c3 * (lambda^2 * net_size / delta^2
                   + lambda * local_width_sq / delta^3)

    and k = floor(delta * m / lambda).
    """
    c = dict(DEFAULT_CONSTANTS)
    if constants:
        c.update(constants)
    if net_size < 0 or local_width_sq < 0:
        raise ValueError("net_size and local_width_sq must be nonnegative")
    lam, theta = dither_scale_and_net_scale(R, delta, c)
    m = math.ceil(
        c["c3"] * (lam**2 * net_size / delta**2 + lam * local_width_sq / delta**3)
    )
    k = math.floor(delta * m / lam) if m > 0 else 0
    if k < 1:
        raise PlanInfeasibleError(
            f"plan infeasible: k = floor(delta*m/lambda) = {k} with m={m}; "
            "increase m (larger c3, a richer net, or a wider localized set)"
        )
    return EmbeddingPlan(
        delta=float(delta),
        R=float(R),
        theta=float(theta),
        lam=float(lam),
        k=int(k),
        m=int(m),
        kappa=float(kappa),
        constants=c,
    )
