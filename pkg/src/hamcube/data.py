"""Point-set generation and artifact persistence.

Binary layouts are little-endian with a four-byte magic and a u32
version so older tools fail loudly instead of misreading.  Points are
stored row-major, which lets a streaming consumer embed one point at a
time without loading the whole file.  All writers go through a
temp-file rename, so readers never observe a half-written artifact.
"""

import json
import os
import struct
import tempfile
from dataclasses import dataclass

import numpy as np

from .complexity import PointSet
from .quantize import BinaryCode
from .verify import VerificationReport

_POINTS_MAGIC = b"HCPS"
_CODES_MAGIC = b"HCBC"
_FORMAT_VERSION = 1
_TAG_GENERATE = 23

GENERATOR_KINDS = ("sphere", "sparse", "subspace", "clusters", "grid")


@dataclass
class GeneratorSpec:
    """Recipe for a synthetic point set.

    kind-specific fields: r (sparse), d (subspace), clusters and spread
    (clusters).  Everything is checked up front so generate() cannot
    half-succeed.
    """

    kind: str
    count: int
    n: int
    seed: int = 0
    r: int = None
    d: int = None
    clusters: int = None
    spread: float = 0.1

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.count < 1 or self.n < 1:
            raise ValueError("count and n must be positive")
        if self.kind == "sparse":
            if self.r is None or not 1 <= self.r <= self.n:
                raise ValueError("sparse generator needs 1 <= r <= n")
        if self.kind == "subspace":
            if self.d is None or not 1 <= self.d <= self.n:
                raise ValueError("subspace generator needs 1 <= d <= n")
        if self.kind == "clusters":
            if self.clusters is None or self.clusters < 1:
                raise ValueError("clusters generator needs clusters >= 1")
            if self.spread < 0:
                raise ValueError("spread must be nonnegative")


def _spec_rng(spec):
    ss = np.random.SeedSequence(entropy=spec.seed, spawn_key=(_TAG_GENERATE,))
    return np.random.default_rng(ss)


def generate(spec):
    """Deterministic point set for a GeneratorSpec."""
    rng = _spec_rng(spec)
    count, n = spec.count, spec.n
    if spec.kind == "sphere":
        pts = rng.standard_normal((count, n))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    elif spec.kind == "sparse":
        pts = np.zeros((count, n))
        for i in range(count):
            support = rng.choice(n, size=spec.r, replace=False)
            vals = rng.standard_normal(spec.r)
            pts[i, support] = vals / np.linalg.norm(vals)
    elif spec.kind == "subspace":
        basis, _ = np.linalg.qr(rng.standard_normal((n, spec.d)))
        coeff = rng.standard_normal((count, spec.d))
        pts = coeff @ basis.T
    elif spec.kind == "clusters":
        centers = rng.standard_normal((spec.clusters, n))
        centers /= np.linalg.norm(centers, axis=1, keepdims=True)
        assignment = np.arange(count) % spec.clusters
        offsets = rng.standard_normal((count, n)) * (spec.spread / np.sqrt(n))
        pts = centers[assignment] + offsets
    else:  # grid
        dims = min(2, n)
        side = int(np.ceil(count ** (1.0 / dims)))
        axes = np.linspace(-1.0, 1.0, side) if side > 1 else np.zeros(1)
        pts = np.zeros((count, n))
        for i in range(count):
            for axis in range(dims):
                pts[i, axis] = axes[(i // side**axis) % side]
    return PointSet(pts)


def _atomic_write_bytes(path, payload):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hc-write-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_exact(path):
    with open(path, "rb") as fh:
        return fh.read()


def _check_length(path, blob, expected, what):
    if len(blob) != expected:
        raise ValueError(
            f"{path}: truncated {what}: expected {expected} bytes, got {len(blob)}"
        )


def write_points(path, T):
    """Persist a point set, as CSV when the path ends in .csv."""
    pts = T.points if isinstance(T, PointSet) else PointSet(T).points
    if str(path).endswith(".csv"):
        header = ",".join(f"x{i}" for i in range(pts.shape[1]))
        body = "\n".join(",".join(repr(float(v)) for v in row) for row in pts)
        _atomic_write_bytes(path, (header + "\n" + body + "\n").encode())
        return
    header = struct.pack("<4sIII", _POINTS_MAGIC, _FORMAT_VERSION,
                         pts.shape[1], pts.shape[0])
    _atomic_write_bytes(path, header + pts.astype("<f8").tobytes(order="C"))


def read_points(path):
    if str(path).endswith(".csv"):
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return PointSet(rows)
    blob = _read_exact(path)
    head_size = struct.calcsize("<4sIII")
    if len(blob) < head_size:
        raise ValueError(f"{path}: too short for a point-set header")
    magic, version, n, count = struct.unpack_from("<4sIII", blob)
    if magic != _POINTS_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {_POINTS_MAGIC!r}")
    if version != _FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported point-set version {version}")
    _check_length(path, blob, head_size + 8 * n * count, "point payload")
    pts = np.frombuffer(blob, dtype="<f8", offset=head_size).reshape(count, n)
    return PointSet(pts.astype(np.float64))


def write_codes(path, codes):
    """Persist binary codes; all codes must share one length."""
    codes = list(codes)
    if not codes:
        raise ValueError("refusing to write an empty code file")
    m = codes[0].m
    if any(c.m != m for c in codes):
        raise ValueError("codes must all have the same length")
    header = struct.pack("<4sIII", _CODES_MAGIC, _FORMAT_VERSION, m, len(codes))
    _atomic_write_bytes(path, header + b"".join(c.bits.tobytes() for c in codes))


def read_codes(path):
    blob = _read_exact(path)
    head_size = struct.calcsize("<4sIII")
    if len(blob) < head_size:
        raise ValueError(f"{path}: too short for a code header")
    magic, version, m, count = struct.unpack_from("<4sIII", blob)
    if magic != _CODES_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {_CODES_MAGIC!r}")
    if version != _FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported code version {version}")
    stride = (m + 7) // 8
    _check_length(path, blob, head_size + stride * count, "code payload")
    out = []
    for i in range(count):
        start = head_size + i * stride
        bits = np.frombuffer(blob, dtype=np.uint8, count=stride, offset=start)
        out.append(BinaryCode(bits.copy(), m))
    return out


def report_to_json(report):
    """Compact JSON with a stable key order, for diffable artifacts."""
    return json.dumps(report.to_dict(), separators=(",", ":"))


def write_report(path, report):
    _atomic_write_bytes(path, (report_to_json(report) + "\n").encode())


def read_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return VerificationReport.from_dict(json.load(fh))


def report_schema():
    import importlib.resources

    text = (
        importlib.resources.files("hamcube")
        .joinpath("report_schema.json")
        .read_text(encoding="utf-8")
    )
    return json.loads(text)
