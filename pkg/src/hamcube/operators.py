"""Measurement operators: double circulant and dense Gaussian.

The double circulant operator acts on x in R^n as

    A x = (1/sqrt(n)) * R_I ( g * (s_mid o (s_conv * (s_in o x))) )

where ``*`` is circular convolution, ``o`` is entrywise product, ``g``
is a standard Gaussian vector, the ``s`` vectors hold independent
uniform signs, and ``R_I`` keeps the rows listed in the index set I.
One application costs two forward and two inverse FFTs against cached
kernel spectra, and the stored state is a handful of length-n vectors.

Two scaled views are provided: ``apply_scaled`` (the 1/sqrt(m*n)
normalization used for restricted isometry statements, input already
sign-flipped) and ``apply_l1`` (the (1/m)*sqrt(pi/2) normalization whose
image l1 norm estimates the input l2 norm).
"""

import struct
from dataclasses import dataclass

import numpy as np

_MAGIC = b"HCOP"
_VERSION = 1
_MODE_CODES = {"fixed": 0, "selectors": 1}
_MODE_NAMES = {v: k for k, v in _MODE_CODES.items()}

# Tags for deriving independent per-component RNG substreams from one seed.
_TAG_GAUSS = 0
_TAG_SIGN_IN = 1
_TAG_SIGN_CONV = 2
_TAG_SIGN_MID = 3
_TAG_INDEX = 4

MATERIALIZE_LIMIT = 4096


def component_rng(seed, tag):
    """Deterministic generator for one random component of an operator."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(tag,)))


def _check_dims(n, m):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= m <= n:
        raise ValueError(f"m must satisfy 1 <= m <= n, got m={m}, n={n}")


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return seed


def _random_signs(rng, n):
    return rng.choice(np.array([-1.0, 1.0]), size=n)


@dataclass
class IndexSet:
    """Selected rows of the length-n convolution output.

    mode is "fixed" (exactly m rows, defaulting to the first m) or
    "selectors" (every row kept independently with probability m/n, so
    the realized count fluctuates around m).
    """

    mode: str
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError("index set must be a non-empty 1-d array")
        if np.unique(idx).size != idx.size:
            raise ValueError("index set contains duplicates")
        self.indices = np.sort(idx)

    @property
    def count(self):
        return int(self.indices.size)


def _build_index_set(n, m, mode, seed, explicit):
    if explicit is not None:
        if mode != "fixed":
            raise ValueError("explicit indices require fixed mode")
        idx = np.asarray(explicit, dtype=np.int64)
        if idx.size != m:
            raise ValueError(f"expected {m} indices, got {idx.size}")
        if idx.min() < 0 or idx.max() >= n:
            raise ValueError("indices out of range")
        return IndexSet("fixed", idx), True
    if mode == "fixed":
        return IndexSet("fixed", np.arange(m, dtype=np.int64)), False
    if mode == "selectors":
        rng = component_rng(seed, _TAG_INDEX)
        keep = rng.random(n) < (m / n)
        idx = np.nonzero(keep)[0]
        if idx.size == 0:
            raise RuntimeError(
                "selector draw kept no rows; use a different seed or larger m"
            )
        return IndexSet("selectors", idx), False
    raise ValueError(f"unknown index mode {mode!r}")


class DoubleCirculantOperator:
    """Seeded double circulant map from R^n to R^|I|."""

    def __init__(self, n, m, mode="fixed", seed=0, indices=None):
        _check_dims(n, m)
        self.n = int(n)
        self.m = int(m)
        self.seed = _check_seed(seed)
        self.index_set, self._custom_indices = _build_index_set(
            self.n, self.m, mode, self.seed, indices
        )
        self.gauss = component_rng(self.seed, _TAG_GAUSS).standard_normal(self.n)
        self.sign_in = _random_signs(component_rng(self.seed, _TAG_SIGN_IN), self.n)
        self.conv_signs = _random_signs(
            component_rng(self.seed, _TAG_SIGN_CONV), self.n
        )
        self.sign_mid = _random_signs(component_rng(self.seed, _TAG_SIGN_MID), self.n)
        self._spec_gauss = np.fft.fft(self.gauss)
        self._spec_conv = np.fft.fft(self.conv_signs)

    @property
    def mode(self):
        return self.index_set.mode

    @property
    def rows(self):
        """Realized output dimension |I|."""
        return self.index_set.count

    def _check_input(self, x):
        a = np.asarray(x, dtype=np.float64)
        if a.ndim < 1 or a.shape[-1] != self.n:
            raise ValueError(
                f"input has trailing dimension {a.shape[-1] if a.ndim else 0}, "
                f"operator expects {self.n}"
            )
        return a

    def _pipeline(self, v):
        # R_I ( g * (s_mid o (s_conv * v)) ), unnormalized; batched on the
        # last axis.
        t = np.fft.ifft(np.fft.fft(v, axis=-1) * self._spec_conv, axis=-1).real
        t = np.fft.ifft(np.fft.fft(self.sign_mid * t, axis=-1) * self._spec_gauss, axis=-1).real
        return t[..., self.index_set.indices]

    def apply(self, x):
        """A x for a vector of length n, or row-wise for a batch (k, n)."""
        a = self._check_input(x)
        return self._pipeline(self.sign_in * a) / np.sqrt(self.n)

    def apply_scaled(self, y):
        """B y where B = (1/sqrt(m*n)) R_I Gamma_g D_mid Gamma_conv.

        The input is expected already multiplied by the input signs, so
        A x = sqrt(m) * B (s_in o x) exactly, with m the realized row
        count.
        """
        a = self._check_input(y)
        return self._pipeline(a) / np.sqrt(self.rows * self.n)

    def apply_l1(self, x):
        """C x = (1/m) sqrt(pi/2) A x, the l2 -> l1 embedding view."""
        return np.sqrt(np.pi / 2.0) / self.rows * self.apply(x)

    def materialize(self, force=False):
        """Dense |I| x n matrix equal to the operator action.

        Guarded to n <= 4096; pass force=True for larger n at your own
        memory cost.
        """
        if self.n > MATERIALIZE_LIMIT and not force:
            raise ValueError(
                f"materialize is guarded to n <= {MATERIALIZE_LIMIT} "
                f"(n={self.n}); pass force=True to override"
            )
        return self.apply(np.eye(self.n)).T

    def save(self, path):
        """Write the operator header; state is re-derived from the seed."""
        if self._custom_indices:
            raise ValueError(
                "operators with caller-supplied index lists cannot be saved; "
                "the file format only records (n, m, mode, seed)"
            )
        header = struct.pack(
            "<4sIIIBQ",
            _MAGIC,
            _VERSION,
            self.n,
            self.m,
            _MODE_CODES[self.mode],
            self.seed,
        )
        with open(path, "wb") as fh:
            fh.write(header)


def build_double_circulant(n, m, mode="fixed", seed=0, indices=None):
    return DoubleCirculantOperator(n, m, mode=mode, seed=seed, indices=indices)


def load_operator(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    size = struct.calcsize("<4sIIIBQ")
    if len(raw) < size:
        raise ValueError(f"operator file truncated: {len(raw)} bytes, need {size}")
    magic, version, n, m, mode_code, seed = struct.unpack("<4sIIIBQ", raw[:size])
    if magic != _MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {_MAGIC!r}")
    if version != _VERSION:
        raise ValueError(f"unsupported operator file version {version}")
    if mode_code not in _MODE_NAMES:
        raise ValueError(f"unknown mode code {mode_code}")
    return DoubleCirculantOperator(n, m, mode=_MODE_NAMES[mode_code], seed=seed)


class GaussianDenseOperator:
    """Dense i.i.d. standard Gaussian m x n matrix, the reference map."""

    def __init__(self, n, m, seed=0):
        if n < 1 or m < 1:
            raise ValueError(f"n and m must be >= 1, got n={n}, m={m}")
        self.n = int(n)
        self.m = int(m)
        self.seed = _check_seed(seed)
        rng = component_rng(self.seed, _TAG_GAUSS)
        self.entries = rng.standard_normal((self.m, self.n))

    @property
    def rows(self):
        return self.m

    def apply(self, x):
        a = np.asarray(x, dtype=np.float64)
        if a.ndim < 1 or a.shape[-1] != self.n:
            raise ValueError(
                f"input has trailing dimension {a.shape[-1] if a.ndim else 0}, "
                f"operator expects {self.n}"
            )
        return a @ self.entries.T

    def apply_scaled(self, y):
        return self.apply(y) / np.sqrt(self.m)

    def apply_l1(self, x):
        return np.sqrt(np.pi / 2.0) / self.m * self.apply(x)


def build_gaussian(n, m, seed=0):
    return GaussianDenseOperator(n, m, seed=seed)


def apply_gaussian(op, x):
    return op.apply(x)
