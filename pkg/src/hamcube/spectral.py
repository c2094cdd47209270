"""Discrete Fourier transforms and circular convolution.

Conventions used throughout the package:

* forward DFT kernel ``exp(-2j*pi*j*k/n)``, unnormalized,
* inverse DFT carries the ``1/n`` factor,
* circular convolution ``(x * y)[j] = sum_k x[k] * y[(j - k) % n]``.

The transforms are backed by ``numpy.fft`` which is exact for every
length, so arbitrary ``n`` is supported; power-of-two lengths are the
fast path used by the operator pipeline.
"""

from typing import NamedTuple

import numpy as np


def _as_vector(x, name="x"):
    a = np.asarray(x)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError(f"{name} must have length >= 1")
    return a


def fft(x):
    """Forward DFT of a real or complex vector, unnormalized."""
    return np.fft.fft(_as_vector(x))


def inverse_fft(x):
    """Inverse DFT, exact inverse of :func:`fft` (includes the 1/n factor)."""
    return np.fft.ifft(_as_vector(x))


def circ_convolve(x, y):
    """Circular convolution of two equal-length real vectors.

    Computed in the Fourier domain: z = ifft(fft(x) * fft(y)).real.
    """
    xa = _as_vector(x, "x")
    ya = _as_vector(y, "y")
    if xa.shape[0] != ya.shape[0]:
        raise ValueError(
            f"length mismatch: x has {xa.shape[0]} entries, y has {ya.shape[0]}"
        )
    if np.iscomplexobj(xa) or np.iscomplexobj(ya):
        raise ValueError("circ_convolve expects real vectors")
    return np.fft.ifft(np.fft.fft(xa) * np.fft.fft(ya)).real


class DiagonalizationResidual(NamedTuple):
    """Residual of the circulant diagonalization identity.

    ``absolute`` is True when the reference vector vanished and the
    residual could not be normalized.
    """

    value: float
    absolute: bool


def _dft_matrix(n):
    # Explicit kernel, independent of the numpy.fft code path.
    jk = np.outer(np.arange(n), np.arange(n))
    return np.exp(-2j * np.pi * jk / n)


def diagonalization_residual(x, g):
    """Check the spectral factorization of circulant action on a vector.

    A circulant built from ``x`` acts on ``g`` as
    ``sqrt(n) * U @ diag(W @ x) @ O @ g`` where ``W = O = F/sqrt(n)`` and
    ``U = conj(F)/sqrt(n)`` for the DFT matrix ``F``.  The identity is
    evaluated by two independent code paths: FFT-based convolution on one
    side, explicit dense ``W``/``U``/``O`` matrices on the other.  Returns
    the relative residual, or the absolute one (flagged) when the
    convolution output is zero.
    """
    xa = _as_vector(x, "x")
    ga = _as_vector(g, "g")
    if xa.shape[0] != ga.shape[0]:
        raise ValueError(
            f"length mismatch: x has {xa.shape[0]} entries, g has {ga.shape[0]}"
        )
    n = xa.shape[0]

    lhs = circ_convolve(xa, ga)

    f = _dft_matrix(n)
    w = f / np.sqrt(n)
    o = w
    u = f.conj() / np.sqrt(n)
    rhs = np.sqrt(n) * (u @ (np.diag(w @ xa) @ (o @ ga)))

    diff = np.linalg.norm(lhs - rhs)
    denom = np.linalg.norm(lhs)
    if denom == 0.0:
        return DiagonalizationResidual(float(diff), True)
    return DiagonalizationResidual(float(diff / denom), False)
