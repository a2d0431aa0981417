"""Finite-length discrete signal primitives.

Everything here lives on C^L with circular (periodic) boundary handling. The
DFT is the engineering convention: forward unnormalized, inverse carrying the
1/L factor, bin j holding the transfer value at e^(2*pi*i*j/L).
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ShapeError

__all__ = ["dft", "idft", "downsample", "upsample", "circular_convolve"]


def _as_signal(x) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] < 1:
        raise ShapeError("expected a non-empty 1-D sample array")
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    return x


def dft(x) -> np.ndarray:
    """Unnormalized forward DFT, X[j] = sum_n x[n] e^(-2*pi*i*j*n/L)."""
    return np.fft.fft(_as_signal(x))


def idft(X) -> np.ndarray:
    """Inverse DFT with the 1/L factor; idft(dft(x)) == x."""
    return np.fft.ifft(_as_signal(X))


def downsample(x, d: int) -> np.ndarray:
    """Keep every d-th sample, x[d*n]. Requires d to divide the length."""
    x = _as_signal(x)
    d = int(d)
    if d < 1:
        raise DomainError("downsampling factor must be >= 1")
    if x.shape[0] % d != 0:
        raise ShapeError(f"factor {d} does not divide length {x.shape[0]}")
    return x[::d].copy()


def upsample(x, d: int) -> np.ndarray:
    """Insert d-1 zeros after each sample; output length L*d."""
    x = _as_signal(x)
    d = int(d)
    if d < 1:
        raise DomainError("upsampling factor must be >= 1")
    out = np.zeros(x.shape[0] * d, dtype=np.complex128 if np.iscomplexobj(x) else np.float64)
    out[::d] = x
    return out


def circular_convolve(x, h) -> np.ndarray:
    """Circular convolution of equal-length signals via the spectral product."""
    x = _as_signal(x)
    h = _as_signal(h)
    if x.shape[0] != h.shape[0]:
        raise ShapeError(f"length mismatch: {x.shape[0]} vs {h.shape[0]}")
    return np.fft.ifft(np.fft.fft(x) * np.fft.fft(h))
