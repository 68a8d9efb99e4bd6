"""Normalized Laplacian pyramid distance (NLPD)."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import correlate

from ..errors import DimMismatch
from .params import DEFAULT_PARAMS, MetricParams, MetricScore, ScoreMode

_BINOMIAL = np.outer([1.0, 4.0, 6.0, 4.0, 1.0], [1.0, 4.0, 6.0, 4.0, 1.0]) / 256.0

# divisive-normalization stabilizers per band (finest..lowpass), for input
# scaled to [0, 1]
_SIGMAS = (0.0248, 0.0185, 0.0179, 0.0191, 0.0220, 0.2782)
_DN_WIN = np.full((3, 3), 1.0 / 9.0)
_DN_WIN[1, 1] = 0.0


def _blur(img: np.ndarray) -> np.ndarray:
    return correlate(img, _BINOMIAL, mode="reflect")


def _upsample(img: np.ndarray, shape) -> np.ndarray:
    up = np.zeros(shape)
    up[0::2, 0::2] = img
    return correlate(up, 4.0 * _BINOMIAL, mode="reflect")


def _normalized_pyramid(img: np.ndarray, levels: int):
    """Laplacian pyramid whose bands are divisively normalized by a local
    average of their own magnitude plus a per-band stabilizer."""
    bands = []
    current = img
    for _ in range(levels - 1):
        low = _blur(current)[0::2, 0::2]
        bands.append(current - _upsample(low, current.shape))
        current = low
    bands.append(current)

    out = []
    for i, band in enumerate(bands):
        sigma = _SIGMAS[i] if i < levels - 1 else _SIGMAS[-1]
        local_amp = correlate(np.abs(band), _DN_WIN, mode="reflect")
        out.append(band / (sigma + local_amp))
    return out


def nlpd(ref, dist, params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """Mean over pyramid levels of the RMS difference between the normalized
    bands; 0 is perfect. Inputs are scaled by the dynamic range first."""
    ref = np.asarray(ref, dtype=np.float64)
    dist = np.asarray(dist, dtype=np.float64)
    if ref.shape != dist.shape:
        raise DimMismatch(f"shape mismatch: {ref.shape} vs {dist.shape}")
    scale = params.dynamic_range
    pyr_r = _normalized_pyramid(ref / scale, params.nlpd_levels)
    pyr_d = _normalized_pyramid(dist / scale, params.nlpd_levels)
    dists = [np.sqrt(np.mean((a - b) ** 2)) for a, b in zip(pyr_r, pyr_d)]
    return MetricScore("nlpd", ScoreMode.REAL, float(np.mean(dists)))
