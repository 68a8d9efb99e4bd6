"""Adaptive local Wiener despeckling of reconstructed amplitude views.

The estimate is y = mu + max(var - nv, 0) / var * (x - mu) with mu/var the
local window moments (symmetric boundary padding) and nv the noise variance.
With nv = AUTO the noise variance is the mean of all local variances; the
bench harness resolves AUTO once from the reference reconstruction and
reuses the resolved value for the distorted member of a pair.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._kernels import local_moments
from .errors import InvalidField, WindowTooLarge

AUTO = "auto"


@dataclass(frozen=True)
class WienerParams:
    window_h: int = 5
    window_w: int = 5
    noise_variance: float | str = AUTO

    def __post_init__(self):
        if self.window_h < 3 or self.window_w < 3 or self.window_h % 2 == 0 or self.window_w % 2 == 0:
            raise InvalidField(
                f"window dims must be odd and >= 3, got {self.window_h}x{self.window_w}"
            )
        if self.noise_variance != AUTO and float(self.noise_variance) < 0:
            raise InvalidField("noise_variance must be >= 0 or 'auto'")


def estimate_noise_variance(image: np.ndarray, params: WienerParams) -> float:
    """AUTO rule: mean of the local window variances of the image."""
    image = np.asarray(image, dtype=np.float64)
    _check_window(image, params)
    _, var = local_moments(image, params.window_h, params.window_w)
    return float(var.mean())


def resolve_params(reference: np.ndarray, params: WienerParams) -> WienerParams:
    """Resolve AUTO against the reference image so a stimulus pair shares one
    concrete noise variance."""
    if params.noise_variance != AUTO:
        return params
    return replace(params, noise_variance=estimate_noise_variance(reference, params))


def _check_window(image: np.ndarray, params: WienerParams) -> None:
    if params.window_h > image.shape[0] or params.window_w > image.shape[1]:
        raise WindowTooLarge(
            f"window {params.window_h}x{params.window_w} exceeds image "
            f"{image.shape[0]}x{image.shape[1]}"
        )


def wiener_denoise(image: np.ndarray, params: WienerParams) -> np.ndarray:
    """Pixel-wise adaptive Wiener estimate; output has the input's shape."""
    image = np.asarray(image, dtype=np.float64)
    if not np.all(np.isfinite(image)):
        raise InvalidField("image contains non-finite samples")
    _check_window(image, params)
    if params.noise_variance == AUTO:
        params = resolve_params(image, params)
    nv = float(params.noise_variance)
    if nv == 0.0:
        # zero noise power: the filter is the identity
        return image.copy()

    mean, var = local_moments(image, params.window_h, params.window_w)
    tiny = np.finfo(np.float64).tiny
    gain = np.maximum(var - nv, 0.0) / np.maximum(var, tiny)
    return mean + gain * (image - mean)
