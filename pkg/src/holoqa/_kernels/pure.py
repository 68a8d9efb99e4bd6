"""Pure-NumPy/SciPy fallback for the windowed-moment kernels."""

import numpy as np
from scipy.ndimage import uniform_filter


def local_moments(img, window_h, window_w):
    """Local mean and variance over a window_h x window_w sliding window with
    symmetric boundary padding. Returns (mean, var), same shape as img."""
    img = np.asarray(img, dtype=np.float64)
    size = (window_h, window_w)
    mean = uniform_filter(img, size=size, mode="reflect")
    mean_sq = uniform_filter(img * img, size=size, mode="reflect")
    var = np.maximum(mean_sq - mean * mean, 0.0)
    return mean, var
