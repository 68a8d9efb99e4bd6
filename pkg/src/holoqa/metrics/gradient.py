"""Gradient- and phase-congruency-based metrics: GMSD and FSIM."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import correlate

from ..errors import DimMismatch
from .params import DEFAULT_PARAMS, MetricParams, MetricScore, ScoreMode

_PREWITT_X = np.array([[1.0, 0.0, -1.0]] * 3) / 3.0
_SCHARR_X = np.array([[3.0, 0.0, -3.0],
                      [10.0, 0.0, -10.0],
                      [3.0, 0.0, -3.0]]) / 16.0


def _check_pair(ref, dist):
    ref = np.asarray(ref, dtype=np.float64)
    dist = np.asarray(dist, dtype=np.float64)
    if ref.shape != dist.shape:
        raise DimMismatch(f"shape mismatch: {ref.shape} vs {dist.shape}")
    return ref, dist


def _gradient_magnitude(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    gx = correlate(img, kernel, mode="reflect")
    gy = correlate(img, kernel.T, mode="reflect")
    return np.sqrt(gx * gx + gy * gy)


def gmsd_map(ref, dist, params: MetricParams = DEFAULT_PARAMS) -> np.ndarray:
    """Gradient-magnitude similarity map (Prewitt gradients, constant T)."""
    ref, dist = _check_pair(ref, dist)
    g_r = _gradient_magnitude(ref, _PREWITT_X)
    g_d = _gradient_magnitude(dist, _PREWITT_X)
    t = params.gmsd_t
    return (2.0 * g_r * g_d + t) / (g_r * g_r + g_d * g_d + t)


def gmsd(ref, dist, params: MetricParams = DEFAULT_PARAMS,
         emit_map: bool = False) -> MetricScore:
    """Population standard deviation of the similarity map; 0 is perfect."""
    qmap = gmsd_map(ref, dist, params)
    return MetricScore("gmsd", ScoreMode.REAL, float(qmap.std()),
                       qmap if emit_map else None)


# ---------------------------------------------------------------------------
# phase congruency via a log-Gabor filter bank

_PC_SCALES = 4
_PC_ORIENTS = 4
_PC_MIN_WAVELENGTH = 6.0
_PC_MULT = 2.0
_PC_SIGMA_ONF = 0.55
_PC_DTHETA_ON_SIGMA = 1.2
_PC_EPS = 1e-4


def _log_gabor_bank(rows: int, cols: int):
    fy = np.fft.fftfreq(rows)[:, None]
    fx = np.fft.fftfreq(cols)[None, :]
    radius = np.sqrt(fx * fx + fy * fy)
    radius[0, 0] = 1.0  # avoid log(0); the DC entry is zeroed below
    theta = np.arctan2(-fy, fx)
    sin_t, cos_t = np.sin(theta), np.cos(theta)

    sigma_theta = np.pi / _PC_ORIENTS / _PC_DTHETA_ON_SIGMA
    log_sigma = np.log(_PC_SIGMA_ONF)

    bank = []
    for o in range(_PC_ORIENTS):
        angle = o * np.pi / _PC_ORIENTS
        ds = sin_t * np.cos(angle) - cos_t * np.sin(angle)
        dc = cos_t * np.cos(angle) + sin_t * np.sin(angle)
        dtheta = np.abs(np.arctan2(ds, dc))
        spread = np.exp(-(dtheta * dtheta) / (2.0 * sigma_theta * sigma_theta))
        row = []
        for s in range(_PC_SCALES):
            f0 = 1.0 / (_PC_MIN_WAVELENGTH * _PC_MULT ** s)
            radial = np.exp(-(np.log(radius / f0) ** 2) / (2.0 * log_sigma * log_sigma))
            radial[0, 0] = 0.0
            row.append(radial * spread)
        bank.append(row)
    return bank


def phase_congruency(img: np.ndarray) -> np.ndarray:
    """Phase-congruency map in [0, 1] from a 4-scale, 4-orientation log-Gabor
    bank: per orientation, the magnitude of the summed complex responses over
    the summed response magnitudes, accumulated over orientations."""
    img = np.asarray(img, dtype=np.float64)
    spectrum = np.fft.fft2(img)
    energy = np.zeros(img.shape)
    amp_sum = np.zeros(img.shape)
    for row in _log_gabor_bank(*img.shape):
        sum_re = np.zeros(img.shape)
        sum_im = np.zeros(img.shape)
        for filt in row:
            resp = np.fft.ifft2(spectrum * filt)
            sum_re += resp.real
            sum_im += resp.imag
            amp_sum += np.abs(resp)
        energy += np.sqrt(sum_re * sum_re + sum_im * sum_im)
    return energy / (amp_sum + _PC_EPS)


def fsim(ref, dist, params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """Feature similarity: phase congruency and Scharr gradient similarity,
    pooled with max(PC_ref, PC_dist) weights. Grayscale only (T3 unused)."""
    ref, dist = _check_pair(ref, dist)
    pc_r = phase_congruency(ref)
    pc_d = phase_congruency(dist)
    g_r = _gradient_magnitude(ref, _SCHARR_X)
    g_d = _gradient_magnitude(dist, _SCHARR_X)
    t1, t2 = params.fsim_t1, params.fsim_t2
    s_pc = (2.0 * pc_r * pc_d + t1) / (pc_r * pc_r + pc_d * pc_d + t1)
    s_g = (2.0 * g_r * g_d + t2) / (g_r * g_r + g_d * g_d + t2)
    pcm = np.maximum(pc_r, pc_d)
    weight = pcm.sum()
    if weight == 0.0:
        # featureless pair (constant images): similarity maps are all 1
        value = float((s_pc * s_g).mean())
    else:
        value = float((s_pc * s_g * pcm).sum() / weight)
    return MetricScore("fsim", ScoreMode.REAL, value)
