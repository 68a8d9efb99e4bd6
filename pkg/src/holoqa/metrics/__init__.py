"""Full-reference quality metric suite and registry.

Registry ids (used in reports and on the CLI): mse, nmse, psnr, ssrm,
ssrmt, ssim, iwssim, msssim, uqi, gmsd, fsim, nlpd, vifp, plus the
complex-capable variants mse_C, nmse_C, psnr_C, ssrm_C, ssrmt_C.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnknownMetric
from ..field import QuantizedField
from .gradient import fsim, gmsd, gmsd_map
from .params import DEFAULT_PARAMS, MetricParams, MetricScore, ScoreMode
from .pointwise import mse, nmse, psnr
from .pyramid import nlpd
from .spectral import ssrm, ssrmt
from .ssim import iw_ssim, ms_ssim, ssim, ssim_map, uqi
from .vif import vifp

# real-valued metrics, in the paper's Table-1 order
REAL_METRICS = {
    "mse": mse,
    "nmse": nmse,
    "psnr": psnr,
    "ssrm": ssrm,
    "ssrmt": ssrmt,
    "ssim": ssim,
    "iwssim": iw_ssim,
    "msssim": ms_ssim,
    "uqi": uqi,
    "gmsd": gmsd,
    "fsim": fsim,
    "nlpd": nlpd,
    "vifp": vifp,
}

# metrics that can consume complex wavefields directly
COMPLEX_CAPABLE = ("mse", "nmse", "psnr", "ssrm", "ssrmt")
COMPLEX_METRICS = tuple(f"{mid}_C" for mid in COMPLEX_CAPABLE)

ALL_METRIC_IDS = tuple(REAL_METRICS) + COMPLEX_METRICS

# distance-type metrics: lower is better, 0 is perfect
DISTANCE_METRICS = frozenset(
    {"mse", "nmse", "gmsd", "nlpd", "mse_C", "nmse_C"}
)

# metrics that can emit a per-pixel quality map
MAP_METRICS = {"ssim": ssim_map, "gmsd": gmsd_map}


def is_distance(metric_id: str) -> bool:
    return metric_id in DISTANCE_METRICS


def perfect_value(metric_id: str) -> float:
    """Score obtained on identical inputs."""
    base = metric_id[:-2] if metric_id.endswith("_C") else metric_id
    if base in ("mse", "nmse", "gmsd", "nlpd"):
        return 0.0
    if base == "psnr":
        return float("inf")
    return 1.0


def evaluate_real(metric_id: str, ref, dist,
                  params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """Run a real-valued metric on a pair of real 2D grids."""
    try:
        fn = REAL_METRICS[metric_id]
    except KeyError:
        raise UnknownMetric(
            f"unknown metric {metric_id!r}; known: {', '.join(ALL_METRIC_IDS)}"
        ) from None
    return fn(ref, dist, params)


def evaluate_complex(metric_id: str, ref, dist,
                     params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """Run a complex-capable metric (id with "_C" suffix) on complex grids."""
    if metric_id not in COMPLEX_METRICS:
        raise UnknownMetric(
            f"{metric_id!r} is not a complex-mode metric; known: "
            f"{', '.join(COMPLEX_METRICS)}"
        )
    base = REAL_METRICS[metric_id[:-2]]
    ref = np.asarray(ref, dtype=np.complex128)
    dist = np.asarray(dist, dtype=np.complex128)
    return base(ref, dist, params)


def score_components_avg(metric_id: str, ref: QuantizedField, dist: QuantizedField,
                         params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """Apply a real-valued metric to the 8-bit real planes and the 8-bit
    imaginary planes separately and return the arithmetic mean."""
    re_score = evaluate_real(
        metric_id, ref.real_plane.astype(np.float64), dist.real_plane.astype(np.float64), params
    )
    im_score = evaluate_real(
        metric_id, ref.imag_plane.astype(np.float64), dist.imag_plane.astype(np.float64), params
    )
    return MetricScore(metric_id, ScoreMode.REAL_AVG,
                       0.5 * (re_score.value + im_score.value))
