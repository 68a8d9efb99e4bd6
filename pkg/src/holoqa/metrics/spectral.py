"""Sparseness-significance ranking measures (SSRM / SSRMt).

Both variants transform the pair to the frequency domain, rank coefficient
magnitudes and score the agreement of the two rankings, weighting each
coefficient by its share of the reference magnitude mass (the sparseness
significance). Per-coefficient agreement is 1 - |rank_ref - rank_dist|/(n-1)
with mid-ranks for ties, so the score lies in [0,1] and equals 1 for
identical inputs or any positive rescaling of the reference.

SSRM scores the DC coefficient separately (as the ratio of the smaller to
the larger DC magnitude) and blends it with the AC ranking score by the DC
magnitude share; SSRMt ranks the DC term together with all other
coefficients.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from ..errors import DegenerateReference, DimMismatch
from .params import DEFAULT_PARAMS, MetricParams, MetricScore, ScoreMode


def _spectral_magnitudes(ref, dist):
    ref = np.asarray(ref)
    dist = np.asarray(dist)
    if ref.shape != dist.shape:
        raise DimMismatch(f"shape mismatch: {ref.shape} vs {dist.shape}")
    cplx = np.iscomplexobj(ref) or np.iscomplexobj(dist)
    fr = np.fft.fft2(ref.astype(np.complex128))
    fd = np.fft.fft2(dist.astype(np.complex128))
    return np.abs(fr).ravel(), np.abs(fd).ravel(), cplx


def _rank_agreement(a_ref: np.ndarray, a_dist: np.ndarray) -> float:
    """Significance-weighted rank agreement of two magnitude vectors."""
    total = a_ref.sum()
    if total == 0.0:
        raise DegenerateReference("zero-energy reference spectrum")
    n = a_ref.size
    if n == 1:
        return 1.0
    r_ref = rankdata(-a_ref, method="average")
    r_dist = rankdata(-a_dist, method="average")
    agreement = 1.0 - np.abs(r_ref - r_dist) / (n - 1)
    # normalize the weighted sum by the total mass at the end so identical
    # rankings score exactly 1
    return float(np.sum(a_ref * agreement) / total)


def ssrm(ref, dist, params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """SSRM: DC term scored separately, blended by its magnitude share."""
    a_ref, a_dist, cplx = _spectral_magnitudes(ref, dist)
    dc_ref, dc_dist = a_ref[0], a_dist[0]
    ac_ref, ac_dist = a_ref[1:], a_dist[1:]
    if a_ref.sum() == 0.0:
        raise DegenerateReference("zero-energy reference spectrum")
    if dc_ref == 0.0 and dc_dist == 0.0:
        dc_score = 1.0
    else:
        dc_score = float(min(dc_ref, dc_dist) / max(dc_ref, dc_dist))
    if ac_ref.size == 0 or ac_ref.sum() == 0.0:
        ac_score, alpha = 1.0, 1.0
    else:
        ac_score = _rank_agreement(ac_ref, ac_dist)
        alpha = float(dc_ref / a_ref.sum())
    if dc_score == ac_score:
        value = dc_score
    else:
        value = alpha * dc_score + (1.0 - alpha) * ac_score
    mode = ScoreMode.COMPLEX if cplx else ScoreMode.REAL
    return MetricScore("ssrm_C" if cplx else "ssrm", mode, value)


def ssrmt(ref, dist, params: MetricParams = DEFAULT_PARAMS) -> MetricScore:
    """SSRMt: the DC term is ranked just like any other coefficient."""
    a_ref, a_dist, cplx = _spectral_magnitudes(ref, dist)
    value = _rank_agreement(a_ref, a_dist)
    mode = ScoreMode.COMPLEX if cplx else ScoreMode.REAL
    return MetricScore("ssrmt_C" if cplx else "ssrmt", mode, value)
