"""Tests for the full-reference metric suite."""

import numpy as np
import pytest

from holoqa.errors import (
    DegenerateReference,
    DimMismatch,
    InputTooSmall,
    UnknownMetric,
)
from holoqa.metrics import (
    ALL_METRIC_IDS,
    COMPLEX_METRICS,
    DISTANCE_METRICS,
    REAL_METRICS,
    MetricParams,
    evaluate_complex,
    evaluate_real,
    is_distance,
    perfect_value,
    score_components_avg,
)
from holoqa.metrics.gradient import fsim, gmsd, gmsd_map, phase_congruency
from holoqa.metrics.pointwise import mse, nmse, psnr
from holoqa.metrics.pyramid import nlpd
from holoqa.metrics.spectral import ssrm, ssrmt
from holoqa.metrics.ssim import iw_ssim, ms_ssim, ssim, ssim_map, uqi
from holoqa.metrics.vif import vifp


@pytest.fixture(scope="module")
def image():
    rng = np.random.default_rng(0)
    yy, xx = np.mgrid[0:200, 0:200]
    base = 90 + 60 * np.sin(xx / 7.0) * np.cos(yy / 9.0) + rng.normal(0, 12, (200, 200))
    return np.clip(np.round(base), 0, 255).astype(np.float64)


@pytest.fixture(scope="module")
def noisy_versions(image):
    rng = np.random.default_rng(1)
    out = []
    for sigma in (2.0, 6.0, 18.0):
        noisy = image + rng.normal(0, sigma, image.shape)
        out.append(np.clip(np.round(noisy), 0, 255).astype(np.float64))
    return out


class TestRegistry:
    def test_registry_counts(self):
        assert len(REAL_METRICS) == 13
        assert len(COMPLEX_METRICS) == 5
        assert len(ALL_METRIC_IDS) == 18

    def test_unknown_metric_rejected(self, image):
        with pytest.raises(UnknownMetric):
            evaluate_real("nope", image, image)
        with pytest.raises(UnknownMetric):
            evaluate_complex("ssim_C", image + 0j, image + 0j)

    def test_distance_classification(self):
        for mid in ("mse", "nmse", "gmsd", "nlpd", "mse_C", "nmse_C"):
            assert is_distance(mid)
        for mid in ("psnr", "ssim", "fsim", "vifp", "ssrm_C"):
            assert not is_distance(mid)


class TestIdentity:
    def test_all_real_metrics_perfect_on_identity(self, image):
        for mid in REAL_METRICS:
            value = evaluate_real(mid, image, image.copy()).value
            assert value == perfect_value(mid), mid

    def test_all_complex_metrics_perfect_on_identity(self):
        rng = np.random.default_rng(2)
        fld = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
        for mid in COMPLEX_METRICS:
            value = evaluate_complex(mid, fld, fld.copy()).value
            assert value == perfect_value(mid), mid


class TestPointwise:
    def test_mse_known_value(self):
        a = np.zeros((4, 4))
        b = np.full((4, 4), 3.0)
        assert mse(a, b).value == 9.0

    def test_nmse_normalization(self):
        a = np.full((4, 4), 2.0)
        b = np.full((4, 4), 3.0)
        assert nmse(a, b).value == pytest.approx(0.25)

    def test_nmse_zero_reference(self):
        with pytest.raises(DegenerateReference):
            nmse(np.zeros((4, 4)), np.ones((4, 4)))

    def test_psnr_known_value(self):
        a = np.zeros((8, 8))
        b = np.full((8, 8), 255.0)
        assert psnr(a, b).value == pytest.approx(0.0)

    def test_complex_mse_is_sum_of_components(self):
        rng = np.random.default_rng(3)
        re_r, im_r = rng.normal(size=(2, 32, 32))
        re_d, im_d = rng.normal(size=(2, 32, 32))
        combined = mse(re_r + 1j * im_r, re_d + 1j * im_d).value
        parts = mse(re_r, re_d).value + mse(im_r, im_d).value
        assert combined == pytest.approx(parts, rel=1e-12)

    def test_component_average_is_half_complex_mse(self):
        # averaging the per-plane MSEs halves the complex-field MSE; the two
        # conventions are proportional, never equal, for nonzero error
        rng = np.random.default_rng(4)
        re_r, im_r = rng.normal(size=(2, 32, 32))
        re_d, im_d = rng.normal(size=(2, 32, 32))
        avg = 0.5 * (mse(re_r, re_d).value + mse(im_r, im_d).value)
        combined = mse(re_r + 1j * im_r, re_d + 1j * im_d).value
        assert avg == pytest.approx(combined / 2.0, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(DimMismatch):
            mse(np.ones((4, 4)), np.ones((4, 5)))


class TestSpectral:
    def test_scale_invariance_of_rankings(self, image):
        # positive rescaling preserves magnitude rankings, so a uniformly
        # brightened copy still scores 1 on the AC ranking part
        scaled = image * 2.0
        assert ssrmt(image, scaled).value == pytest.approx(1.0, abs=1e-12)

    def test_range_and_degradation(self, image, noisy_versions):
        prev = 1.0
        for noisy in noisy_versions:
            for fn in (ssrm, ssrmt):
                v = fn(image, noisy).value
                assert 0.0 <= v <= 1.0
        v_small = ssrmt(image, noisy_versions[0]).value
        v_large = ssrmt(image, noisy_versions[2]).value
        assert v_small > v_large

    def test_dc_handling_differs(self, image):
        # a DC shift changes the separately scored SSRM DC term but leaves
        # the AC magnitudes untouched
        shifted = image + 30.0
        s = ssrm(image, shifted).value
        st = ssrmt(image, shifted).value
        assert s < 1.0
        assert s != st

    def test_zero_reference(self):
        with pytest.raises(DegenerateReference):
            ssrm(np.zeros((8, 8)), np.ones((8, 8)))


class TestSsimFamily:
    def test_ssim_range_and_degradation(self, image, noisy_versions):
        values = [ssim(image, n).value for n in noisy_versions]
        assert all(-1.0 <= v <= 1.0 for v in values)
        assert values[0] > values[1] > values[2]

    def test_ssim_map_shape_is_valid_window(self, image):
        qmap = ssim_map(image, image)
        assert qmap.shape == (190, 190)

    def test_ssim_symmetric(self, image, noisy_versions):
        a = ssim(image, noisy_versions[1]).value
        b = ssim(noisy_versions[1], image).value
        assert a == pytest.approx(b, rel=1e-12)

    def test_msssim_single_scale_equals_ssim(self, image, noisy_versions):
        params = MetricParams(msssim_scales=1, msssim_weights=(1.0,))
        for n in noisy_versions:
            assert ms_ssim(image, n, params).value == pytest.approx(
                ssim(image, n).value, rel=1e-12
            )

    def test_msssim_degrades(self, image, noisy_versions):
        v = [ms_ssim(image, n).value for n in noisy_versions]
        assert v[0] > v[1] > v[2]

    def test_iwssim_degrades(self, image, noisy_versions):
        v = [iw_ssim(image, n).value for n in noisy_versions]
        assert v[0] > v[1] > v[2]

    def test_uqi_sensitive_to_gain(self, image):
        # UQI has no stabilizing constants, so a pure contrast gain lowers it
        v = uqi(image, 0.5 * image).value
        assert v < 1.0

    def test_input_too_small(self):
        with pytest.raises(InputTooSmall):
            ssim(np.ones((8, 8)), np.ones((8, 8)))
        with pytest.raises(InputTooSmall):
            ms_ssim(np.ones((64, 64)), np.ones((64, 64)))


class TestGradient:
    def test_gmsd_invariant_to_luminance_shift(self, image):
        assert gmsd(image, image + 25.0).value == pytest.approx(0.0, abs=1e-12)

    def test_gmsd_increases_with_blur(self, image):
        from scipy.ndimage import gaussian_filter

        light = gaussian_filter(image, 1.0)
        heavy = gaussian_filter(image, 3.0)
        assert gmsd(image, heavy).value > gmsd(image, light).value > 0.0

    def test_gmsd_map_in_unit_range(self, image, noisy_versions):
        qmap = gmsd_map(image, noisy_versions[2])
        assert qmap.min() >= 0.0 and qmap.max() <= 1.0 + 1e-12

    def test_phase_congruency_range(self, image):
        pc = phase_congruency(image)
        assert pc.min() >= 0.0 and pc.max() <= 1.0

    def test_fsim_range_and_degradation(self, image, noisy_versions):
        v = [fsim(image, n).value for n in noisy_versions]
        assert all(0.0 <= x <= 1.0 for x in v)
        assert v[0] > v[2]


class TestPyramidAndVif:
    def test_nlpd_nonnegative_and_degrades(self, image, noisy_versions):
        v = [nlpd(image, n).value for n in noisy_versions]
        assert all(x >= 0.0 for x in v)
        assert v[0] < v[2]

    def test_vifp_degrades_with_noise(self, image, noisy_versions):
        v = [vifp(image, n).value for n in noisy_versions]
        assert all(0.0 <= x <= 1.1 for x in v)
        assert v[0] > v[1] > v[2]

    def test_vifp_constant_reference(self):
        with pytest.raises(DegenerateReference):
            vifp(np.full((64, 64), 5.0), np.full((64, 64), 7.0))


class TestComponentAveraging:
    def test_averages_plane_scores(self):
        from holoqa.field import HologramForm, WaveField, quantize_components

        rng = np.random.default_rng(5)
        data = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
        f = WaveField(data, 8e-6, 640e-9, HologramForm.FOURIER)
        ref_q = quantize_components(f)
        dist_q = quantize_components(
            WaveField(data + 0.05 * (rng.normal(size=(64, 64))
                                     + 1j * rng.normal(size=(64, 64))),
                      8e-6, 640e-9, HologramForm.FOURIER)
        )
        score = score_components_avg("mse", ref_q, dist_q)
        re_v = evaluate_real("mse", ref_q.real_plane.astype(float),
                             dist_q.real_plane.astype(float)).value
        im_v = evaluate_real("mse", ref_q.imag_plane.astype(float),
                             dist_q.imag_plane.astype(float)).value
        assert score.value == pytest.approx(0.5 * (re_v + im_v), rel=1e-12)
