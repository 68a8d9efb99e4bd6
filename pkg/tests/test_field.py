"""Tests for the hologram data model, quantization and file I/O."""

import numpy as np
import pytest

from holoqa.errors import (
    ApertureOutOfBounds,
    CorruptInput,
    InvalidField,
    UnsupportedFormat,
)
from holoqa.field import (
    ApertureLabel,
    ApertureSpec,
    HologramForm,
    WaveField,
    dequantize_components,
    extract_aperture,
    extract_aperture_quantized,
    load_field,
    load_quantized,
    quantize_components,
    store_field,
    store_quantized,
)


def _random_field(rng, rows=32, cols=48, **kw):
    data = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    return WaveField(data, 8e-6, 640e-9, HologramForm.FOURIER, **kw)


class TestWaveField:
    def test_data_is_immutable(self):
        f = _random_field(np.random.default_rng(0))
        with pytest.raises(ValueError):
            f.data[0, 0] = 1.0

    def test_rejects_non_finite(self):
        data = np.ones((4, 4), dtype=complex)
        data[1, 2] = np.nan
        with pytest.raises(InvalidField):
            WaveField(data, 8e-6, 640e-9, HologramForm.FOURIER)

    def test_rejects_bad_optics(self):
        data = np.ones((4, 4), dtype=complex)
        with pytest.raises(InvalidField):
            WaveField(data, 0.0, 640e-9, HologramForm.FOURIER)
        with pytest.raises(InvalidField):
            WaveField(data, 8e-6, -1.0, HologramForm.FOURIER)

    def test_rejects_wrong_rank(self):
        with pytest.raises(InvalidField):
            WaveField(np.ones(5, dtype=complex), 8e-6, 640e-9, HologramForm.FOURIER)


class TestQuantization:
    def test_round_trip_error_bound(self):
        rng = np.random.default_rng(1)
        f = _random_field(rng)
        q = quantize_components(f)
        back = dequantize_components(q)
        err_re = np.abs(back.data.real - f.data.real).max()
        err_im = np.abs(back.data.imag - f.data.imag).max()
        assert err_re <= q.real_affine.scale / 2 + 1e-15
        assert err_im <= q.imag_affine.scale / 2 + 1e-15

    def test_codes_span_full_range(self):
        rng = np.random.default_rng(2)
        q = quantize_components(_random_field(rng))
        assert q.real_plane.min() == 0 and q.real_plane.max() == 255
        assert q.imag_plane.min() == 0 and q.imag_plane.max() == 255

    def test_constant_plane_round_trips_exactly(self):
        data = np.full((8, 8), 3.25 + 0j)
        f = WaveField(data, 8e-6, 640e-9, HologramForm.FOURIER)
        q = quantize_components(f)
        assert np.all(q.real_plane == 0)
        back = dequantize_components(q)
        assert np.array_equal(back.data, data)

    def test_metadata_preserved(self):
        f = _random_field(np.random.default_rng(3), focus_offset=0.01)
        q = quantize_components(f)
        back = dequantize_components(q)
        assert back.pixel_pitch == f.pixel_pitch
        assert back.wavelength == f.wavelength
        assert back.form is f.form
        assert back.focus_offset == 0.01


class TestAperture:
    def test_center_placement(self):
        ap = ApertureSpec.center(100, 60, 40, 20)
        assert (ap.row_offset, ap.col_offset) == (30, 20)
        assert ap.label is ApertureLabel.CENTER

    def test_right_corner_placement(self):
        ap = ApertureSpec.right_corner(100, 60, 40, 20)
        assert (ap.row_offset, ap.col_offset) == (60, 40)
        assert ap.label is ApertureLabel.RIGHT_CORNER

    def test_extract_matches_slice(self):
        f = _random_field(np.random.default_rng(4), 40, 40)
        ap = ApertureSpec(5, 7, 10, 12)
        sub = extract_aperture(f, ap)
        assert np.array_equal(sub.data, f.data[5:15, 7:19])

    def test_out_of_bounds_rejected(self):
        f = _random_field(np.random.default_rng(5), 16, 16)
        with pytest.raises(ApertureOutOfBounds):
            extract_aperture(f, ApertureSpec(10, 0, 10, 8))
        with pytest.raises(ApertureOutOfBounds):
            extract_aperture(f, ApertureSpec(-1, 0, 4, 4))

    def test_quantized_crop_keeps_affines(self):
        q = quantize_components(_random_field(np.random.default_rng(6), 32, 32))
        sub = extract_aperture_quantized(q, ApertureSpec(4, 4, 8, 8))
        assert sub.real_affine == q.real_affine
        assert np.array_equal(sub.real_plane, q.real_plane[4:12, 4:12])


class TestFileIO:
    def test_field_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(7)
        # float32-representable values so the f32 round trip is bit exact
        data = (rng.normal(size=(16, 24)) + 1j * rng.normal(size=(16, 24)))
        data = data.astype(np.complex64).astype(np.complex128)
        f = WaveField(data, 8e-6, 640e-9, HologramForm.FRESNEL, 0.02)
        base = str(tmp_path / "field")
        store_field(f, base)
        back = load_field(base)
        assert np.array_equal(back.data, f.data)
        assert back.form is HologramForm.FRESNEL
        assert back.focus_offset == 0.02

    def test_quantized_round_trip_bit_exact(self, tmp_path):
        q = quantize_components(_random_field(np.random.default_rng(8)))
        base = str(tmp_path / "qfield")
        store_quantized(q, base)
        back = load_quantized(base)
        assert np.array_equal(back.real_plane, q.real_plane)
        assert np.array_equal(back.imag_plane, q.imag_plane)
        assert back.real_affine == q.real_affine
        assert back.imag_affine == q.imag_affine

    def test_truncated_plane_detected(self, tmp_path):
        q = quantize_components(_random_field(np.random.default_rng(9)))
        base = str(tmp_path / "bad")
        store_quantized(q, base)
        with open(base + ".re.u8", "r+b") as fh:
            fh.truncate(10)
        with pytest.raises(CorruptInput):
            load_quantized(base)

    def test_unknown_form_rejected(self, tmp_path):
        q = quantize_components(_random_field(np.random.default_rng(10)))
        base = str(tmp_path / "badform")
        store_quantized(q, base)
        meta = (tmp_path / "badform.meta.json").read_text()
        (tmp_path / "badform.meta.json").write_text(meta.replace("fourier", "other"))
        with pytest.raises(UnsupportedFormat):
            load_quantized(base)

    def test_dtype_mismatch_rejected(self, tmp_path):
        q = quantize_components(_random_field(np.random.default_rng(11)))
        base = str(tmp_path / "q")
        store_quantized(q, base)
        with pytest.raises(UnsupportedFormat):
            load_field(base)
