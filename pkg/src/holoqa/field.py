"""Hologram data model: complex wavefields, 8-bit component quantization,
synthetic-aperture cropping and bit-exact file I/O.

File layout: one raw little-endian plane per algebraic component
(``<id>.re.f32`` / ``<id>.im.f32`` for float32 fields, ``.u8`` for quantized
ones) plus a JSON sidecar ``<id>.meta.json`` holding dimensions, optics
metadata and, for quantized fields, the affine dequantization records.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as _field
from enum import Enum

import numpy as np

from .errors import (
    ApertureOutOfBounds,
    CorruptInput,
    InvalidField,
    UnsupportedFormat,
)


class HologramForm(Enum):
    FOURIER = "fourier"
    FRESNEL = "fresnel"


class ApertureLabel(Enum):
    CENTER = "center"
    RIGHT_CORNER = "right_corner"
    CUSTOM = "custom"


@dataclass(frozen=True)
class WaveField:
    """2D complex wavefield with optics metadata.

    ``data`` is row-major complex128; ``pixel_pitch`` (square pixels) and
    ``wavelength`` are in meters. ``focus_offset`` is the focal shift in
    meters relative to the nominal plane (0 for nominal).
    """

    data: np.ndarray
    pixel_pitch: float
    wavelength: float
    form: HologramForm
    focus_offset: float = 0.0

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidField(f"expected non-empty 2D grid, got shape {arr.shape}")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise InvalidField("field contains non-finite samples")
        if self.pixel_pitch <= 0:
            raise InvalidField(f"pixel_pitch must be > 0, got {self.pixel_pitch}")
        if self.wavelength <= 0:
            raise InvalidField(f"wavelength must be > 0, got {self.wavelength}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class AffineRecord:
    """Dequantization map: value = offset + scale * code."""

    offset: float
    scale: float

    def __post_init__(self):
        if self.scale <= 0:
            raise InvalidField(f"affine scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class QuantizedField:
    """Paired unsigned 8-bit real/imaginary planes with affine records."""

    real_plane: np.ndarray
    imag_plane: np.ndarray
    real_affine: AffineRecord
    imag_affine: AffineRecord
    pixel_pitch: float
    wavelength: float
    form: HologramForm
    focus_offset: float = 0.0

    def __post_init__(self):
        re = np.ascontiguousarray(self.real_plane, dtype=np.uint8)
        im = np.ascontiguousarray(self.imag_plane, dtype=np.uint8)
        if re.ndim != 2 or re.shape != im.shape:
            raise InvalidField(
                f"planes must be 2D with equal shape, got {re.shape} vs {im.shape}"
            )
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "real_plane", re)
        object.__setattr__(self, "imag_plane", im)

    @property
    def rows(self) -> int:
        return self.real_plane.shape[0]

    @property
    def cols(self) -> int:
        return self.real_plane.shape[1]


@dataclass(frozen=True)
class ApertureSpec:
    """Rectangular synthetic-aperture window inside a hologram.

    Center windows are placed at ((rows-h)//2, (cols-w)//2); right-corner
    windows are flush with the bottom-right corner.
    """

    row_offset: int
    col_offset: int
    height: int
    width: int
    label: ApertureLabel = ApertureLabel.CUSTOM

    @staticmethod
    def center(field_rows: int, field_cols: int, height: int, width: int) -> "ApertureSpec":
        return ApertureSpec(
            (field_rows - height) // 2,
            (field_cols - width) // 2,
            height,
            width,
            ApertureLabel.CENTER,
        )

    @staticmethod
    def right_corner(field_rows: int, field_cols: int, height: int, width: int) -> "ApertureSpec":
        return ApertureSpec(
            field_rows - height,
            field_cols - width,
            height,
            width,
            ApertureLabel.RIGHT_CORNER,
        )

    def check_inside(self, rows: int, cols: int) -> None:
        if (
            self.row_offset < 0
            or self.col_offset < 0
            or self.height < 1
            or self.width < 1
            or self.row_offset + self.height > rows
            or self.col_offset + self.width > cols
        ):
            raise ApertureOutOfBounds(
                f"window {self} does not fit inside a {rows}x{cols} field"
            )


def _quantize_plane(values: np.ndarray) -> tuple[np.ndarray, AffineRecord]:
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        # degenerate constant plane: scale 1, all codes 0, exact round trip
        return np.zeros(values.shape, dtype=np.uint8), AffineRecord(lo, 1.0)
    scale = (hi - lo) / 255.0
    codes = np.clip(np.round((values - lo) / scale), 0, 255).astype(np.uint8)
    return codes, AffineRecord(lo, scale)


def quantize_components(f: WaveField) -> QuantizedField:
    """Quantize real and imaginary parts to 8 bits with per-component
    min/max affine maps; round-trip error is at most scale/2 per sample."""
    re_codes, re_aff = _quantize_plane(f.data.real)
    im_codes, im_aff = _quantize_plane(f.data.imag)
    return QuantizedField(
        re_codes, im_codes, re_aff, im_aff,
        f.pixel_pitch, f.wavelength, f.form, f.focus_offset,
    )


def dequantize_components(q: QuantizedField) -> WaveField:
    """Map codes back to field values: v = offset + scale * code."""
    re = q.real_affine.offset + q.real_affine.scale * q.real_plane.astype(np.float64)
    im = q.imag_affine.offset + q.imag_affine.scale * q.imag_plane.astype(np.float64)
    return WaveField(re + 1j * im, q.pixel_pitch, q.wavelength, q.form, q.focus_offset)


def extract_aperture(f: WaveField, ap: ApertureSpec) -> WaveField:
    """Crop the aperture window; optics metadata and form are preserved."""
    ap.check_inside(f.rows, f.cols)
    sub = f.data[
        ap.row_offset : ap.row_offset + ap.height,
        ap.col_offset : ap.col_offset + ap.width,
    ]
    return WaveField(sub.copy(), f.pixel_pitch, f.wavelength, f.form, f.focus_offset)


def extract_aperture_quantized(q: QuantizedField, ap: ApertureSpec) -> QuantizedField:
    """Crop an aperture window out of a quantized field (codes untouched)."""
    ap.check_inside(q.rows, q.cols)
    rsl = slice(ap.row_offset, ap.row_offset + ap.height)
    csl = slice(ap.col_offset, ap.col_offset + ap.width)
    return QuantizedField(
        q.real_plane[rsl, csl].copy(), q.imag_plane[rsl, csl].copy(),
        q.real_affine, q.imag_affine,
        q.pixel_pitch, q.wavelength, q.form, q.focus_offset,
    )


# ---------------------------------------------------------------------------
# file I/O

_FORM_TAGS = {f.value: f for f in HologramForm}


def _meta_path(base: str) -> str:
    return base + ".meta.json"


def store_field(f: WaveField, base: str) -> None:
    """Write ``<base>.re.f32``, ``<base>.im.f32`` and ``<base>.meta.json``."""
    f.data.real.astype("<f4").tofile(base + ".re.f32")
    f.data.imag.astype("<f4").tofile(base + ".im.f32")
    meta = {
        "rows": f.rows,
        "cols": f.cols,
        "dtype": "f32",
        "pixel_pitch": f.pixel_pitch,
        "wavelength": f.wavelength,
        "form": f.form.value,
        "focus_offset": f.focus_offset,
    }
    with open(_meta_path(base), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)


def _read_meta(base: str) -> dict:
    with open(_meta_path(base), "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta.get("form") not in _FORM_TAGS:
        raise UnsupportedFormat(f"unknown hologram form {meta.get('form')!r}")
    return meta


def _read_plane(path: str, dtype: str, rows: int, cols: int) -> np.ndarray:
    if dtype == "f32":
        arr = np.fromfile(path, dtype="<f4")
    elif dtype == "u8":
        arr = np.fromfile(path, dtype=np.uint8)
    else:
        raise UnsupportedFormat(f"unknown dtype {dtype!r}")
    if arr.size != rows * cols:
        raise CorruptInput(
            f"{path}: expected {rows * cols} samples, file holds {arr.size}"
        )
    return arr.reshape(rows, cols)


def load_field(base: str) -> WaveField:
    """Load a float32 field pair written by :func:`store_field`."""
    meta = _read_meta(base)
    if meta.get("dtype") != "f32":
        raise UnsupportedFormat(f"expected dtype f32, got {meta.get('dtype')!r}")
    rows, cols = int(meta["rows"]), int(meta["cols"])
    re = _read_plane(base + ".re.f32", "f32", rows, cols).astype(np.float64)
    im = _read_plane(base + ".im.f32", "f32", rows, cols).astype(np.float64)
    return WaveField(
        re + 1j * im,
        float(meta["pixel_pitch"]),
        float(meta["wavelength"]),
        _FORM_TAGS[meta["form"]],
        float(meta.get("focus_offset", 0.0)),
    )


def store_quantized(q: QuantizedField, base: str) -> None:
    """Write ``<base>.re.u8``, ``<base>.im.u8`` and ``<base>.meta.json``."""
    q.real_plane.tofile(base + ".re.u8")
    q.imag_plane.tofile(base + ".im.u8")
    meta = {
        "rows": q.rows,
        "cols": q.cols,
        "dtype": "u8",
        "pixel_pitch": q.pixel_pitch,
        "wavelength": q.wavelength,
        "form": q.form.value,
        "focus_offset": q.focus_offset,
        "real_affine": {"offset": q.real_affine.offset, "scale": q.real_affine.scale},
        "imag_affine": {"offset": q.imag_affine.offset, "scale": q.imag_affine.scale},
    }
    with open(_meta_path(base), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)


def load_quantized(base: str) -> QuantizedField:
    """Load an 8-bit field pair written by :func:`store_quantized`."""
    meta = _read_meta(base)
    if meta.get("dtype") != "u8":
        raise UnsupportedFormat(f"expected dtype u8, got {meta.get('dtype')!r}")
    rows, cols = int(meta["rows"]), int(meta["cols"])
    re = _read_plane(base + ".re.u8", "u8", rows, cols)
    im = _read_plane(base + ".im.u8", "u8", rows, cols)
    return QuantizedField(
        re, im,
        AffineRecord(**meta["real_affine"]),
        AffineRecord(**meta["imag_affine"]),
        float(meta["pixel_pitch"]),
        float(meta["wavelength"]),
        _FORM_TAGS[meta["form"]],
        float(meta.get("focus_offset", 0.0)),
    )
