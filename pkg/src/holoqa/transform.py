"""Band-limited upsampling, Fourier <-> Fresnel conversion, numerical
reconstruction to amplitude views and clip-and-quantize rendering.

DFT conventions used throughout (fixed, so all round trips are exact):

* transforms are the unnormalized numpy FFTs;
* "centered" spectra are obtained with ``fftshift(fft2(x))``; for an axis of
  length n the shifted frequency window is [-(n//2), n - n//2 - 1], so the
  n//2-th entry is the most negative frequency and even lengths carry their
  Nyquist bin there (it is kept whole when padding, which makes
  upsample/downsample exactly inverse of each other);
* physical sample coordinates along an axis of n samples at pitch p are
  x = (index - n//2) * p, i.e. the grid is centered on index n//2;
* reconstruction amplitude is |fftshift(fft2(ifftshift(field)))|, so Parseval
  reads sum(A^2) = rows*cols*sum(|field|^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateAmplitude,
    FormMismatch,
    InvalidFactor,
    PlanMismatch,
)
from .field import ApertureSpec, HologramForm, WaveField, extract_aperture


@dataclass(frozen=True)
class ConversionPlan:
    """Record of a Fourier->Fresnel conversion, sufficient to invert it."""

    m: int
    z: float
    source_rows: int
    source_cols: int
    target_rows: int
    target_cols: int
    target_pitch: float
    wavelength: float


@dataclass(frozen=True)
class ViewImage:
    """8-bit amplitude rendering of a reconstructed view."""

    pixels: np.ndarray          # uint8
    clip_bound: float
    aperture: ApertureSpec
    focal_distance: float
    source_id: str = ""

    def __post_init__(self):
        px = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)
        if self.clip_bound <= 0:
            raise DegenerateAmplitude(f"clip_bound must be > 0, got {self.clip_bound}")


def _check_factor(m) -> int:
    if not float(m).is_integer() or int(m) < 2:
        raise InvalidFactor(f"upsampling factor must be an integer >= 2, got {m}")
    return int(m)


def compute_focus_distance(n_pixels: int, pitch: float, wavelength: float, m: int = 2) -> float:
    """Demodulation distance z = (m/(m-1)) * N * p^2 / lambda.

    N and p are the post-upsampling pixel count (larger dimension) and pitch.
    """
    m = _check_factor(m)
    if n_pixels < 1 or pitch <= 0 or wavelength <= 0:
        raise InvalidFactor("n_pixels, pitch and wavelength must be positive")
    return (m / (m - 1.0)) * n_pixels * pitch * pitch / wavelength


def _pad_centered_spectrum(spec: np.ndarray, m: int) -> np.ndarray:
    rows, cols = spec.shape
    out = np.zeros((rows * m, cols * m), dtype=spec.dtype)
    r0 = rows * m // 2 - rows // 2
    c0 = cols * m // 2 - cols // 2
    out[r0 : r0 + rows, c0 : c0 + cols] = spec
    return out


def _crop_centered_spectrum(spec: np.ndarray, m: int) -> np.ndarray:
    rows, cols = spec.shape
    nr, nc = rows // m, cols // m
    r0 = rows // 2 - nr // 2
    c0 = cols // 2 - nc // 2
    return spec[r0 : r0 + nr, c0 : c0 + nc]


def upsample_grid(data: np.ndarray, m: int) -> np.ndarray:
    """Band-limited interpolation by centered zero padding of the spectrum.

    Original samples are reproduced exactly at stride-m grid positions.
    """
    spec = np.fft.fftshift(np.fft.fft2(data))
    padded = _pad_centered_spectrum(spec, m)
    return np.fft.ifft2(np.fft.ifftshift(padded)) * (m * m)


def downsample_grid(data: np.ndarray, m: int) -> np.ndarray:
    """Inverse of :func:`upsample_grid` (centered spectral crop)."""
    spec = np.fft.fftshift(np.fft.fft2(data))
    cropped = _crop_centered_spectrum(spec, m)
    return np.fft.ifft2(np.fft.ifftshift(cropped)) / (m * m)


def upsample_field(f: WaveField, m: int) -> WaveField:
    """Upsample a wavefield by integer factor m; pitch becomes pitch/m."""
    m = _check_factor(m)
    return WaveField(
        upsample_grid(f.data, m),
        f.pixel_pitch / m,
        f.wavelength,
        f.form,
        f.focus_offset,
    )


def _grid_coordinates(rows: int, cols: int, pitch: float):
    y = (np.arange(rows) - rows // 2) * pitch
    x = (np.arange(cols) - cols // 2) * pitch
    return y[:, None], x[None, :]


def parabolic_kernel(rows: int, cols: int, pitch: float, wavelength: float, z: float) -> np.ndarray:
    """Unit-modulus demodulation kernel K(z) = exp(i*pi*(x^2+y^2)/(lambda*z))."""
    y, x = _grid_coordinates(rows, cols, pitch)
    return np.exp(1j * np.pi * (x * x + y * y) / (wavelength * z))


def fourier_to_fresnel(f: WaveField, m: int = 2) -> tuple[WaveField, ConversionPlan]:
    """Convert a Fourier hologram to Fresnel form: K(z) * US(H)."""
    m = _check_factor(m)
    if f.form is not HologramForm.FOURIER:
        raise FormMismatch("fourier_to_fresnel requires a Fourier-form hologram")
    up = upsample_grid(f.data, m)
    rows, cols = up.shape
    pitch = f.pixel_pitch / m
    z = compute_focus_distance(max(rows, cols), pitch, f.wavelength, m)
    kernel = parabolic_kernel(rows, cols, pitch, f.wavelength, z)
    plan = ConversionPlan(m, z, f.rows, f.cols, rows, cols, pitch, f.wavelength)
    out = WaveField(kernel * up, pitch, f.wavelength, HologramForm.FRESNEL, f.focus_offset)
    return out, plan


def fresnel_to_fourier(f: WaveField, plan: ConversionPlan) -> WaveField:
    """Invert :func:`fourier_to_fresnel`: conjugate kernel, then decimate."""
    if f.form is not HologramForm.FRESNEL:
        raise PlanMismatch("fresnel_to_fourier requires a Fresnel-form hologram")
    if (f.rows, f.cols) != (plan.target_rows, plan.target_cols):
        raise PlanMismatch(
            f"field is {f.rows}x{f.cols} but plan expects "
            f"{plan.target_rows}x{plan.target_cols}"
        )
    kernel = parabolic_kernel(f.rows, f.cols, plan.target_pitch, plan.wavelength, plan.z)
    down = downsample_grid(np.conj(kernel) * f.data, plan.m)
    return WaveField(
        down,
        plan.target_pitch * plan.m,
        plan.wavelength,
        HologramForm.FOURIER,
        f.focus_offset,
    )


def nominal_focus_distance(f: WaveField) -> float:
    """Nominal focus distance convention for refocusing: Eq-style distance of
    the m=2 converted hologram, computed from the field's own grid."""
    return compute_focus_distance(max(f.rows, f.cols), f.pixel_pitch, f.wavelength, 2)


def refocus_kernel(rows: int, cols: int, pitch: float, wavelength: float,
                   focal_offset: float, z_nominal: float) -> np.ndarray:
    """Quadratic-phase refocus kernel Q(delta) in the hologram plane.

    Q == 1 for delta = 0; otherwise the effective curvature distance is
    d_eff = z_nominal^2 / delta (paraxial focal shift of delta around the
    nominal plane).
    """
    if focal_offset == 0.0:
        return np.ones((rows, cols), dtype=np.complex128)
    d_eff = z_nominal * z_nominal / focal_offset
    y, x = _grid_coordinates(rows, cols, pitch)
    return np.exp(-1j * np.pi * (x * x + y * y) / (wavelength * d_eff))


def reconstruct_view(f: WaveField, ap: ApertureSpec | None = None,
                     focal_offset: float = 0.0) -> np.ndarray:
    """Render the amplitude of a view: |centered DFT(aperture * Q(delta))|.

    Fourier-form holograms only; callers holding a Fresnel field convert it
    back with its plan first.
    """
    if f.form is not HologramForm.FOURIER:
        raise FormMismatch("reconstruct_view requires a Fourier-form hologram")
    sub = extract_aperture(f, ap) if ap is not None else f
    q = refocus_kernel(
        sub.rows, sub.cols, sub.pixel_pitch, sub.wavelength,
        focal_offset, nominal_focus_distance(f),
    )
    spectrum = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(sub.data * q)))
    return np.abs(spectrum)


def clip_and_quantize_view(
    ref_amp: np.ndarray,
    dist_amp: np.ndarray,
    clip_percentile: float = 99.9,
    aperture: ApertureSpec | None = None,
    focal_distance: float = 0.0,
    source_id: str = "",
) -> tuple[ViewImage, ViewImage]:
    """Clip both amplitudes against the reference percentile bound and map to
    8 bits with the shared bound, so the pair stays comparable."""
    ref_amp = np.asarray(ref_amp, dtype=np.float64)
    dist_amp = np.asarray(dist_amp, dtype=np.float64)
    if ref_amp.shape != dist_amp.shape:
        raise DegenerateAmplitude(
            f"amplitude shapes differ: {ref_amp.shape} vs {dist_amp.shape}"
        )
    bound = float(np.percentile(ref_amp, clip_percentile))
    if bound <= 0:
        raise DegenerateAmplitude("reference amplitude has a non-positive clip bound")
    if aperture is None:
        aperture = ApertureSpec(0, 0, ref_amp.shape[0], ref_amp.shape[1])

    def _encode(a):
        codes = np.round(255.0 * np.clip(a, 0.0, bound) / bound)
        return ViewImage(codes.astype(np.uint8), bound, aperture, focal_distance, source_id)

    return _encode(ref_amp), _encode(dist_amp)


# ---------------------------------------------------------------------------
# PGM persistence for rendered views

def store_view(view: ViewImage, path: str) -> None:
    """Write a binary P5 PGM plus a JSON sidecar with the view metadata."""
    import json

    with open(path, "wb") as fh:
        fh.write(f"P5\n{view.pixels.shape[1]} {view.pixels.shape[0]}\n255\n".encode())
        fh.write(view.pixels.tobytes())
    meta = {
        "clip_bound": view.clip_bound,
        "focal_distance": view.focal_distance,
        "source_id": view.source_id,
        "aperture": {
            "row_offset": view.aperture.row_offset,
            "col_offset": view.aperture.col_offset,
            "height": view.aperture.height,
            "width": view.aperture.width,
            "label": view.aperture.label.value,
        },
    }
    with open(path + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)


def store_gray_pgm(pixels: np.ndarray, path: str) -> None:
    """Write a bare uint8 grid as binary P5 PGM (quality maps etc.)."""
    px = np.ascontiguousarray(pixels, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{px.shape[1]} {px.shape[0]}\n255\n".encode())
        fh.write(px.tobytes())


def load_gray_pgm(path: str) -> np.ndarray:
    """Read a binary P5 PGM written by :func:`store_gray_pgm`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        fields.append(raw[start:pos])
    if fields[0] != b"P5" or fields[3] != b"255":
        from .errors import UnsupportedFormat

        raise UnsupportedFormat(f"{path}: not an 8-bit binary PGM")
    cols, rows = int(fields[1]), int(fields[2])
    data = np.frombuffer(raw[pos + 1 :], dtype=np.uint8, count=rows * cols)
    return data.reshape(rows, cols).copy()
