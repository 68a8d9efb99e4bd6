"""Benchmark harness: dataset manifests, the four evaluation tracks and
report emission.

Tracks:

* qa1 scores the quantized hologram crops directly (complex metrics on the
  dequantized fields, real metrics averaged over the two 8-bit planes);
* qa2 first converts reference and distorted fields from Fourier to Fresnel
  form and then scores like qa1 (aperture windows scale with the upsampling
  factor);
* qa3 scores 8-bit amplitude reconstructions of each view and focal plane,
  clipped against the shared reference bound;
* qa4 is qa3 with adaptive Wiener despeckling of both amplitudes before the
  clip, with AUTO noise variance resolved once from the reference.

Evaluation samples are one score per (stimulus, view) for qa1/qa2 and one per
(stimulus, view, focal plane) for qa3/qa4; MOS records are matched at the
same granularity (averaged over focal planes for qa1/qa2) and correlations
are computed per display type.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import dataclass, field as _dc_field

import numpy as np

from .denoise import WienerParams, resolve_params, wiener_denoise
from .errors import DegenerateRanks, NoOverlap, UnknownMetric
from .field import (
    ApertureSpec,
    QuantizedField,
    dequantize_components,
    extract_aperture_quantized,
    load_quantized,
    quantize_components,
)
from .metrics import (
    ALL_METRIC_IDS,
    COMPLEX_METRICS,
    REAL_METRICS,
    DEFAULT_PARAMS,
    MetricParams,
    evaluate_complex,
    score_components_avg,
    evaluate_real,
)
from .stats import (
    CRITERIA,
    CriteriaRow,
    Display,
    MosRecord,
    evaluate_metric,
    rank_aggregate,
    significance_matrix,
)
from .transform import (
    clip_and_quantize_view,
    fourier_to_fresnel,
    reconstruct_view,
)

log = logging.getLogger(__name__)

TRACKS = ("qa1", "qa2", "qa3", "qa4")


@dataclass(frozen=True)
class StimulusEntry:
    """One reference hologram with its distorted versions and view geometry."""

    stimulus_id: str
    reference: str                 # file base, relative to the manifest dir
    distorted: dict                # tag -> file base
    aperture_size: tuple           # (height, width)
    focal_offsets: tuple           # meters, one reconstruction per entry


@dataclass(frozen=True)
class DatasetManifest:
    root: str
    rating_scale: tuple
    views: tuple
    stimuli: tuple

    def load_reference(self, entry: StimulusEntry) -> QuantizedField:
        return load_quantized(os.path.join(self.root, entry.reference))

    def load_distorted(self, entry: StimulusEntry, tag: str) -> QuantizedField:
        return load_quantized(os.path.join(self.root, entry.distorted[tag]))


def load_manifest(path: str) -> DatasetManifest:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    stimuli = tuple(
        StimulusEntry(
            s["id"],
            s["reference"],
            dict(s["distorted"]),
            tuple(int(v) for v in s["aperture_size"]),
            tuple(float(v) for v in s["focal_offsets"]),
        )
        for s in doc["stimuli"]
    )
    return DatasetManifest(
        os.path.dirname(os.path.abspath(path)),
        tuple(float(v) for v in doc.get("rating_scale", (1.0, 5.0))),
        tuple(doc.get("views", ("center",))),
        stimuli,
    )


@dataclass(frozen=True)
class TrackConfig:
    track: str
    metrics: tuple = ()
    upsample_m: int = 2
    clip_percentile: float = 99.9
    wiener: WienerParams = _dc_field(default_factory=WienerParams)
    params: MetricParams = DEFAULT_PARAMS

    def resolved_metrics(self) -> tuple:
        if self.track not in TRACKS:
            raise UnknownMetric(f"unknown track {self.track!r}; known: {', '.join(TRACKS)}")
        if self.metrics:
            ids = tuple(self.metrics)
        elif self.track in ("qa1", "qa2"):
            ids = ALL_METRIC_IDS
        else:
            ids = tuple(REAL_METRICS)
        for mid in ids:
            if mid not in ALL_METRIC_IDS:
                raise UnknownMetric(
                    f"unknown metric {mid!r}; known: {', '.join(ALL_METRIC_IDS)}"
                )
            if self.track in ("qa3", "qa4") and mid in COMPLEX_METRICS:
                raise UnknownMetric(
                    f"{mid!r} consumes complex fields and is not defined on "
                    f"amplitude views (track {self.track})"
                )
        if not ids:
            raise UnknownMetric("empty metric list")
        return ids


@dataclass(frozen=True)
class ScoreRecord:
    stimulus_id: str
    view: str
    focal_index: int
    metric_id: str
    value: float


@dataclass(frozen=True)
class EvalReport:
    track: str
    metric_ids: tuple
    criteria: dict          # Display -> list[CriteriaRow]
    significance: dict      # Display -> SignificanceMatrix
    rank_sums: dict         # metric_id -> float
    raw_scores: tuple       # ScoreRecord, manifest order


def _view_aperture(view: str, rows: int, cols: int, size) -> ApertureSpec:
    h, w = size
    if view == "center":
        return ApertureSpec.center(rows, cols, h, w)
    return ApertureSpec.right_corner(rows, cols, h, w)


def _score_field_pair(metric_ids, ref_q: QuantizedField, dist_q: QuantizedField,
                      params: MetricParams):
    """qa1/qa2 scoring on a pair of quantized hologram crops."""
    out = {}
    ref_c = dist_c = None
    for mid in metric_ids:
        if mid in COMPLEX_METRICS:
            if ref_c is None:
                ref_c = dequantize_components(ref_q).data
                dist_c = dequantize_components(dist_q).data
            out[mid] = evaluate_complex(mid, ref_c, dist_c, params).value
        else:
            out[mid] = score_components_avg(mid, ref_q, dist_q, params).value
    return out


def _field_pair_scores(config: TrackConfig, manifest: DatasetManifest,
                       entry: StimulusEntry, tag: str, metric_ids):
    """Hologram-domain samples: one score dict per view, focal_index -1."""
    ref_q = manifest.load_reference(entry)
    dist_q = manifest.load_distorted(entry, tag)
    ap_size = entry.aperture_size
    if config.track == "qa2":
        m = config.upsample_m
        ref_f, _ = fourier_to_fresnel(dequantize_components(ref_q), m)
        dist_f, _ = fourier_to_fresnel(dequantize_components(dist_q), m)
        ref_q = quantize_components(ref_f)
        dist_q = quantize_components(dist_f)
        ap_size = (ap_size[0] * m, ap_size[1] * m)
    samples = []
    for view in manifest.views:
        ap = _view_aperture(view, ref_q.rows, ref_q.cols, ap_size)
        ref_crop = extract_aperture_quantized(ref_q, ap)
        dist_crop = extract_aperture_quantized(dist_q, ap)
        samples.append((view, -1, _score_field_pair(metric_ids, ref_crop, dist_crop,
                                                    config.params)))
    return samples


def _view_pair_scores(config: TrackConfig, manifest: DatasetManifest,
                      entry: StimulusEntry, tag: str, metric_ids):
    """View-domain samples: one score dict per (view, focal_index)."""
    ref = dequantize_components(manifest.load_reference(entry))
    dist = dequantize_components(manifest.load_distorted(entry, tag))
    samples = []
    for view in manifest.views:
        ap = _view_aperture(view, ref.rows, ref.cols, entry.aperture_size)
        for fi, offset in enumerate(entry.focal_offsets):
            ref_amp = reconstruct_view(ref, ap, offset)
            dist_amp = reconstruct_view(dist, ap, offset)
            if config.track == "qa4":
                wp = resolve_params(ref_amp, config.wiener)
                ref_amp = wiener_denoise(ref_amp, wp)
                dist_amp = wiener_denoise(dist_amp, wp)
            ref_view, dist_view = clip_and_quantize_view(
                ref_amp, dist_amp, config.clip_percentile, ap, offset,
                f"{entry.stimulus_id}:{tag}",
            )
            scores = {
                mid: evaluate_real(
                    mid,
                    ref_view.pixels.astype(np.float64),
                    dist_view.pixels.astype(np.float64),
                    config.params,
                ).value
                for mid in metric_ids
            }
            samples.append((view, fi, scores))
    return samples


def _mos_lookup(mos_records):
    by_key = {}
    for r in mos_records:
        by_key.setdefault((r.stimulus_id, r.display, r.view), {})[r.focal_index] = r
    return by_key


def _matched_mos(by_key, stimulus_id, display, view, focal_index):
    group = by_key.get((stimulus_id, display, view))
    if not group:
        return None
    if focal_index >= 0:
        return group.get(focal_index)
    # hologram-domain sample: average the per-focal-plane MOS statistics
    recs = list(group.values())
    return MosRecord(
        stimulus_id, display, view, -1,
        float(np.mean([r.mos for r in recs])),
        float(np.mean([r.std for r in recs])),
        int(round(np.mean([r.n for r in recs]))),
    )


def run_track(manifest: DatasetManifest, mos_records, config: TrackConfig) -> EvalReport:
    """Score every stimulus pair of the manifest, match MOS per display and
    evaluate every metric on all six criteria."""
    metric_ids = config.resolved_metrics()
    scorer = _field_pair_scores if config.track in ("qa1", "qa2") else _view_pair_scores

    raw = []          # ScoreRecord list, manifest order
    samples = []      # (stimulus_id, view, focal_index, scores dict)
    for entry in manifest.stimuli:
        for tag in entry.distorted:
            sid = f"{entry.stimulus_id}:{tag}"
            for view, fi, scores in scorer(config, manifest, entry, tag, metric_ids):
                samples.append((sid, view, fi, scores))
                for mid in metric_ids:
                    raw.append(ScoreRecord(sid, view, fi, mid, scores[mid]))

    by_key = _mos_lookup(mos_records)
    criteria = {}
    significance = {}
    tables = []
    for display in Display:
        matched = []
        for sid, view, fi, scores in samples:
            rec = _matched_mos(by_key, sid, display, view, fi)
            if rec is None:
                log.warning("no MOS for %s/%s view=%s focal=%s; sample skipped",
                            sid, display.value, view, fi)
                continue
            matched.append((scores, rec))
        if not matched:
            continue
        rows = []
        residual_sets = {}
        for mid in metric_ids:
            vec = [s[mid] for s, _ in matched]
            recs = [r for _, r in matched]
            try:
                ev = evaluate_metric(mid, vec, recs)
                rows.append(ev.row)
                residual_sets[mid] = ev.abs_residuals
            except DegenerateRanks as exc:
                log.warning("metric %s degenerate on display %s: %s",
                            mid, display.value, exc)
                nan = float("nan")
                rows.append(CriteriaRow(mid, nan, nan, nan, nan, nan, nan))
        criteria[display] = rows
        if residual_sets:
            significance[display] = significance_matrix(residual_sets)
        tables.append([r for r in rows if np.isfinite(r.srocc)])
    if not criteria:
        raise NoOverlap("no manifest stimulus has a matching MOS record")

    rank_sums = rank_aggregate([t for t in tables if t])
    return EvalReport(config.track, metric_ids, criteria, significance,
                      rank_sums, tuple(raw))


# ---------------------------------------------------------------------------
# report emission

def emit_report(report: EvalReport, out_dir: str, config: TrackConfig | None = None) -> list:
    """Write the deterministic report set; returns the paths written.

    Per display: a criteria CSV plus an aligned text rendering and a
    significance CSV; per run: rank sums, raw per-stimulus scores and, when a
    config is supplied, an echo of the run configuration.
    """
    if not report.metric_ids:
        raise UnknownMetric("empty metric list")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    if config is not None:
        path = os.path.join(out_dir, f"{report.track}_config.json")
        doc = {
            "track": config.track,
            "metrics": list(report.metric_ids),
            "upsample_m": config.upsample_m,
            "clip_percentile": config.clip_percentile,
            "wiener_window": [config.wiener.window_h, config.wiener.window_w],
            "wiener_noise_variance": config.wiener.noise_variance,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
        written.append(path)

    for display, rows in report.criteria.items():
        path = os.path.join(out_dir, f"{report.track}_{display.value}_criteria.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["metric"] + list(CRITERIA)
                       + ["srocc_signed", "krcc_signed", "pcc_nofit_signed"])
            for r in rows:
                w.writerow([r.metric_id] + [repr(getattr(r, c)) for c in CRITERIA]
                           + [repr(r.srocc_signed), repr(r.krcc_signed),
                              repr(r.pcc_nofit_signed)])
        written.append(path)

        txt = os.path.join(out_dir, f"{report.track}_{display.value}_criteria.txt")
        with open(txt, "w", encoding="utf-8") as fh:
            header = f"{'metric':<10}" + "".join(f"{c:>15}" for c in CRITERIA)
            fh.write(header + "\n")
            for r in rows:
                fh.write(f"{r.metric_id:<10}"
                         + "".join(f"{getattr(r, c):>15.4f}" for c in CRITERIA)
                         + "\n")
        written.append(txt)

    for display, mat in report.significance.items():
        path = os.path.join(out_dir, f"{report.track}_{display.value}_significance.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["metric"] + list(mat.metric_ids))
            for mid, row in zip(mat.metric_ids, mat.entries):
                w.writerow([mid] + [int(v) for v in row])
        written.append(path)

    path = os.path.join(out_dir, f"{report.track}_ranksums.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["metric", "rank_sum"])
        order = sorted(report.rank_sums, key=lambda m: (-report.rank_sums[m], m))
        for mid in order:
            w.writerow([mid, repr(report.rank_sums[mid])])
    written.append(path)

    path = os.path.join(out_dir, f"{report.track}_raw_scores.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["stimulus_id", "view", "focal_index", "metric", "value"])
        for rec in report.raw_scores:
            w.writerow([rec.stimulus_id, rec.view, rec.focal_index,
                        rec.metric_id, repr(rec.value)])
    written.append(path)
    return written
