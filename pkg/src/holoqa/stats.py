"""VQEG-style statistical evaluation of metric predictions against MOS:
rank correlations, linear correlation before/after a 4-parameter logistic
fit, RMSE, outlier ratio, pairwise significance testing and rank-score
aggregation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import rankdata, t as t_dist

from .errors import DegenerateRanks, StimulusMismatch


class Display(Enum):
    OPT = "OPT"
    LF = "LF"
    TWO_D = "2D"


@dataclass(frozen=True)
class MosRecord:
    """Subjective score statistics for one stimulus on one display."""

    stimulus_id: str
    display: Display
    view: str
    focal_index: int
    mos: float
    std: float
    n: int


def read_mos_csv(path: str) -> list[MosRecord]:
    """Parse the MOS CSV (header: stimulus_id,display,view,focal_index,mos,std,n)."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            records.append(MosRecord(
                row["stimulus_id"],
                Display(row["display"]),
                row["view"],
                int(row["focal_index"]),
                float(row["mos"]),
                float(row["std"]),
                int(row["n"]),
            ))
    return records


def write_mos_csv(records, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["stimulus_id", "display", "view", "focal_index", "mos", "std", "n"])
        for r in records:
            w.writerow([r.stimulus_id, r.display.value, r.view, r.focal_index,
                        repr(r.mos), repr(r.std), r.n])


# ---------------------------------------------------------------------------
# correlation coefficients

def _as_vectors(x, y, min_len=3):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < min_len:
        raise DegenerateRanks(
            f"need two equal-length vectors of >= {min_len} entries, "
            f"got {x.shape} / {y.shape}"
        )
    return x, y


def pcc(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x, y = _as_vectors(x, y)
    xd = x - x.mean()
    yd = y - y.mean()
    denom = np.sqrt(np.sum(xd * xd) * np.sum(yd * yd))
    if denom == 0.0:
        raise DegenerateRanks("constant vector; correlation undefined")
    return float(np.sum(xd * yd) / denom)


def srocc(x, y) -> float:
    """Spearman rank-order correlation: Pearson on mid-ranks (ties averaged)."""
    x, y = _as_vectors(x, y)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateRanks("constant vector; rank correlation undefined")
    return pcc(rankdata(x, method="average"), rankdata(y, method="average"))


def krcc(x, y) -> float:
    """Kendall's tau-b (tie-corrected) by explicit pair counting."""
    x, y = _as_vectors(x, y)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateRanks("constant vector; rank correlation undefined")
    # comparison-based signs stay defined for +/-inf sentinel scores
    dx = (x[:, None] > x[None, :]).astype(np.int64) - (x[:, None] < x[None, :])
    dy = (y[:, None] > y[None, :]).astype(np.int64) - (y[:, None] < y[None, :])
    iu = np.triu_indices(x.size, k=1)
    prod = dx[iu] * dy[iu]
    concordant = np.sum(prod > 0)
    discordant = np.sum(prod < 0)
    tied_x = np.sum(dx[iu] == 0)
    tied_y = np.sum(dy[iu] == 0)
    n_pairs = iu[0].size
    denom = np.sqrt(float(n_pairs - tied_x) * float(n_pairs - tied_y))
    if denom == 0.0:
        raise DegenerateRanks("all pairs tied; tau-b undefined")
    return float((concordant - discordant) / denom)


# ---------------------------------------------------------------------------
# 4-parameter logistic fit

@dataclass(frozen=True)
class LogisticFit:
    """Monotone 4-parameter logistic predictor
    f(x) = b1 + (b2 - b1) / (1 + exp(-(x - b3)/|b4|))."""

    b1: float
    b2: float
    b3: float
    b4: float
    converged: bool
    residual_norm: float

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return _logistic(np.array([self.b1, self.b2, self.b3, self.b4]), x)


def _logistic(beta, x):
    b1, b2, b3, b4 = beta
    u = (x - b3) / abs(b4)
    # clipped to avoid overflow in exp; the sigmoid saturates anyway
    s = 1.0 / (1.0 + np.exp(-np.clip(u, -500.0, 500.0)))
    return b1 + (b2 - b1) * s


def _logistic_jacobian(beta, x):
    b1, b2, b3, b4 = beta
    a4 = abs(b4)
    u = (x - b3) / a4
    s = 1.0 / (1.0 + np.exp(-np.clip(u, -500.0, 500.0)))
    sp = s * (1.0 - s)
    j = np.empty((x.size, 4))
    j[:, 0] = 1.0 - s
    j[:, 1] = s
    j[:, 2] = -(b2 - b1) * sp / a4
    j[:, 3] = -(b2 - b1) * sp * u / a4 * np.sign(b4)
    return j


def _lm_fit(x, y, beta0, max_iter=2000, rel_tol=1e-10):
    """Damped Gauss-Newton (Levenberg-Marquardt) least squares."""
    beta = np.asarray(beta0, dtype=np.float64).copy()
    resid = _logistic(beta, x) - y
    cost = float(resid @ resid)
    lam = 1e-3
    converged = False
    for _ in range(max_iter):
        jac = _logistic_jacobian(beta, x)
        jtj = jac.T @ jac
        jtr = jac.T @ resid
        step_ok = False
        for _ in range(50):
            try:
                delta = np.linalg.solve(jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-12)), -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = beta + delta
            if trial[3] == 0.0:
                trial[3] = np.finfo(float).eps
            trial_resid = _logistic(trial, x) - y
            trial_cost = float(trial_resid @ trial_resid)
            if trial_cost <= cost:
                step_ok = True
                break
            lam *= 10.0
        if not step_ok:
            converged = True
            break
        rel_change = abs(cost - trial_cost) / max(cost, np.finfo(float).tiny)
        beta, resid, cost = trial, trial_resid, trial_cost
        lam = max(lam * 0.1, 1e-12)
        if rel_change < rel_tol:
            converged = True
            break
    return beta, float(np.sqrt(cost)), converged


def fit_logistic4(scores, mos) -> LogisticFit:
    """Least-squares 4-parameter logistic fit of MOS against metric scores.

    Tries the standard initialization, its direction-flipped twin (for
    anti-correlated metrics) and an affine-seeded start (for near-linear
    relationships), keeping the lowest-residual solution.
    """
    x = np.asarray(scores, dtype=np.float64)
    y = np.asarray(mos, dtype=np.float64)
    if x.size < 5 or x.shape != y.shape:
        raise DegenerateRanks("logistic fit needs >= 5 paired samples")
    if np.all(x == x[0]):
        raise DegenerateRanks("constant scores; logistic fit undefined")

    b3 = float(np.median(x))
    b4 = float(np.std(x) / 4.0) or 1.0
    lo, hi = float(np.min(y)), float(np.max(y))
    starts = [
        np.array([lo, hi, b3, b4]),
        np.array([hi, lo, b3, b4]),
    ]
    # affine seed: wide logistic matching the least-squares line
    span = float(np.ptp(x)) or 1.0
    slope, intercept = np.polyfit(x, y, 1)
    wide = 1000.0 * span
    mid = float(np.mean(x))
    starts.append(np.array([
        intercept + slope * mid - 2.0 * slope * wide,
        intercept + slope * mid + 2.0 * slope * wide,
        mid,
        wide,
    ]))

    best = None
    for beta0 in starts:
        beta, rnorm, conv = _lm_fit(x, y, beta0)
        if best is None or rnorm < best[1]:
            best = (beta, rnorm, conv)
    beta, rnorm, conv = best
    return LogisticFit(float(beta[0]), float(beta[1]), float(beta[2]),
                       float(beta[3]), conv, rnorm)


def rmse_fitted(fit: LogisticFit, scores, mos) -> float:
    """RMS error between the fitted predictions and the MOS."""
    pred = fit.predict(scores)
    mos = np.asarray(mos, dtype=np.float64)
    return float(np.sqrt(np.mean((pred - mos) ** 2)))


def outlier_ratio(fit: LogisticFit, scores, mos_records, ci_multiplier: float = 1.96) -> float:
    """Fraction of fitted predictions outside the per-record 95% confidence
    interval mos +- 1.96 * std / sqrt(n)."""
    pred = fit.predict(scores)
    outliers = 0
    for p, rec in zip(pred, mos_records):
        half = ci_multiplier * rec.std / np.sqrt(rec.n)
        if p < rec.mos - half or p > rec.mos + half:
            outliers += 1
    return outliers / len(mos_records)


# ---------------------------------------------------------------------------
# significance testing and rank aggregation

@dataclass(frozen=True)
class SignificanceMatrix:
    metric_ids: tuple
    entries: np.ndarray   # values in {-1, 0, +1}; entry[i, j] = +1 means row
                          # metric i predicts significantly better than j


def significance_matrix(residual_sets: dict, alpha: float = 0.05,
                        paired: bool = True) -> SignificanceMatrix:
    """Two-sided t-test on absolute residual vectors for each metric pair.

    Residuals must be paired per stimulus (same length and order).
    """
    ids = tuple(residual_sets)
    vectors = [np.abs(np.asarray(residual_sets[mid], dtype=np.float64)) for mid in ids]
    n = vectors[0].size
    for mid, v in zip(ids, vectors):
        if v.size != n:
            raise StimulusMismatch(
                f"residual vector for {mid} has length {v.size}, expected {n}"
            )
    k = len(ids)
    entries = np.zeros((k, k), dtype=int)
    for i in range(k):
        for j in range(i + 1, k):
            if paired:
                d = vectors[i] - vectors[j]
                sd = d.std(ddof=1)
                if sd == 0.0:
                    continue
                t_stat = d.mean() / (sd / np.sqrt(n))
                df = n - 1
            else:
                vi, vj = vectors[i], vectors[j]
                se = np.sqrt(vi.var(ddof=1) / n + vj.var(ddof=1) / n)
                if se == 0.0:
                    continue
                t_stat = (vi.mean() - vj.mean()) / se
                df = 2 * n - 2
            p = 2.0 * t_dist.sf(abs(t_stat), df)
            if p < alpha:
                sign = -1 if t_stat > 0 else 1   # larger residuals = worse
                entries[i, j] = sign
                entries[j, i] = -sign
    return SignificanceMatrix(ids, entries)


@dataclass(frozen=True)
class CriteriaRow:
    """Six evaluation criteria for one metric against one MOS set.

    Correlations are reported as absolute values (the sign convention for
    distance metrics); the raw signed values are retained alongside.
    """

    metric_id: str
    srocc: float
    krcc: float
    pcc_nofit: float
    pcc_fitted: float
    rmse: float
    outlier_ratio: float
    srocc_signed: float = 0.0
    krcc_signed: float = 0.0
    pcc_nofit_signed: float = 0.0

CRITERIA = ("srocc", "krcc", "pcc_nofit", "pcc_fitted", "rmse", "outlier_ratio")
# criteria where smaller values indicate better prediction
ASCENDING_CRITERIA = frozenset({"rmse", "outlier_ratio"})


@dataclass(frozen=True)
class MetricEvaluation:
    row: CriteriaRow
    fit: LogisticFit
    abs_residuals: np.ndarray


def _definite_scores(scores) -> np.ndarray:
    """Replace +inf sentinels (perfect PSNR) by max finite + one score step so
    the logistic fit stays finite; rank statistics are unaffected."""
    scores = np.asarray(scores, dtype=np.float64)
    if not np.any(np.isinf(scores)):
        return scores
    finite = scores[np.isfinite(scores)]
    if finite.size == 0:
        raise DegenerateRanks("all scores are infinite")
    uniq = np.unique(finite)
    step = float(np.min(np.diff(uniq))) if uniq.size > 1 else 1.0
    out = scores.copy()
    out[np.isinf(out)] = uniq.max() + step
    return out


def evaluate_metric(metric_id: str, scores, mos_records) -> MetricEvaluation:
    """Compute all six criteria for one metric's scores against MOS records."""
    mos = np.array([r.mos for r in mos_records], dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    rank_scores = scores  # rank statistics tolerate the +inf sentinel
    s = srocc(rank_scores, mos)
    k = krcc(rank_scores, mos)
    fit_scores = _definite_scores(scores)
    p0 = pcc(fit_scores, mos)
    fit = fit_logistic4(fit_scores, mos)
    pred = fit.predict(fit_scores)
    p1 = pcc(pred, mos)
    err = rmse_fitted(fit, fit_scores, mos)
    outl = outlier_ratio(fit, fit_scores, mos_records)
    row = CriteriaRow(
        metric_id, abs(s), abs(k), abs(p0), p1, err, outl,
        srocc_signed=s, krcc_signed=k, pcc_nofit_signed=p0,
    )
    return MetricEvaluation(row, fit, np.abs(pred - mos))


def rank_aggregate(tables: list) -> dict:
    """Per-metric sums of ranking scores over all criteria rows of all tables.

    In each criterion row the best metric scores n (the number of metrics)
    and the worst scores 1; ties share the mean of their span.
    """
    totals: dict[str, float] = {}
    for table in tables:
        ids = [row.metric_id for row in table]
        for crit in CRITERIA:
            values = np.array([getattr(row, crit) for row in table], dtype=np.float64)
            if crit in ASCENDING_CRITERIA:
                scores = rankdata(-values, method="average")
            else:
                scores = rankdata(values, method="average")
            for mid, sc in zip(ids, scores):
                totals[mid] = totals.get(mid, 0.0) + float(sc)
    return totals
