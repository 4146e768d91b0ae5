"""Post-processing: robust gap estimation, rank correlations,
phase-transition scans, tail-index regression, and radius estimation.

The accuracy gap of a run is the trimmed mean of (test error - train
error) over a trailing window, discarding the largest values so that
isolated stable-noise jumps do not bias the estimate. Scans group run
records by dimension or noise scale and correlate the gap with the tail
index; the tail-index regression inverts the d^(1/2 - alpha/4) scaling
of the bound; the radius estimate reads off where the correlation
changes sign.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import phase_regime
from .errors import (
    AnalysisPreconditionError,
    DimensionMismatchError,
    InvalidParameterError,
)
from .sde import RunTrace


@dataclass(frozen=True)
class RunRecord:
    """One persisted grid cell; the row format all analysis consumes."""

    alpha: float
    sigma1: float
    d: int
    width: int
    n: int
    seed: int
    gap: float
    i_hat: float
    g_hat: float
    diverged: bool


@dataclass(frozen=True)
class GroupScan:
    """Correlations between alpha and the gap within one group."""

    group: float
    n_seeds: int
    tau_seed_mean: float
    tau_seed_std: float
    tau_mean_gap: float
    pearson_mean_gap: float


@dataclass(frozen=True)
class AnalysisReport:
    """Correlation scan plus the report-level estimates derived from it.

    Optional fields are None when the records cannot support them (a
    single d value, no tau sign change); the notes say why.
    """

    group_key: str
    groups: tuple[GroupScan, ...]
    regimes: tuple[tuple[str, str], ...]
    r_hat: float | None = None
    intercept: float | None = None
    alpha_hat: float | None = None
    radius_estimate: float | None = None
    regression_note: str | None = None
    radius_note: str | None = None


def robust_gap(trace: RunTrace, window: int = 2000, trim: float = 0.15) -> float:
    """Trimmed mean gap over the last ``window`` steps of a trace.

    Removes the ceil(trim * count) largest gaps before averaging.
    """
    if window < 1:
        raise InvalidParameterError("window must be >= 1")
    if not 0.0 <= trim < 1.0:
        raise InvalidParameterError(f"trim must be in [0, 1), got {trim}")
    if not trace.records:
        raise AnalysisPreconditionError("trace has no records")
    last_step = trace.records[-1].step
    gaps = [
        r.test_error - r.train_error
        for r in trace.records
        if r.step > last_step - window
        and r.test_error is not None
        and r.train_error is not None
    ]
    if not gaps:
        raise AnalysisPreconditionError("no evaluated gaps in the window")
    drop = math.ceil(trim * len(gaps))
    kept = sorted(gaps)[: len(gaps) - drop] if drop else gaps
    if not kept:
        raise AnalysisPreconditionError("trimming removed every gap in the window")
    return math.fsum(kept) / len(kept)


def _tie_term(values: np.ndarray) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def _count_inversions(a: list[float]) -> int:
    """Number of strictly decreasing pairs, by merge sort."""
    n = len(a)
    if n < 2:
        return 0
    mid = n // 2
    left, right = a[:mid], a[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            inv += len(left) - i
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    a[:] = merged
    return inv


def kendall_tau(xs, ys) -> float:
    """Tie-adjusted Kendall tau-b via merge-sort inversion counting."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(f"shapes {x.shape} and {y.shape} do not pair up")
    n = x.size
    if n < 2:
        raise AnalysisPreconditionError("need at least 2 pairs")
    n0 = n * (n - 1) // 2
    n1 = _tie_term(x)
    n2 = _tie_term(y)
    if n1 == n0 or n2 == n0:
        raise AnalysisPreconditionError("tau undefined: a variable is constant")

    order = np.lexsort((y, x))
    xs_, ys_ = x[order], y[order]
    joint = 0
    run = 1
    for i in range(1, n):
        if xs_[i] == xs_[i - 1] and ys_[i] == ys_[i - 1]:
            run += 1
        else:
            joint += run * (run - 1) // 2
            run = 1
    joint += run * (run - 1) // 2

    swaps = _count_inversions(list(ys_))
    concordant_minus_discordant = n0 - n1 - n2 + joint - 2 * swaps
    return concordant_minus_discordant / math.sqrt((n0 - n1) * (n0 - n2))


def pearson(xs, ys) -> float:
    """Product-moment correlation coefficient."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(f"shapes {x.shape} and {y.shape} do not pair up")
    if x.size < 2:
        raise AnalysisPreconditionError("need at least 2 pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise AnalysisPreconditionError("pearson undefined: a variable is constant")
    return float(dx @ dy) / math.sqrt(sx * sy)


def _group_values(records: list[RunRecord], key: str) -> list[float]:
    return sorted({getattr(r, key) for r in records})


def correlation_scan(records, group_key: str) -> list[GroupScan]:
    """Per-group correlation between alpha and the gap.

    Two variants per group: the per-seed tau (mean and std across seeds;
    seeds whose gaps are degenerate for tau are skipped) and the tau on
    seed-averaged gaps. Diverged records never enter.
    """
    if group_key not in ("d", "sigma1"):
        raise InvalidParameterError(f"group_key must be 'd' or 'sigma1', got {group_key!r}")
    live = [r for r in records if not r.diverged]
    if not live:
        raise AnalysisPreconditionError("no non-diverged records")
    scans = []
    for g in _group_values(live, group_key):
        rows = [r for r in live if getattr(r, group_key) == g]
        alphas = sorted({r.alpha for r in rows})
        if len(alphas) < 2:
            raise AnalysisPreconditionError(
                f"group {group_key}={g} has fewer than 2 distinct alpha values"
            )
        taus = []
        for seed in sorted({r.seed for r in rows}):
            sub = sorted((r.alpha, r.gap) for r in rows if r.seed == seed)
            if len({a for a, _ in sub}) < 2:
                continue
            try:
                taus.append(kendall_tau([a for a, _ in sub], [gp for _, gp in sub]))
            except AnalysisPreconditionError:
                continue  # constant gaps in this seed
        mean_gaps = [
            float(np.mean([r.gap for r in rows if r.alpha == a])) for a in alphas
        ]
        tau_mean = kendall_tau(alphas, mean_gaps)
        pear_mean = pearson(alphas, mean_gaps)
        scans.append(
            GroupScan(
                group=float(g),
                n_seeds=len(taus),
                tau_seed_mean=float(np.mean(taus)) if taus else float("nan"),
                tau_seed_std=float(np.std(taus)) if taus else float("nan"),
                tau_mean_gap=tau_mean,
                pearson_mean_gap=pear_mean,
            )
        )
    return scans


def alpha_regression(records) -> tuple[float, float, float]:
    """OLS of log(seed-averaged gap) on log(d); returns (r_hat, intercept, alpha_hat).

    alpha_hat = 2 - 4 r_hat inverts the d^(1/2 - alpha/4) scaling.
    """
    live = [r for r in records if not r.diverged]
    dims = sorted({r.d for r in live})
    if len(dims) < 2:
        raise AnalysisPreconditionError("need at least 2 distinct d values")
    mean_gaps = []
    for d in dims:
        g = float(np.mean([r.gap for r in live if r.d == d]))
        if not g > 0.0:
            raise AnalysisPreconditionError(f"non-positive mean gap {g} at d={d}")
        mean_gaps.append(g)
    x = np.log(np.asarray(dims, dtype=float))
    y = np.log(np.asarray(mean_gaps))
    dx = x - x.mean()
    denom = float(dx @ dx)
    if denom == 0.0:
        raise AnalysisPreconditionError("degenerate design: all d equal")
    slope = float(dx @ (y - y.mean())) / denom
    intercept = float(y.mean() - slope * x.mean())
    return slope, intercept, 2.0 - 4.0 * slope


def estimate_radius(
    scan: list[GroupScan],
    axis: str,
    sigma1: float | None = None,
    d: int | None = None,
) -> float:
    """Radius estimate from the first sign change of the seed-averaged tau.

    Linearly interpolates the crossing along the scan axis and returns
    sigma1 * sqrt(d) evaluated there: for a d-scan supply the fixed
    sigma1, for a sigma1-scan supply the fixed d.
    """
    if axis == "d":
        if sigma1 is None:
            raise InvalidParameterError("a d-scan needs the fixed sigma1")
    elif axis == "sigma1":
        if d is None:
            raise InvalidParameterError("a sigma1-scan needs the fixed d")
    else:
        raise InvalidParameterError(f"axis must be 'd' or 'sigma1', got {axis!r}")
    if len(scan) < 2:
        raise AnalysisPreconditionError("need at least 2 groups to locate a crossing")
    xs = [s.group for s in scan]
    taus = [s.tau_mean_gap for s in scan]
    crossing = None
    for i in range(len(xs) - 1):
        if taus[i] == 0.0:
            crossing = xs[i]
            break
        if taus[i] * taus[i + 1] < 0.0:
            t = taus[i] / (taus[i] - taus[i + 1])
            crossing = xs[i] + t * (xs[i + 1] - xs[i])
            break
    if crossing is None:
        raise AnalysisPreconditionError("tau never changes sign along the scan")
    if axis == "d":
        return sigma1 * math.sqrt(crossing)
    return crossing * math.sqrt(d)


def build_report(records, group_key: str, radius: float = 1.0) -> AnalysisReport:
    """Assemble the full analysis report for one records list.

    Regime labels need the scan axis isolated (one sigma1 for a d-scan,
    one d for a sigma1-scan) and a positive noise scale; the regression
    needs at least two dimensions; the radius estimate needs a tau sign
    change. Whatever is unavailable is reported as None with a note.
    """
    scans = tuple(correlation_scan(records, group_key))
    live = [r for r in records if not r.diverged]
    sigmas = sorted({r.sigma1 for r in live})
    dims = sorted({r.d for r in live})

    regimes = []
    for s in scans:
        labels = ("", "")
        try:
            if group_key == "d" and len(sigmas) == 1:
                labels = phase_regime(sigmas[0], int(s.group), radius)
            elif group_key == "sigma1" and len(dims) == 1:
                labels = phase_regime(s.group, dims[0], radius)
        except InvalidParameterError:
            pass  # e.g. a sigma1 = 0 group has no regime
        regimes.append(labels)

    r_hat = intercept = alpha_hat = None
    regression_note = None
    try:
        r_hat, intercept, alpha_hat = alpha_regression(records)
    except AnalysisPreconditionError as exc:
        regression_note = str(exc)

    radius_estimate = None
    radius_note = None
    try:
        if group_key == "d" and len(sigmas) == 1:
            radius_estimate = estimate_radius(list(scans), "d", sigma1=sigmas[0])
        elif group_key == "sigma1" and len(dims) == 1:
            radius_estimate = estimate_radius(list(scans), "sigma1", d=dims[0])
        else:
            radius_note = "scan axis is not isolated"
    except AnalysisPreconditionError as exc:
        radius_note = str(exc)

    return AnalysisReport(
        group_key=group_key,
        groups=scans,
        regimes=tuple(regimes),
        r_hat=r_hat,
        intercept=intercept,
        alpha_hat=alpha_hat,
        radius_estimate=radius_estimate,
        regression_note=regression_note,
        radius_note=radius_note,
    )
