"""Falsification harness: empirical and exact tail probabilities with exact
binomial confidence intervals, checked against the closed-form bounds.

A bound is never declared tight, only SOUND or VIOLATION: VIOLATION means
the Clopper-Pearson lower confidence limit (or an exact enumerated tail)
exceeds the bound at some grid point.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import beta as beta_dist

from . import functions as fn
from .bounds import TailBoundResult, evaluate_tail
from .entropy import ProductTable

__all__ = [
    "TailEstimate", "VerificationReport", "clopper_pearson", "estimate_tail",
    "exact_tail_enumeration", "bounds_on_grid", "falsified_bounds",
    "check_bounds", "compare_bounds", "report_to_csv", "SHARD_SIZE",
]

SHARD_SIZE = 10 ** 5    # fixed shard width keeps counts thread-count invariant
DEFAULT_CP_LEVEL = 0.999


def clopper_pearson(k: int, n: int, level: float = DEFAULT_CP_LEVEL):
    """Exact binomial two-sided confidence interval for k successes in n."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0,1), got {level}")
    tail = (1.0 - level) / 2.0
    lo = 0.0 if k == 0 else float(beta_dist.ppf(tail, k, n - k + 1))
    hi = 1.0 if k == n else float(beta_dist.ppf(1.0 - tail, k + 1, n - k))
    return lo, hi


@dataclass(frozen=True)
class TailEstimate:
    """Exceedance counts of f(X) - E[f(X')] over a sorted threshold grid.

    Thresholds are shifted up by the expectation half-width before counting,
    which is conservative toward SOUND; the shift is reported.
    """
    t_grid: tuple
    exceed_counts: tuple
    n_samples: int
    mean_value: float
    mean_half_width: float
    cp_level: float
    seed: int

    def __post_init__(self):
        if any(c > self.n_samples for c in self.exceed_counts):
            raise ValueError("exceedance count exceeds sample count")

    @property
    def empirical_tail(self):
        return tuple(c / self.n_samples for c in self.exceed_counts)

    def intervals(self):
        return tuple(clopper_pearson(c, self.n_samples, self.cp_level)
                     for c in self.exceed_counts)

    def to_dict(self):
        return {"t_grid": list(self.t_grid),
                "exceed_counts": list(self.exceed_counts),
                "n_samples": self.n_samples,
                "mean_value": self.mean_value,
                "mean_half_width": self.mean_half_width,
                "cp_level": self.cp_level,
                "seed": self.seed}


def _check_grid(t_grid):
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("t_grid must be nonempty")
    if any(t <= 0 for t in t_grid):
        raise ValueError("t_grid entries must be positive")
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be sorted strictly ascending")
    return t_grid


def estimate_tail(fspec, t_grid, n_samples, seed, cp_level=DEFAULT_CP_LEVEL,
                  threads=1, expectation_budget=10 ** 5) -> TailEstimate:
    """One pass over n_samples deterministic draws of f, sharded by a fixed
    width so the result does not depend on the worker count."""
    t_grid = _check_grid(t_grid)
    if n_samples < 10 ** 4:
        raise ValueError(f"n_samples must be >= 10^4, got {n_samples}")
    mean_value, half = fn.expectation(fspec, budget=expectation_budget, seed=seed)
    spacing = min(np.diff(t_grid)) if len(t_grid) > 1 else t_grid[0]
    if half > spacing / 10.0:
        raise ValueError(
            f"expectation budget too small: half-width {half:.3g} exceeds "
            f"a tenth of the grid spacing {spacing:.3g}")
    thresholds = np.asarray(t_grid) + mean_value + half

    shards = [(i, min(SHARD_SIZE, n_samples - i * SHARD_SIZE))
              for i in range((n_samples + SHARD_SIZE - 1) // SHARD_SIZE)]

    def shard_counts(job):
        stream, count = job
        vals = fn.sample_f(fspec, seed, count, stream=stream)
        return np.sum(vals[:, None] > thresholds[None, :], axis=0)

    if threads <= 1:
        parts = [shard_counts(j) for j in shards]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(shard_counts, shards))
    counts = np.sum(np.stack(parts), axis=0)
    return TailEstimate(t_grid=tuple(t_grid),
                        exceed_counts=tuple(int(c) for c in counts),
                        n_samples=n_samples, mean_value=mean_value,
                        mean_half_width=half, cp_level=cp_level, seed=seed)


def exact_tail_enumeration(table: ProductTable, t_grid) -> list:
    """Exact Pr{f - E[f] > t} on a small product space by full enumeration."""
    t_grid = _check_grid(t_grid)
    probs = table.joint_probs().ravel()
    vals = np.asarray(table.f_table, dtype=float).ravel()
    mu = float(np.dot(probs, vals))
    return [float(probs[vals - mu > t].sum()) for t in t_grid]


def bounds_on_grid(fspec, kinds, t_grid, p=None) -> dict:
    """Evaluate each requested bound kind over the grid via the function's
    analytic proxy profile."""
    t_grid = _check_grid(t_grid)
    needs_p = any(k.startswith("thm3") for k in kinds)
    profile = fn.proxy_profile(fspec, p=p if needs_p else None)
    return {k: [evaluate_tail(k, profile, t, p=p) for t in t_grid] for k in kinds}


def falsified_bounds(bounds: dict) -> dict:
    """Negative control: halve every bound probability.  The harness must
    flag these as VIOLATION on a suitable config."""
    out = {}
    for kind, results in bounds.items():
        out[kind + "-falsified"] = [
            TailBoundResult(r.kind + "-falsified", r.t, r.prob / 2.0,
                            r.log_prob - math.log(2.0), r.note)
            for r in results]
    return out


@dataclass(frozen=True)
class VerificationReport:
    """Per-threshold verdicts plus the metadata needed to reproduce them."""
    t_grid: tuple
    empirical: tuple
    cp_lower: tuple
    cp_upper: tuple
    kinds: tuple
    bound_probs: dict            # kind -> tuple of probs over the grid
    verdicts: tuple              # per-t: "SOUND" | "VIOLATION"
    verdict: str
    cp_level: float
    n_samples: Optional[int]
    seed: Optional[int]
    mean_value: Optional[float]
    mean_half_width: Optional[float]
    ratios_log10: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        rows = []
        for i, t in enumerate(self.t_grid):
            row = {"t": t, "empirical": self.empirical[i],
                   "cp_lower": self.cp_lower[i], "cp_upper": self.cp_upper[i],
                   "bounds": {k: self.bound_probs[k][i] for k in self.kinds},
                   "verdict": self.verdicts[i]}
            if self.ratios_log10:
                row["ratios_log10"] = {k: self.ratios_log10[k][i]
                                       for k in self.kinds}
            rows.append(row)
        d = {"rows": rows, "verdict": self.verdict, "cp_level": self.cp_level}
        for key in ("n_samples", "seed", "mean_value", "mean_half_width"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        d.update(self.metadata)
        return d


def check_bounds(est, bounds: dict, metadata=None) -> VerificationReport:
    """Certify domination: VIOLATION iff the lower confidence limit (or the
    exact tail) exceeds some bound value at some threshold.

    `est` is a TailEstimate, or a plain sequence of exact tail probabilities
    aligned with the bound grids (then the interval collapses to the value).
    """
    kinds = tuple(bounds)
    if not kinds:
        raise ValueError("no bounds supplied")
    grids = {k: tuple(r.t for r in rs) for k, rs in bounds.items()}
    ref = grids[kinds[0]]
    for k, g in grids.items():
        if len(g) != len(ref) or any(abs(a - b) > 1e-12 for a, b in zip(g, ref)):
            raise ValueError(f"bound grids misaligned between {kinds[0]} and {k}")

    if isinstance(est, TailEstimate):
        if len(est.t_grid) != len(ref) or any(
                abs(a - b) > 1e-12 for a, b in zip(est.t_grid, ref)):
            raise ValueError("estimate grid does not match bound grid")
        emp = est.empirical_tail
        ivs = est.intervals()
        lo = tuple(iv[0] for iv in ivs)
        hi = tuple(iv[1] for iv in ivs)
        cp_level, n_samples, seed = est.cp_level, est.n_samples, est.seed
        mean_value, mean_half = est.mean_value, est.mean_half_width
    else:
        emp = tuple(float(x) for x in est)
        if len(emp) != len(ref):
            raise ValueError("exact tail list does not match bound grid")
        lo = hi = emp
        cp_level, n_samples, seed = 1.0, None, None
        mean_value = mean_half = None

    probs = {k: tuple(r.prob for r in bounds[k]) for k in kinds}
    verdicts = []
    for i in range(len(ref)):
        bad = any(lo[i] > probs[k][i] for k in kinds)
        verdicts.append("VIOLATION" if bad else "SOUND")
    overall = "VIOLATION" if "VIOLATION" in verdicts else "SOUND"
    return VerificationReport(
        t_grid=ref, empirical=emp, cp_lower=lo, cp_upper=hi, kinds=kinds,
        bound_probs=probs, verdicts=tuple(verdicts), verdict=overall,
        cp_level=cp_level, n_samples=n_samples, seed=seed,
        mean_value=mean_value, mean_half_width=mean_half,
        metadata=dict(metadata or {}))


def compare_bounds(fspec, kinds, t_grid, n_samples, seed, p=None,
                   threads=1, metadata=None) -> VerificationReport:
    """Single estimation pass, all requested bounds, log10 tightness ratios
    (bound over empirical; inf where no exceedance was observed)."""
    est = estimate_tail(fspec, t_grid, n_samples, seed, threads=threads)
    bounds = bounds_on_grid(fspec, kinds, t_grid, p=p)
    report = check_bounds(est, bounds, metadata=metadata)
    ratios = {}
    for k in report.kinds:
        col = []
        for b, e in zip(report.bound_probs[k], report.empirical):
            if e == 0.0:
                col.append(math.inf)
            elif b == 0.0:
                col.append(-math.inf)
            else:
                col.append(math.log10(b / e))
        ratios[k] = tuple(col)
    return VerificationReport(
        t_grid=report.t_grid, empirical=report.empirical,
        cp_lower=report.cp_lower, cp_upper=report.cp_upper,
        kinds=report.kinds, bound_probs=report.bound_probs,
        verdicts=report.verdicts, verdict=report.verdict,
        cp_level=report.cp_level, n_samples=report.n_samples,
        seed=report.seed, mean_value=report.mean_value,
        mean_half_width=report.mean_half_width, ratios_log10=ratios,
        metadata=report.metadata)


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_to_csv(report: VerificationReport) -> str:
    """Fixed column order: t, empirical, cp_lo, cp_hi, one column per bound
    kind (plus ratio columns when present), verdict.  Floats use shortest
    round-trip decimals."""
    cols = ["t", "empirical", "cp_lo", "cp_hi"] + list(report.kinds)
    if report.ratios_log10:
        cols += [f"ratio_log10_{k}" for k in report.kinds]
    cols.append("verdict")
    lines = [",".join(cols)]
    for i in range(len(report.t_grid)):
        row = [report.t_grid[i], report.empirical[i], report.cp_lower[i],
               report.cp_upper[i]]
        row += [report.bound_probs[k][i] for k in report.kinds]
        if report.ratios_log10:
            row += [report.ratios_log10[k][i] for k in report.kinds]
        lines.append(",".join(_fmt(x) for x in row) + "," + report.verdicts[i])
    return "\n".join(lines) + "\n"
