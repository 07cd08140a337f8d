"""Sentiment-vs-credibility statistics: cluster contingency, tail extremes,
and per-group violin summaries (quantiles + kernel density)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .ratings import Rating, RatingCluster, TAXONOMY, cluster_of

DEFAULT_GRID_POINTS = 256
DEFAULT_TAIL_LO = -0.6
DEFAULT_TAIL_HI = 0.6

# Kernel density bandwidth never drops below this, so degenerate or
# near-constant samples still yield a smooth, integrable curve.
BANDWIDTH_FLOOR = 0.05

GROUP_BY_RATING = "rating"
GROUP_BY_CLUSTER = "cluster"


@dataclass
class ContingencyStats:
    total_false: int = 0
    total_true: int = 0
    false_nonneg: int = 0
    false_neg: int = 0
    true_nonneg: int = 0
    true_neg: int = 0
    pct_false_neg: float = 0.0
    pct_true_neg: float = 0.0


@dataclass
class ViolinStats:
    rating_or_cluster: str
    n: int
    median: float
    q1: float
    q3: float
    density_grid: list[tuple[float, float]] = field(default_factory=list)


def contingency(rows):
    """Bin FalseLike/TrueLike rows by sentiment sign.

    A row is negative iff sentiment < 0; exactly-zero sentiment counts as
    non-negative, so the two-way split has no third bin and the negative
    shares account for every row.
    """
    stats = ContingencyStats()
    for row in rows:
        cluster = cluster_of(row.rating)
        negative = row.sentiment < 0
        if cluster is RatingCluster.FALSE_LIKE:
            stats.total_false += 1
            if negative:
                stats.false_neg += 1
            else:
                stats.false_nonneg += 1
        elif cluster is RatingCluster.TRUE_LIKE:
            stats.total_true += 1
            if negative:
                stats.true_neg += 1
            else:
                stats.true_nonneg += 1
    if stats.total_false:
        stats.pct_false_neg = 100.0 * stats.false_neg / stats.total_false
    if stats.total_true:
        stats.pct_true_neg = 100.0 * stats.true_neg / stats.total_true
    return stats


def tail_extremes(rows, lo=DEFAULT_TAIL_LO, hi=DEFAULT_TAIL_HI):
    """Rows with sentiment strictly below lo / strictly above hi.

    ``below`` is ordered by ascending sentiment, ``above`` by descending, so
    the most extreme claims come first in both lists.
    """
    if not lo < hi:
        raise DomainError("tail thresholds need lo < hi, got %r >= %r" % (lo, hi))
    below = sorted((r for r in rows if r.sentiment < lo), key=lambda r: r.sentiment)
    above = sorted((r for r in rows if r.sentiment > hi), key=lambda r: -r.sentiment)
    return below, above


def quantiles_linear(values):
    """(q1, median, q3) with linear interpolation between order statistics."""
    arr = np.asarray(values, dtype=float)
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method="linear")
    return float(q1), float(med), float(q3)


def silverman_bandwidth(values):
    arr = np.asarray(values, dtype=float)
    n = arr.size
    if n < 2:
        return BANDWIDTH_FLOOR
    sd = float(np.std(arr, ddof=1))
    q1, _, q3 = quantiles_linear(arr)
    iqr = q3 - q1
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    h = 0.9 * spread * n ** (-0.2)
    if not math.isfinite(h) or h < BANDWIDTH_FLOOR:
        return BANDWIDTH_FLOOR
    return h


def gaussian_kde_grid(values, grid_points=DEFAULT_GRID_POINTS):
    """Gaussian-kernel density on an even grid over [-1, 1], renormalized so
    its trapezoidal integral is exactly 1 (mass outside the grid folds back)."""
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    arr = np.asarray(values, dtype=float)
    grid = np.linspace(-1.0, 1.0, grid_points)
    h = silverman_bandwidth(arr)
    z = (grid[:, None] - arr[None, :]) / h
    density = np.exp(-0.5 * z * z).sum(axis=1) / (arr.size * h * math.sqrt(2.0 * math.pi))
    integral = np.trapezoid(density, grid)
    density = density / integral
    return list(zip(grid.tolist(), density.tolist()))


def _group_rows(rows, group_by):
    if group_by == GROUP_BY_RATING:
        keys = [r.display_label for r in TAXONOMY]
        of_row = lambda row: row.rating.display_label
    elif group_by == GROUP_BY_CLUSTER:
        keys = [c.value for c in RatingCluster]
        of_row = lambda row: cluster_of(row.rating).value
    else:
        raise DomainError("group_by must be %r or %r" % (GROUP_BY_RATING, GROUP_BY_CLUSTER))
    groups = {key: [] for key in keys}
    for row in rows:
        groups[of_row(row)].append(row.sentiment)
    return keys, groups


def violin(rows, group_by=GROUP_BY_RATING, grid_points=DEFAULT_GRID_POINTS):
    """Per-group ViolinStats in taxonomy (or cluster) order.

    Empty groups are emitted with n=0 and an empty grid rather than skipped,
    so output length and order are fixed by the taxonomy.
    """
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    keys, groups = _group_rows(rows, group_by)
    out = []
    for key in keys:
        values = groups[key]
        if not values:
            out.append(ViolinStats(rating_or_cluster=key, n=0, median=0.0, q1=0.0, q3=0.0))
            continue
        q1, med, q3 = quantiles_linear(values)
        out.append(
            ViolinStats(
                rating_or_cluster=key,
                n=len(values),
                median=med,
                q1=q1,
                q3=q3,
                density_grid=gaussian_kde_grid(values, grid_points),
            )
        )
    return out


def contingency_to_json(stats):
    return {
        "total_false": stats.total_false,
        "total_true": stats.total_true,
        "false_nonneg": stats.false_nonneg,
        "false_neg": stats.false_neg,
        "true_nonneg": stats.true_nonneg,
        "true_neg": stats.true_neg,
        "pct_false_neg": stats.pct_false_neg,
        "pct_true_neg": stats.pct_true_neg,
    }


def violin_to_json(stats):
    return {
        "group": stats.rating_or_cluster,
        "n": stats.n,
        "median": stats.median,
        "q1": stats.q1,
        "q3": stats.q3,
        "density_grid": [[x, d] for x, d in stats.density_grid],
    }


def _tail_row(row):
    return {
        "claim": row.claim,
        "rating": row.rating.display_label,
        "cluster": cluster_of(row.rating).value,
        "sentiment": row.sentiment,
    }


def stats_report(rows, lo=DEFAULT_TAIL_LO, hi=DEFAULT_TAIL_HI):
    """Everything stats.json carries: contingency, per-rating counts, tails."""
    cont = contingency(rows)
    below, above = tail_extremes(rows, lo, hi)
    per_rating = {r.display_label: 0 for r in TAXONOMY}
    per_cluster = {c.value: 0 for c in RatingCluster}
    for row in rows:
        per_rating[row.rating.display_label] += 1
        per_cluster[cluster_of(row.rating).value] += 1
    ratio = (cont.total_false / cont.total_true) if cont.total_true else None
    return {
        "total_rows": len(rows),
        "contingency": contingency_to_json(cont),
        "false_true_ratio": ratio,
        "per_rating_counts": per_rating,
        "per_cluster_counts": per_cluster,
        "tails": {
            "lo": lo,
            "hi": hi,
            "below_count": len(below),
            "above_count": len(above),
            "below_all_false_like": all(
                cluster_of(r.rating) is RatingCluster.FALSE_LIKE for r in below
            ),
            "below": [_tail_row(r) for r in below],
            "above": [_tail_row(r) for r in above],
        },
    }


# -- static SVG figure --------------------------------------------------------

_SVG_TOP = 30
_SVG_BOTTOM = 40
_SVG_LEFT = 50
_GROUP_WIDTH = 76
_PLOT_HEIGHT = 360


def _y(value):
    # sentiment in [-1, 1] mapped top-down
    return _SVG_TOP + (1.0 - value) / 2.0 * _PLOT_HEIGHT


def render_violin_svg(stats):
    """Violin silhouettes (mirrored density), IQR bar and median tick per
    group. Output is deterministic: fixed layout, 2-decimal coordinates."""
    width = _SVG_LEFT + _GROUP_WIDTH * max(1, len(stats)) + 20
    height = _SVG_TOP + _PLOT_HEIGHT + _SVG_BOTTOM
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="%d" height="%d" fill="white"/>' % (width, height),
    ]
    for tick in (-1.0, -0.5, 0.0, 0.5, 1.0):
        y = _y(tick)
        parts.append(
            '<line x1="%d" y1="%.2f" x2="%d" y2="%.2f" stroke="#ddd"/>'
            % (_SVG_LEFT - 6, y, width - 12, y)
        )
        parts.append(
            '<text x="%d" y="%.2f" font-size="10" text-anchor="end" '
            'fill="#444">%.1f</text>' % (_SVG_LEFT - 10, y + 3, tick)
        )
    half = _GROUP_WIDTH * 0.42
    for i, vs in enumerate(stats):
        cx = _SVG_LEFT + _GROUP_WIDTH * (i + 0.5)
        label = vs.rating_or_cluster
        parts.append(
            '<text x="%.2f" y="%d" font-size="9" text-anchor="middle" '
            'fill="#222">%s</text>' % (cx, height - 22, label)
        )
        parts.append(
            '<text x="%.2f" y="%d" font-size="8" text-anchor="middle" '
            'fill="#888">n=%d</text>' % (cx, height - 10, vs.n)
        )
        if vs.n == 0 or not vs.density_grid:
            continue
        peak = max(d for _, d in vs.density_grid) or 1.0
        right = [
            "%.2f,%.2f" % (cx + half * d / peak, _y(x)) for x, d in vs.density_grid
        ]
        left = [
            "%.2f,%.2f" % (cx - half * d / peak, _y(x))
            for x, d in reversed(vs.density_grid)
        ]
        parts.append(
            '<polygon points="%s" fill="#9ecae1" stroke="#3182bd" '
            'stroke-width="0.8" fill-opacity="0.8"/>' % " ".join(right + left)
        )
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#08306b" '
            'stroke-width="4"/>' % (cx, _y(vs.q1), cx, _y(vs.q3))
        )
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#000" '
            'stroke-width="1.5"/>'
            % (cx - half * 0.5, _y(vs.median), cx + half * 0.5, _y(vs.median))
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
