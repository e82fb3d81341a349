"""Turn a benchmark CSV into per-algorithm smoothed loss curves.

Input is the runner's CSV (header ``seed,t,algorithm,instant_loss,cum_loss``).
For each algorithm the instant losses are averaged across seeds per step,
then smoothed with a centered moving mean whose window shrinks at the
boundaries (the mean is always over the points actually available). Window 1
is the identity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

EXPECTED_HEADER = ["seed", "t", "algorithm", "instant_loss", "cum_loss"]


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    window: int = 10
    out_path: str = "figure.png"
    algorithms: tuple[str, ...] = ()  # empty: include all

    def __post_init__(self):
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")


def load_mean_series(csv_path) -> dict[str, np.ndarray]:
    """Per-algorithm instant losses averaged across seeds, indexed by step."""
    per_algo: dict[str, dict[int, list[float]]] = {}
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPECTED_HEADER:
            raise SchemaError(f"unexpected header {reader.fieldnames}; need {EXPECTED_HEADER}")
        for row in reader:
            per_algo.setdefault(row["algorithm"], {}).setdefault(int(row["t"]), []).append(
                float(row["instant_loss"])
            )
    out = {}
    for name, by_t in per_algo.items():
        steps = sorted(by_t)
        if steps != list(range(1, len(steps) + 1)):
            raise SchemaError(f"algorithm {name!r} has gaps in its time index")
        counts = {len(v) for v in by_t.values()}
        if len(counts) != 1:
            raise SchemaError(f"algorithm {name!r} has unequal seed counts per step")
        out[name] = np.array([sum(by_t[t]) / len(by_t[t]) for t in steps])
    return out


def moving_mean(values, window: int) -> np.ndarray:
    """Centered moving mean; the window shrinks near the edges.

    Index i averages values[i - (window-1)//2 .. i + window//2], clipped to
    the array. Deterministic left-to-right float summation.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    values = list(map(float, values))
    n = len(values)
    lo_span = (window - 1) // 2
    hi_span = window // 2
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - lo_span)
        hi = min(n - 1, i + hi_span)
        total = 0.0
        for v in values[lo : hi + 1]:
            total += v
        out[i] = total / (hi - lo + 1)
    return out


def smoothed_series(spec: PlotSpec) -> dict[str, np.ndarray]:
    """The exact data arrays the figure plots, keyed by algorithm."""
    series = load_mean_series(spec.csv_path)
    if spec.algorithms:
        missing = set(spec.algorithms) - set(series)
        if missing:
            raise SchemaError(f"algorithms not in CSV: {sorted(missing)}")
        series = {name: series[name] for name in spec.algorithms}
    return {name: moving_mean(values, spec.window) for name, values in sorted(series.items())}


def render(spec: PlotSpec) -> dict[str, np.ndarray]:
    """Write the figure and return the plotted arrays."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    curves = smoothed_series(spec)
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for name, values in curves.items():
        ax.plot(np.arange(1, len(values) + 1), values, label=name, linewidth=1.2)
    ax.set_xlabel("step")
    ax.set_ylabel(f"mean loss (moving mean, window {spec.window})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return curves
