"""Restart-interval schedules: geometric covering (GC) and data streaming (DS).

Both schedules tile 1-indexed time with closed intervals. GC is the dyadic
family: for each k >= 0, intervals of length 2^k starting at every positive
multiple of 2^k. DS starts exactly one interval at every time t, of length
g * 2^{u(t)} where 2^{u(t)} is the largest power of two dividing t.

The partition constructions cover an arbitrary closed interval with schedule
members (GC) or prefixes of schedule members (DS) whose lengths double toward
the middle (GC) or double throughout except the truncated tail (DS).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Interval:
    """Closed 1-indexed time range [start..end]."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 1:
            raise ValueError(f"interval start must be >= 1, got {self.start}")
        if self.end < self.start:
            raise ValueError(f"empty interval [{self.start}..{self.end}]")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __contains__(self, t: int) -> bool:
        return self.start <= t <= self.end

    def __repr__(self) -> str:
        return f"[{self.start}..{self.end}]"


@dataclass(frozen=True)
class GeometricCovering:
    """Dyadic schedule: lengths 2^k, starts at positive multiples of 2^k."""


@dataclass(frozen=True)
class DataStreaming:
    """One interval per start t, of length g * 2^{u(t)}; u = 2-adic valuation."""

    g: int = 1

    def __post_init__(self):
        if self.g < 1:
            raise ValueError(f"data-streaming multiplier g must be >= 1, got {self.g}")


ScheduleKind = GeometricCovering | DataStreaming


def _val2(t: int) -> int:
    """Largest u with 2^u dividing t (t >= 1)."""
    return (t & -t).bit_length() - 1


def starts_at(kind: ScheduleKind, t: int) -> list[Interval]:
    """All schedule intervals starting exactly at time t, shortest first."""
    if t < 1:
        raise ValueError(f"time must be >= 1, got {t}")
    if isinstance(kind, GeometricCovering):
        # One interval of length 2^k for each k up to the 2-adic valuation of t.
        return [Interval(t, t + (1 << k) - 1) for k in range(_val2(t) + 1)]
    return [Interval(t, t + kind.g * (1 << _val2(t)) - 1)]


def active(kind: ScheduleKind, t: int) -> list[Interval]:
    """All schedule intervals containing time t, sorted by (start, end)."""
    if t < 1:
        raise ValueError(f"time must be >= 1, got {t}")
    if isinstance(kind, GeometricCovering):
        out = []
        for k in range(t.bit_length()):  # k <= floor(log2 t)
            size = 1 << k
            start = (t // size) * size
            out.append(Interval(start, start + size - 1))
        return sorted(out)
    # DS: any start further back than the longest possible covering interval
    # (length g * 2^{floor(log2 t)}) cannot reach t.
    lo = max(1, t - kind.g * (1 << (t.bit_length() - 1)))
    out = []
    for s in range(lo, t + 1):
        iv = starts_at(kind, s)[0]
        if t in iv:
            out.append(iv)
    return out


def partition_gc(target: Interval) -> list[Interval]:
    """Partition target into consecutive GC members, greedily from the left.

    Each block is the longest GC interval that starts at the current position
    and fits inside the target. Block lengths double up to a single peak and
    at least halve afterwards.
    """
    blocks = []
    pos = target.start
    while pos <= target.end:
        k = min(_val2(pos), (target.end - pos + 1).bit_length() - 1)
        blocks.append(Interval(pos, pos + (1 << k) - 1))
        pos += 1 << k
    return blocks


def partition_ds(target: Interval, g: int = 1) -> list[Interval]:
    """Partition target into prefixes of DS(g) intervals, greedily from the left.

    Blocks have length 2^{u(pos)} regardless of g (the last one truncated at
    target.end), so each is a prefix of the DS(g) interval starting at its
    start and lengths at least double between consecutive blocks, except
    possibly at the final truncated pair. Taking full g*2^{u(pos)} blocks
    instead would break the doubling law for even g (consecutive equal
    lengths), which is what the regret decomposition relies on.
    """
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    blocks = []
    pos = target.start
    while pos <= target.end:
        end = min(pos + (1 << _val2(pos)) - 1, target.end)
        blocks.append(Interval(pos, end))
        pos = end + 1
    return blocks
