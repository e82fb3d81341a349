import math

import numpy as np
import pytest

from cbce.intervals import (
    DataStreaming,
    GeometricCovering,
    Interval,
    active,
    partition_ds,
    partition_gc,
    starts_at,
)

GC = GeometricCovering()


def iv(a, b):
    return Interval(a, b)


class TestInterval:
    def test_basic(self):
        assert len(iv(3, 6)) == 4
        assert 5 in iv(3, 6)
        assert 7 not in iv(3, 6)

    def test_rejects_bad_bounds(self):
        with pytest.raises(ValueError):
            iv(0, 3)
        with pytest.raises(ValueError):
            iv(4, 3)


class TestStartsAt:
    def test_gc_t6(self):
        assert starts_at(GC, 6) == [iv(6, 6), iv(6, 7)]

    def test_ds_u12(self):
        # largest power of two dividing 12 is 4
        assert starts_at(DataStreaming(1), 12) == [iv(12, 15)]

    def test_ds_g2_t1(self):
        assert starts_at(DataStreaming(2), 1) == [iv(1, 2)]

    def test_rejects_t0(self):
        with pytest.raises(ValueError):
            starts_at(GC, 0)

    def test_ds_unique_start_per_time(self):
        for g in (1, 2, 3):
            for t in range(1, 300):
                assert len(starts_at(DataStreaming(g), t)) == 1


class TestActive:
    def test_gc_t1(self):
        assert active(GC, 1) == [iv(1, 1)]

    def test_gc_t6(self):
        assert active(GC, 6) == [iv(4, 7), iv(6, 6), iv(6, 7)]

    def test_ds_t7(self):
        assert active(DataStreaming(1), 7) == [iv(4, 7), iv(6, 7), iv(7, 7)]

    def test_gc_cardinality_law(self):
        for t in range(1, 3000):
            assert len(active(GC, t)) == int(math.log2(t)) + 1

    def test_active_intervals_contain_t_and_exist_in_schedule(self):
        rng = np.random.default_rng(7)
        for kind in (GC, DataStreaming(1), DataStreaming(2)):
            for t in rng.integers(1, 5000, size=40):
                t = int(t)
                for j in active(kind, t):
                    assert t in j
                    assert starts_at(kind, j.start).count(j) == 1


def is_gc_member(j: Interval) -> bool:
    size = len(j)
    return size & (size - 1) == 0 and j.start % size == 0 and j.start >= size


def satisfies_double_then_halve(lengths: list[int]) -> bool:
    """Some split point gives doubling before it and halving after it,
    with the boundary pair itself unconstrained."""
    n = len(lengths)
    for split in range(n):
        pre = all(lengths[i + 1] >= 2 * lengths[i] for i in range(split))
        post = all(lengths[i + 1] * 2 <= lengths[i] for i in range(split + 1, n - 1))
        if pre and post:
            return True
    return n <= 1


def assert_consecutive_cover(blocks: list[Interval], target: Interval):
    assert blocks[0].start == target.start
    assert blocks[-1].end == target.end
    for a, b in zip(blocks, blocks[1:]):
        assert b.start == a.end + 1


class TestPartitionGC:
    def test_singleton(self):
        assert partition_gc(iv(1, 1)) == [iv(1, 1)]

    def test_5_12(self):
        assert partition_gc(iv(5, 12)) == [iv(5, 5), iv(6, 7), iv(8, 11), iv(12, 12)]

    def test_gc_member_is_itself(self):
        assert partition_gc(iv(4, 7)) == [iv(4, 7)]

    def test_random_sweep(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            a = int(rng.integers(1, 1 << 14))
            b = int(rng.integers(a, 1 << 14))
            target = iv(a, b)
            blocks = partition_gc(target)
            assert_consecutive_cover(blocks, target)
            assert all(is_gc_member(j) for j in blocks)
            assert satisfies_double_then_halve([len(j) for j in blocks])


class TestPartitionDS:
    def test_3_6(self):
        assert partition_ds(iv(3, 6), 1) == [iv(3, 3), iv(4, 6)]

    def test_exact_ds_interval(self):
        assert partition_ds(iv(8, 15), 1) == [iv(8, 15)]

    def test_g2_blocks_are_prefixes_of_longer_ds_intervals(self):
        # blocks keep the g=1 lengths; g only lengthens the covering intervals
        assert partition_ds(iv(1, 3), 2) == [iv(1, 1), iv(2, 3)]
        assert starts_at(DataStreaming(2), 1)[0] == iv(1, 2)
        assert starts_at(DataStreaming(2), 2)[0] == iv(2, 5)

    def test_final_pair_may_break_ratio(self):
        lengths = [len(j) for j in partition_ds(iv(3, 10), 1)]
        assert lengths == [1, 4, 3]

    def test_random_sweep(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            g = int(rng.integers(1, 4))
            a = int(rng.integers(1, 1 << 14))
            b = int(rng.integers(a, 1 << 14))
            target = iv(a, b)
            blocks = partition_ds(target, g)
            assert_consecutive_cover(blocks, target)
            for j in blocks:
                full = starts_at(DataStreaming(g), j.start)[0]
                assert j.start == full.start and j.end <= full.end  # prefix
            lengths = [len(j) for j in blocks]
            for i in range(len(lengths) - 2):  # final pair exempt
                assert lengths[i + 1] >= 2 * lengths[i]
