from math import comb

import pytest

from exactstat.canonical import CanonicalContext
from exactstat.even_spaced import (
    BandParams,
    bose_band_recurrence,
    bose_band_weight,
    fermi_band_weight,
    gaussian_partition_function,
    micro_identity_suite,
    occupancy_ladder_formal,
    occupancy_ladder_numeric,
    occupancy_recursion_canonical,
    partitions_at_most,
    restricted_partition_count,
    unbounded_cutoff,
    unbounded_limit,
)
from exactstat.microcanonical import WeightTable
from exactstat.oracle import enumerate_weight
from exactstat.qseries import QSeries, RationalFunction
from exactstat.spectrum import evenly_spaced_band


def test_params():
    p = BandParams(6, 3)
    assert p.P == 4 and p.U_min == 3 and p.added_energy(8) == 5


def test_restricted_partitions():
    assert all(restricted_partition_count(B, N, 0) == 1 for B in range(5) for N in range(5))
    assert restricted_partition_count(6, 3, 5) == 5
    assert restricted_partition_count(2, 2, 2) == 2
    assert restricted_partition_count(3, 2, -1) == 0


def test_fermi_band_examples():
    assert fermi_band_weight(6, 3, 3) == 1
    assert fermi_band_weight(6, 3, 8) == 4
    assert fermi_band_weight(2, 2, 2) == 1 == enumerate_weight(evenly_spaced_band(2), "fermi", 2, 2)
    assert fermi_band_weight(2, 4, 6) == 0


def test_band_weights_match_engine():
    for B in range(7):
        s = evenly_spaced_band(B)
        tb, tf = WeightTable(s, "bose"), WeightTable(s, "fermi")
        for N in range(5):
            for U in range(N * B + 2):
                assert bose_band_weight(B, N, U) == tb.weight(N, U)
                assert fermi_band_weight(B, N, U) == tf.weight(N, U)


def test_identity_suite_small_sweep():
    cache = {}
    for B in range(6):
        for N in range(4):
            for U in range(N * B + 1):
                bad = [c for c in micro_identity_suite(B, N, U, cache) if not c.passed]
                assert not bad, bad[0]


def test_identity_suite_examples():
    names = {c.name for c in micro_identity_suite(6, 3, 5)}
    assert names == {"bose_shift", "bose_ladder", "fermi_shift", "fermi_lowest_level", "fermi_ladder"}
    assert all(c.passed for c in micro_identity_suite(6, 3, 8))
    assert any(c.params[-1] == -1 for c in micro_identity_suite(6, 3, 8) if c.name == "fermi_ladder")


def test_gaussian_examples():
    assert gaussian_partition_function(2, 2, "bose") == QSeries([1, 1, 2, 1, 1])
    assert gaussian_partition_function(2, 2, "fermi") == QSeries([0, 1, 1, 1])
    for B in range(5):
        for N in range(5):
            assert gaussian_partition_function(B, N, "bose").value(1) == comb(B + N, N)
    with pytest.raises(ValueError):
        gaussian_partition_function(2, 4, "fermi")


def test_gaussian_matches_generic_and_is_symmetric():
    for B in range(6):
        s = evenly_spaced_band(B)
        cb, cf = CanonicalContext(s, "bose"), CanonicalContext(s, "fermi")
        for N in range(5):
            Zb = gaussian_partition_function(B, N, "bose")
            assert Zb == cb.partition_function(N)
            assert all(Zb[u] == Zb[N * B - u] for u in range(N * B + 1))
            assert bose_band_recurrence(B, N) == Zb
            if N <= B + 1:
                assert gaussian_partition_function(B, N, "fermi") == cf.partition_function(N)


def test_ladder_examples():
    n0 = occupancy_ladder_formal(1, 1, "fermi")[0]
    assert n0 == RationalFunction(QSeries.one(), QSeries([1, 1]))
    for stats in ("bose", "fermi"):
        ladder = occupancy_recursion_canonical(5, 3, stats, 0.7)
        assert sum(ladder) == pytest.approx(3, abs=1e-12)


def test_ladder_matches_generic():
    for B in range(5):
        s = evenly_spaced_band(B)
        for stats in ("bose", "fermi"):
            c = CanonicalContext(s, stats)
            for N in range(1, 4):
                if stats == "fermi" and N > B + 1:
                    continue
                formal = occupancy_ladder_formal(B, N, stats)
                numeric = occupancy_ladder_numeric(B, N, stats, 0.45)
                for k in range(B + 1):
                    assert formal[k] == c.occupancy(N, k)
                    assert numeric[k] == pytest.approx(c.occupancy(N, k, 0.45), abs=1e-12)


def test_unbounded_examples():
    assert unbounded_limit(1, "bose", 10) == QSeries([1] * 10, cutoff=10)
    assert unbounded_limit(2, "bose", 10)[4] == 3
    for N in range(1, 5):
        b = unbounded_limit(N, "bose", 30)
        f = unbounded_limit(N, "fermi", 30)
        assert f == b.shift(N * (N - 1) // 2).truncate(30)
        assert all(b[u] == partitions_at_most(N, u) for u in range(30))


def test_unbounded_cutoff_grows_with_q():
    assert unbounded_cutoff(3, 0.3) < unbounded_cutoff(3, 0.5) < unbounded_cutoff(3, 0.7)
