import math
from fractions import Fraction

import pytest

from exactstat.microcanonical import ChargelessWeightTable, WeightTable, chargeless_occupancy, entropy_micro
from exactstat.oracle import enumerate_chargeless_counts, enumerate_table
from exactstat.spectrum import evenly_spaced_band, from_levels, magnetic_example

from support import random_spectra


@pytest.fixture(scope="module")
def mag():
    s = magnetic_example(22)
    return WeightTable(s, "bose"), WeightTable(s, "fermi")


def test_magnetic(mag):
    bose, fermi = mag
    assert bose.weight(3, 22) == 34
    assert fermi.weight(3, 22) == 21
    assert fermi.weight_energy_recursion(3, 22) == 21
    assert bose.occupancy(3, 22, 10) == Fraction(12, 34)
    assert fermi.occupancy(3, 22, 10) == Fraction(6, 21)
    assert bose.occupancy_step(3, 22, 10) == Fraction(12, 34)


def test_entropy(mag):
    bose, fermi = mag
    assert entropy_micro(bose, 3, 22) == pytest.approx(math.log(34))
    assert entropy_micro(fermi, 3, 22) == pytest.approx(math.log(21))
    assert entropy_micro(bose, 0, 0) == 0
    with pytest.raises(ValueError):
        entropy_micro(bose, 1, 3)


def test_small_examples():
    assert WeightTable(evenly_spaced_band(2), "fermi").weight(2, 2) == 1
    assert WeightTable(evenly_spaced_band(6), "bose").weight_energy_recursion(3, 5) == 5
    assert WeightTable(evenly_spaced_band(2), "bose").occupancy_step(2, 2, 0) == Fraction(1, 2)
    s = from_levels([(1, 1), (4, 3)])
    t = WeightTable(s, "bose")
    assert [t.weight_energy_recursion(1, u) for u in range(6)] == [0, 1, 0, 0, 3, 0]
    assert t.weight(-1, 3) == 0 and t.weight(2, -1) == 0 and t.weight(0, 0) == 1


def test_unknown_level(mag):
    with pytest.raises(ValueError):
        mag[0].occupancy(3, 22, 3)


def test_oracle_equivalence_and_sum_rules():
    for s in random_spectra(25, seed=11):
        for stats in ("bose", "fermi"):
            W_or, M_or = enumerate_table(s, stats, 4, 20)
            t = WeightTable(s, stats)
            for N in range(5):
                for U in range(21):
                    W = t.weight(N, U)
                    assert W == W_or.get((N, U), 0)
                    assert t.weight_energy_recursion(N, U) == W
                    occ = t.occupancies(N, U)
                    if W:
                        assert sum(occ.values()) == N
                        assert sum(e * n for e, n in occ.items()) == U
                        for e, n in occ.items():
                            assert n == Fraction(M_or[N, U][e], W)
                            assert t.occupancy_step(N, U, e) == n
                    else:
                        assert all(n == 0 for n in occ.values())


def test_fermi_below_bose():
    for s in random_spectra(10, seed=5):
        b, f = WeightTable(s, "bose"), WeightTable(s, "fermi")
        for N in range(5):
            for U in range(25):
                assert f.weight(N, U) <= b.weight(N, U)


def test_chargeless_examples():
    s = from_levels([(1, 1), (2, 1)])
    b, f = ChargelessWeightTable(s, "bose"), ChargelessWeightTable(s, "fermi")
    assert b.weight(3) == 2 and f.weight(3) == 1
    assert b.weight(0) == 1
    assert chargeless_occupancy(b, 3, 1) == 2
    assert chargeless_occupancy(f, 3, 2) == 1
    assert ChargelessWeightTable(from_levels([(2, 1)]), "bose").occupancy(3, 2) == 0


def test_chargeless_rejects_bose_zero_level():
    with pytest.raises(ValueError):
        ChargelessWeightTable(evenly_spaced_band(3), "bose")


def test_chargeless_oracle_and_sum_rule():
    for s in random_spectra(15, seed=8, max_levels=4):
        for stats in ("bose", "fermi"):
            if stats == "bose" and s.min_energy == 0:
                continue
            t = ChargelessWeightTable(s, stats)
            for U in range(16):
                W, M = enumerate_chargeless_counts(s, stats, U)
                assert t.weight(U) == W
                if W:
                    occ = t.occupancies(U)
                    assert sum(e * n for e, n in occ.items()) == U
                    for e in s.energies:
                        assert occ[e] == Fraction(M[e], W)


def test_fermionic_zero_level_doubles_empty_weight():
    t = ChargelessWeightTable(from_levels([(0, 2), (1, 1)]), "fermi")
    assert t.weight(0) == 4
    assert t.occupancy(1, 0) == 1
