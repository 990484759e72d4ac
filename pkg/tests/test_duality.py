import pytest

from exactstat.duality import (
    FermiFromBose,
    canonical_duality_suite,
    fermi_weight_from_bose,
    fermi_weight_subset_sum,
    grand_duality_check,
    micro_duality_suite,
    require,
)
from exactstat.errors import ConsistencyError
from exactstat.microcanonical import WeightTable
from exactstat.spectrum import evenly_spaced_band, from_levels, magnetic_example

from support import random_spectra


def test_from_bose_examples():
    s = magnetic_example(22)
    assert fermi_weight_from_bose(s, 0, 0) == 1
    assert fermi_weight_from_bose(s, 3, 22) == 21
    rebuild = FermiFromBose(s)
    for U in range(23):
        assert rebuild.weight(1, U) == s.degeneracy(U)


def test_subset_sum_counts_states_not_levels():
    s = from_levels([(0, 2), (1, 1), (2, 3)])
    direct = WeightTable(s, "fermi")
    for N in range(6):
        for U in range(10):
            assert fermi_weight_subset_sum(s, N, U) == direct.weight(N, U)


def test_subset_sum_limit():
    with pytest.raises(ValueError):
        fermi_weight_subset_sum(magnetic_example(22), 3, 22)


def test_micro_suite_random():
    for s in random_spectra(20, seed=17):
        require(micro_duality_suite(s, 5, 20))


def test_canonical_examples():
    s = from_levels([(0, 1), (1, 1)])
    reports = canonical_duality_suite(s, 2)
    by = {(r.name, r.params["N"]): r for r in reports}
    assert all(r.passed for r in reports)
    assert by["fermi_from_bose_canonical", 2].left.to_text() == "q"


def test_canonical_random():
    for s in random_spectra(8, seed=23, max_levels=4, max_energy=6):
        require(canonical_duality_suite(s, 6))


def test_canonical_needs_positive_range():
    with pytest.raises(ValueError):
        canonical_duality_suite(evenly_spaced_band(2), 0)


def test_grand_examples():
    reports = grand_duality_check(from_levels([(1, 1)]), 0.5, 0.5)
    assert reports[0].left == pytest.approx(5 / 4)
    assert reports[0].right == pytest.approx(5 / 4)
    reports = grand_duality_check(from_levels([(0, 1)]), 0.4, 0.5)
    assert reports[1].right == pytest.approx(1.0)
    assert all(r.passed for r in grand_duality_check(evenly_spaced_band(6), 0.3, 0.5))


def test_grand_rejects_divergence():
    with pytest.raises(ValueError):
        grand_duality_check(evenly_spaced_band(2), 1.2, 0.5)


def test_require_raises():
    r = micro_duality_suite(evenly_spaced_band(2), 1, 1)
    r[0].passed = False
    with pytest.raises(ConsistencyError):
        require(r)


def test_report_json():
    r = canonical_duality_suite(evenly_spaced_band(1), 1)[0].to_json()
    assert set(r) == {"identity", "params", "left", "right", "pass"}
