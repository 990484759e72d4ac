import json
from fractions import Fraction

import pytest

from exactstat.spectrum import (
    EnergyLevel,
    Spectrum,
    evenly_spaced_band,
    from_levels,
    harmonic_oscillator,
    load_spectrum,
    magnetic_example,
    save_spectrum,
)


def test_from_levels_identity_grid():
    s = from_levels([(0, 1), (1, 1), (2, 1)])
    assert s.as_dict() == {0: 1, 1: 1, 2: 1}
    assert s.unit == 1


def test_from_levels_rescales_by_lcd():
    s = from_levels([(0.5, 1), (1.0, 2)])
    assert s.as_dict() == {1: 1, 2: 2}
    assert s.unit == Fraction(1, 2)


def test_from_levels_merges_duplicates():
    assert from_levels([(1, 1), (1, 2)]).as_dict() == {1: 3}


def test_from_levels_is_idempotent():
    s = from_levels([(Fraction(1, 3), 2), (Fraction(1, 2), 1), (2, 1)])
    again = from_levels([(lv.energy, lv.degeneracy) for lv in s.levels])
    assert again.as_dict() == s.as_dict()


@pytest.mark.parametrize("pairs", [[], [(-1, 1)], [(1, 0)]])
def test_from_levels_rejects(pairs):
    with pytest.raises(ValueError):
        from_levels(pairs)


def test_magnetic_degeneracies():
    s = magnetic_example(22)
    assert s.degeneracy(10) == 2
    assert s.degeneracy(18) == 2
    assert s.degeneracy(2) == 1
    pairs = sum(1 for k in range(1, 23) for l in range(1, 6) if 2 * k - 1 + l * l <= 22)
    assert s.state_count == pairs


def test_magnetic_rejects_small_cap():
    with pytest.raises(ValueError):
        magnetic_example(1)


def test_oscillator():
    assert set(harmonic_oscillator(1, 5).degeneracies) == {1}
    assert harmonic_oscillator(2, 3).degeneracy(3) == 4
    assert harmonic_oscillator(3, 2).degeneracy(2) == 6
    assert harmonic_oscillator(1, 6).as_dict() == evenly_spaced_band(6).as_dict()


def test_band():
    assert evenly_spaced_band(0).as_dict() == {0: 1}
    assert len(evenly_spaced_band(6)) == 7
    assert evenly_spaced_band(2).as_dict() == {0: 1, 1: 1, 2: 1}


def test_level_invariants():
    with pytest.raises(ValueError):
        EnergyLevel(1, 0)
    with pytest.raises(ValueError):
        EnergyLevel(-1, 1)


def test_json_round_trip(tmp_path):
    s = from_levels([(0.5, 1), (1.5, 3)], label="demo")
    path = tmp_path / "s.json"
    save_spectrum(s, path)
    back = load_spectrum(path)
    assert back == s
    assert json.loads(path.read_text())["levels"] == [{"energy": 1, "g": 1}, {"energy": 3, "g": 3}]


@pytest.mark.parametrize(
    "levels",
    [
        [{"energy": 2, "g": 1}, {"energy": 1, "g": 1}],
        [{"energy": 1, "g": 1}, {"energy": 1, "g": 2}],
    ],
)
def test_json_rejects_unsorted_or_duplicate(levels):
    with pytest.raises(ValueError):
        Spectrum.from_json({"unit": "1", "label": "", "levels": levels})
