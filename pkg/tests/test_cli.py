import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from exactstat.cli import CSV_HEADER, run
from exactstat.spectrum import evenly_spaced_band, from_levels, magnetic_example, save_spectrum


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, s in {
        "mag22": magnetic_example(22),
        "band4": evenly_spaced_band(4),
        "pair": from_levels([(0, 1), (1, 1)]),
        "photon": from_levels([(1, 1), (2, 2)]),
    }.items():
        paths[name] = str(tmp_path / f"{name}.json")
        save_spectrum(s, paths[name])
    desc = {"mode": "energy-and-particles", "systems": [{"spectrum": "pair.json", "stats": "fermi"}] * 2}
    paths["compound"] = str(tmp_path / "compound.json")
    (tmp_path / "compound.json").write_text(json.dumps(desc))
    return paths


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_contract_examples(files, capsys):
    assert call(capsys, "weight", "--spectrum", files["mag22"], "--stats", "bose", "-N", 3, "-U", 22) == (0, "34\n", "")
    code, out, _ = call(capsys, "occupancy", "--spectrum", files["mag22"], "--stats", "fermi", "-N", 3, "-U", 22, "--level", 10)
    assert (code, out) == (0, "6/21\n")
    code, out, _ = call(capsys, "weight", "--spectrum", files["band4"], "--stats", "fermi", "-N", 0, "-U", 0)
    assert (code, out) == (0, "1\n")


def test_oracle_flag(files, capsys):
    code, out, _ = call(capsys, "weight", "--spectrum", files["mag22"], "--stats", "fermi", "-N", 3, "-U", 22, "--oracle", "--method", "energy")
    assert (code, out) == (0, "21\n")
    code, out, _ = call(capsys, "occupancy", "--spectrum", files["mag22"], "--stats", "bose", "-N", 3, "-U", 22, "--oracle")
    assert code == 0 and "10 12/34" in out


def test_oracle_mismatch_fails_loudly(files, capsys, monkeypatch):
    import exactstat.cli as cli

    monkeypatch.setattr(cli, "enumerate_counts", lambda *a, **k: (35, {}))
    code, _, err = call(capsys, "weight", "--spectrum", files["mag22"], "--stats", "bose", "-N", 3, "-U", 22, "--oracle")
    assert code == 1 and "mismatch" in err


def test_json_round_trip(files, capsys):
    code, out, _ = call(capsys, "occupancy", "--spectrum", files["mag22"], "--stats", "bose", "-N", 3, "-U", 22, "--format", "json")
    data = json.loads(out)
    assert data["command"] == "occupancy" and data["inputs"]["N"] == 3
    occ = {r["energy"]: Fraction(r["n"]) for r in data["result"]}
    assert occ[10] == Fraction(12, 34) and sum(occ.values()) == 3
    code, out, _ = call(capsys, "canonical", "--spectrum", files["band4"], "--stats", "bose", "-N", 3, "--q", 0.4, "--format", "json")
    rep = json.loads(out)["result"]
    assert json.loads(json.dumps(rep)) == rep
    _, text, _ = call(capsys, "canonical", "--spectrum", files["band4"], "--stats", "bose", "-N", 3, "--q", 0.4)
    assert f"U = {rep['U']!r}" in text


def test_sweep_csv(files, capsys):
    code, out, _ = call(
        capsys, "canonical", "--spectrum", files["band4"], "--stats", "fermi", "-N", 2,
        "--T-from", 0.5, "--T-to", 5, "--T-steps", 6, "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "T,q,U,VarU,c,S,occ_0,occ_1,occ_2,occ_3,occ_4"
    rows = list(csv.DictReader(io.StringIO(out)))
    Us = [float(r["U"]) for r in rows]
    assert len(rows) == 6 and Us == sorted(Us)


def test_single_step_sweep(files, capsys):
    _, swept, _ = call(capsys, "canonical", "--spectrum", files["band4"], "--stats", "bose", "-N", 2, "--T-from", 1.5, "--T-to", 3, "--T-steps", 1, "--format", "csv")
    _, single, _ = call(capsys, "canonical", "--spectrum", files["band4"], "--stats", "bose", "-N", 2, "--T", 1.5, "--format", "csv")
    assert swept == single


def test_unbounded_heat_capacity(capsys):
    cols = {}
    for stats in ("bose", "fermi"):
        code, out, _ = call(capsys, "even-spaced", "--stats", stats, "-N", 3, "--unbounded", "--T-from", 0.5, "--T-to", 1.4, "--T-steps", 5, "--format", "csv")
        assert code == 0
        cols[stats] = [float(r["c"]) for r in csv.DictReader(io.StringIO(out))]
    for b, f in zip(cols["bose"], cols["fermi"]):
        assert abs(b - f) <= 1e-8


def test_other_verbs(files, capsys):
    assert call(capsys, "grand", "--spectrum", files["band4"], "--stats", "fermi", "--z", 0.5, "--T", 2)[0] == 0
    code, out, _ = call(capsys, "chargeless", "--spectrum", files["photon"], "--stats", "bose", "-U", 3, "--oracle")
    assert code == 0 and out.startswith("W = 3")
    assert call(capsys, "chargeless", "--spectrum", files["photon"], "--stats", "bose", "--series", "--cutoff", 4)[1] == "1 + q + 3 q^2 + 3 q^3 + O(q^4)\n"
    assert call(capsys, "chargeless", "--spectrum", files["photon"], "--stats", "fermi", "--q", 0.5)[0] == 0
    assert call(capsys, "even-spaced", "--stats", "bose", "-B", 6, "-N", 3, "-U", 5, "--oracle")[1] == "5\n"
    assert call(capsys, "even-spaced", "--stats", "fermi", "-B", 2, "-N", 2, "--polynomial")[1] == "q + q^2 + q^3\n"
    assert call(capsys, "compound", "--descriptor", files["compound"], "-N", 2, "-U", 1)[1] == "4\n"
    assert call(capsys, "oracle", "--spectrum", files["mag22"], "--stats", "fermi", "-N", 3, "-U", 22, "--level", 10)[1] == "6/21\n"


def test_check_identities(files, capsys):
    code, out, _ = call(capsys, "check-identities", "--spectrum", files["band4"], "--N-max", 3, "--U-max", 6, "--z", 0.3, "--q", 0.5)
    data = json.loads(out)
    assert code == 0 and all(r["pass"] for r in data["result"])
    assert {r["identity"] for r in data["result"]} >= {"fermi_from_bose_micro", "alternating_product", "inverse_pair_grand"}


def test_exit_codes(files, capsys, tmp_path):
    assert call(capsys, "weight", "--spectrum", str(tmp_path / "missing.json"), "--stats", "bose", "-N", 1, "-U", 1)[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(capsys, "weight", "--spectrum", bad, "--stats", "bose", "-N", 1, "-U", 1)[0] == 1
    assert call(capsys, "weight", "--spectrum", files["band4"], "--stats", "bose", "-N", 1, "-U", 1, "--bogus")[0] == 2
    assert call(capsys, "canonical", "--spectrum", files["band4"], "--stats", "bose", "-N", 1, "--T-from", 3, "--T-to", 1, "--T-steps", 2)[0] == 2
    assert call(capsys, "grand", "--spectrum", files["band4"], "--stats", "bose", "--z", 2, "--q", 0.5)[0] == 1
    # infeasible inputs are values, not errors
    assert call(capsys, "weight", "--spectrum", files["band4"], "--stats", "fermi", "-N", 9, "-U", 3) == (0, "0\n", "")


def test_csv_header_constant():
    assert CSV_HEADER == ["T", "q", "U", "VarU", "c", "S"]


def test_console_entry(files):
    proc = subprocess.run(
        [sys.executable, "-m", "exactstat", "weight", "--spectrum", files["mag22"], "--stats", "fermi", "-N", "3", "-U", "22"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "21\n"
