"""Smoke tests for the python module against known exact values."""

import json
from fractions import Fraction

import pytest

import keanelab as kl


@pytest.fixture(scope="module")
def minimal():
    return kl.generate("minimal", 6)


def test_version():
    assert kl.__version__


def test_generate_minimal(minimal):
    assert minimal[:3] == [(33, 10), (198, 65), (1188, 395)]


def test_generate_theorem4():
    assert kl.generate("theorem4", 2) == [(81, 9), (531441, 6561)]


def test_validate(minimal):
    rep = kl.validate(minimal)
    assert rep["fully_valid"]
    t4 = kl.validate(kl.generate("theorem4", 3))
    assert t4["ratios_ok"] and not t4["n1_ok"]


def test_keane_matrix():
    mat = kl.keane_matrix(33, 10)
    assert [row[1] for row in mat] == [0, 33, 10, 1]
    assert mat[3] == [1, 1, 1, 1]


def test_column_mass_and_bounds(minimal):
    assert kl.column_mass(minimal, 2, 2) == 9439
    lo, hi = kl.mass_bounds(minimal, 2)
    assert lo == 6534 and hi == 11616
    assert lo <= 9439 <= hi


def test_lengths_and_weights(minimal):
    lens = [kl.frac(v) for v in kl.length_vector(minimal, 2)]
    assert lens == [Fraction(65, 759), Fraction(32, 759), Fraction(596, 759), Fraction(66, 759)]
    w2 = kl.level_weights(minimal, 1, 3, 2)
    assert kl.frac(w2[1]) == Fraction(235224, 339769)


def test_iet_apply_formula():
    lengths = ["1/10", "1/5", "3/10", "2/5"]
    perm = [4, 2, 1, 3]
    assert kl.frac(kl.iet_apply(lengths, perm, "1/20")) == Fraction(19, 20)
    assert kl.frac(kl.iet_apply_inverse(lengths, perm, "19/20")) == Fraction(1, 20)
    steps = kl.itinerary(lengths, perm, "1/20", 2)
    assert steps[0] == (1, "1/20") and steps[1] == (4, "19/20")


def test_induce_whole_space():
    ind = kl.induce(["1/10", "1/5", "3/10", "2/5"], [4, 2, 1, 3], "0", "1")
    assert [c["return_time"] for c in ind["cells"]] == [1, 1, 1, 1]
    assert ind["visit_matrix"] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_landing_pattern(minimal):
    rep = kl.verify_landing_pattern(minimal, 4, 2)
    assert rep["holds"]
    assert rep["actual"] == kl.keane_matrix(198, 65)
    assert rep["spatial_permutation"] == "(4132)"


def test_claims(minimal):
    l2 = kl.verify_claim("L2", minimal, 1, 3)
    assert l2["holds"] and l2["lhs"] == "235224/339769"
    dom = kl.verify_claim("DOM", minimal, 1, 3)
    assert dom["holds"]


def test_ergodicity(minimal):
    gap = kl.ergodicity_gap(minimal, 2)
    assert gap["freq2"] == "6534/9439"
    assert gap["freq3"] == "32/759"
    assert gap["freq2_ok"] and gap["freq3_ok"]


def test_geometry_and_separation(minimal):
    g = kl.orbit_geometry(minimal, 4, 1)
    assert g["images"] == 44 and g["disjoint"] and g["gaps_ok"]
    sep = kl.separation_check(minimal, 4, 1)
    assert sep["holds"]


def test_cover_and_conditions(minimal):
    cov = kl.cover_terms(minimal, 6, "1", 1)
    assert all(t["le_one"] for t in cov["terms"])
    assert not cov["decay_flag"]
    c1 = kl.generate("corollary1", 5)
    cond = kl.check_theorem2_condition(c1, "2", 2)
    assert cond["holds"]
    assert kl.theorem4_proof_threshold(8) == 5


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        kl.keane_matrix(0, 5)
    with pytest.raises(ValueError):
        kl.verify_claim("L1", [(33, 10), (198, 65)], 0, 2)


def test_run_config_deterministic(tmp_path, minimal):
    cfg = json.dumps(
        {
            "sequence": {"kind": "minimal", "depth": 4},
            "K": 4,
            "command": "verify",
            "claims": ["L1", "L2", "DOM", "MASS"],
            "levels": [1, 2],
        }
    )
    code1, _ = kl.run_config(cfg, str(tmp_path / "a"))
    code2, _ = kl.run_config(cfg, str(tmp_path / "b"), "both", 4)
    assert code1 == 0 and code2 == 0
    a = (tmp_path / "a" / "verify.json").read_bytes()
    b = (tmp_path / "b" / "verify.json").read_bytes()
    assert a == b
    envelope = json.loads(a)
    assert envelope["config"]["K"] == 4
    assert all(r["holds"] for r in envelope["results"]["reports"])


def test_run_config_rejects_unknown_keys(tmp_path):
    cfg = json.dumps({"sequence": {"kind": "minimal", "depth": 4}, "K": 4, "command": "verify", "claims": ["L2"], "zzz": 1})
    with pytest.raises(ValueError):
        kl.run_config(cfg, str(tmp_path))
