from fractions import Fraction

import pytest

import imc2

RUNNING_A = "[s1]\na,[s1]->[s1]\nb,[s1]->[s2]\nb,[s2]->[s2]\n[s2]"
RUNNING_B = "[q1]\nb,[q1]->[q2]\nb,[q2]->[q2]\n[q2]"


@pytest.fixture
def pair():
    return imc2.parse_ba(RUNNING_A), imc2.parse_ba(RUNNING_B)


def test_parse_and_emit(pair):
    a, _ = pair
    assert a.num_states == 2
    assert a.alphabet == ["a", "b"]
    assert imc2.emit_ba(a) == RUNNING_A
    assert ("s1", "b", "s2") in a.transitions()
    assert imc2.parse_hoa(imc2.emit_hoa(a)).num_states == 2


def test_errors_map_to_python_exceptions():
    with pytest.raises(imc2.FormatError):
        imc2.parse_ba("")
    with pytest.raises(imc2.ParameterError):
        imc2.required_samples(2.0, 0.5)
    assert issubclass(imc2.GuardError, imc2.Imc2Error)


def test_membership_and_normalize(pair):
    a, b = pair
    assert imc2.member(a, ["a"], ["b"])
    assert not imc2.member(b, ["a"], ["b"])
    assert imc2.member_text(a, ":b")
    assert imc2.normalize(["a", "a"], ["a", "b", "a"]) == (["a"], ["a", "a", "b"])


def test_trim_and_emptiness():
    empty = imc2.parse_ba("[p]\na,[p]->[q]\n[p]")
    assert imc2.is_empty(empty)
    assert imc2.trim(empty) is None


def test_inclusion(pair):
    a, b = pair
    assert imc2.required_samples(0.001, 0.02) == 3911
    hit = imc2.check_inclusion(a, b, k=3, seed=7)
    assert hit["verdict"] == "not_included"
    assert hit["counterexample"] == (["a"], ["b"])
    miss = imc2.check_inclusion(a, b, k=2, epsilon=0.1)
    assert miss == {"verdict": "no_counterexample", "samples": 38}


def test_oracle(pair):
    a, b = pair
    stats = imc2.exact_pz(a, b, 3, "1/2")
    assert stats["p_z"] == Fraction(1, 8)
    assert stats["q_z"] == Fraction(7, 8)
    assert stats["lassos"] == 6
    assert sum(p for _, p in imc2.lasso_distribution(a, 3)) == 1
    assert imc2.exact_inclusion(a, b) == (["a"], ["b"])
    assert imc2.exact_inclusion(b, a) is None
    assert imc2.sufficient_k(1) == 2 * 4 * 2 + 1


def test_sampling_and_generation(pair):
    a, _ = pair
    samples = imc2.sample(a, k=2, seed=3, count=20)
    assert {s["run"] for s in samples} <= {"s1 a s1", "s1 b s2 b s2"}
    g = imc2.random_nba(states=6, letters=2, seed=5)
    assert g.trimmed
    assert g == imc2.random_nba(states=6, letters=2, seed=5)
