import math
import os
from pathlib import Path

import pytest

import gradval

CORPUS = Path(os.environ.get("GRADVAL_CORPUS", Path(__file__).resolve().parents[2] / "corpus"))


def load(name):
    return gradval.load(CORPUS / f"{name}.toml")


def test_matrix_value():
    s = load("m2-full")
    v = gradval.Valuation(s.subring)
    assert v.value(s.element("25*e11 + 1/5*e12 + 3*e22")) == "[e11]: (e11, -1)"
    assert v.gamma_is_group()


def test_element_arithmetic_matches_matrices():
    s = load("m2-full")
    a = s.element("e12")
    b = s.element("e21")
    assert a * b == s.element("e11")
    assert (b * a).degree == "e22"
    assert (a * a).is_zero()
    x = s.element("2*e11 + e12 + e22")
    inv = x.g_inverse()
    assert x * inv == s.element("e11 + e22")


def test_patterns():
    s = load("m2-full")
    r = s.subring
    assert r.is_valid() and r.is_g_total() and r.is_g_stable() and r.is_g_valuation_ring()
    assert s.element("e11 + 5*e12") in r
    assert s.element("1/5*e12") not in r
    m = r.positives()
    assert m.bounds == {"e11": 1, "e12": 1, "e21": 1, "e22": 1}


def test_hand_built_subring():
    q = load("m2-full").skewfield
    inf = math.inf
    t = gradval.subring(q, {"e11": 0, "e12": -inf, "e21": inf, "e22": 0})
    assert t.is_valid() and t.is_g_total() and t.is_g_stable()
    assert t.bounds["e21"] == inf
    u = gradval.subring(q, {"e11": 0, "e12": -inf, "e21": inf, "e22": -inf})
    assert u.is_valid() and not u.is_g_stable()


def test_gvalex_gamma_not_a_group():
    v = gradval.Valuation(load("gvalex").subring)
    assert not v.gamma_is_group()
    assert len(v.gamma_idempotents) > 1


def test_check_report():
    report = gradval.check(load("quaternion"), seed=3)
    assert report["schema"] == 1
    assert report["verdict"] == "pass"
    assert {c["id"] for c in report["checks"]} <= set(gradval.all_checks())


def test_reproduce_examples():
    for name in gradval.examples():
        assert gradval.reproduce(name, CORPUS)["verdict"] == "pass", name


def test_errors_carry_codes():
    with pytest.raises(gradval.GradvalError) as e:
        gradval.reproduce("nope", CORPUS)
    assert e.value.code == "UnknownExample"
    with pytest.raises(gradval.GradvalError) as e:
        gradval.parse('[field]\nkind = "rationals"\n[groupoid]\nkind = "delta"\nn = 2\n'
                      '[twist]\nalpha = [["e12", "e21", "0"]]\n')
    assert e.value.code == "ValidationError"
