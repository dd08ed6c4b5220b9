import math

import pytest

import lusin


def test_counterexample():
    a, b, diff = lusin.counterexample()
    assert a == pytest.approx(-2.0, abs=1e-10)
    assert b == pytest.approx(2.0, abs=1e-10)
    assert diff == pytest.approx(4.0, abs=1e-10)


def test_log_preset():
    mu = lusin.Modulus.log_preset()
    assert mu(0.0) == 0.0
    assert mu(math.exp(-1)) == pytest.approx(1.0, abs=1e-12)
    assert mu(1.0) == pytest.approx(math.e, abs=1e-12)
    assert str(lusin.Modulus.parse("power:0.5")).startswith("power")


def test_group_and_gauge():
    p = lusin.HPoint(1.0, 2.0, 3.0)
    q = lusin.HPoint(-0.5, 0.25, 1.0)
    assert lusin.koranyi_dist(p, q) == pytest.approx(lusin.koranyi_dist(q, p), abs=1e-12)
    assert (p * p.inverse()) == lusin.HPoint()
    assert lusin.koranyi_norm(p.dilate(2.0)) == pytest.approx(2.0 * lusin.koranyi_norm(p), rel=1e-12)


def test_cc_bounds():
    lower, upper, _ = lusin.cc_dist_bounds(lusin.HPoint(), lusin.HPoint(1.0, 0.0, 0.0))
    assert lower == pytest.approx(1.0)
    assert upper <= 1.001
    lower, upper, _ = lusin.cc_dist_bounds(lusin.HPoint(), lusin.HPoint(0.0, 0.0, 1.0))
    assert lower <= upper
    assert upper == pytest.approx(math.sqrt(math.pi), rel=0.02)


def test_holder_transfer_linear():
    r = lusin.holder_transfer(lambda x, y: x, lambda x, y: (1.0, 0.0))
    assert r["alpha_u"] == pytest.approx(1.0, abs=0.05)
    assert r["alpha_phi"] == pytest.approx(0.5, abs=0.05)
    assert r["passed"]


def test_construct_certify_replay(tmp_path):
    out = tmp_path / "run"
    res = lusin.construct("zero", out=out)
    assert res["exit_code"] == 0
    f = lusin.load_function(out / "function.lfn")
    assert f.terms == 0
    assert f.value([0.3, 0.4]) == 0.0
    report = lusin.certify(out, pairs=1000, pinch_samples=100)
    assert all(c["passed"] for c in report["checks"])
    code, identical = lusin.replay(out / "manifest.json", tmp_path / "again")
    assert code == 0
    assert identical


def test_invalid_request_raises_or_reports(tmp_path):
    with pytest.raises(ValueError):
        lusin.Modulus.parse("pwl:bad")
    res = lusin.construct("no-such-field", out=tmp_path / "x")
    assert res["exit_code"] == 2
    assert not (tmp_path / "x" / "function.lfn").exists()
