"""Acceptance criteria, one test per criterion (summary printed by conftest)."""

import json
import math
import time

import numpy as np
import pytest

from hmconcave import set_algebra as sa
from hmconcave.cli import main
from hmconcave.expr import BinOp, ExprSyntaxError, Neg, Num, Var, eval_expr, parse_expr, to_text
from hmconcave.harmonic import GridSpec, harmonic_m_point
from hmconcave.report import Verdict
from hmconcave.set_algebra import Interval
from hmconcave.svf import make_family, real_am_convex_check
from hmconcave.verifier import (CheckConfig, check_bd_approx, check_chain_t_to_m, check_dyadic,
                                check_m_concave, check_strong_m_concave,
                                check_strong_m_midconcave, closure_suite, falsify)

N = 10_000
WIDE = (0.1, 10.0)


def _random_intervals(rng, n):
    a = rng.uniform(-100, 100, (2, n))
    return [Interval(lo, hi) for lo, hi in zip(a.min(0), a.max(0))]


def _agree(p, q, rel=1e-12):
    s = max(1.0, abs(p.lo), abs(p.hi), abs(q.lo), abs(q.hi))
    return abs(p.lo - q.lo) <= rel * s and abs(p.hi - q.hi) <= rel * s


def test_c01_set_algebra_laws():
    rng = np.random.default_rng(1)
    A, B, C = (_random_intervals(rng, N) for _ in range(3))
    lams = rng.uniform(-5, 5, N)
    bad = 0
    for a, b, c, lam in zip(A, B, C, lams):
        ok = _agree(sa.mink_sum(a, b), sa.mink_sum(b, a))
        ok &= _agree(sa.mink_sum(sa.mink_sum(a, b), c), sa.mink_sum(a, sa.mink_sum(b, c)))
        ok &= _agree(sa.scale(lam, sa.mink_sum(a, b)), sa.mink_sum(sa.scale(lam, a), sa.scale(lam, b)))
        prod_l = sa.mink_product(a, sa.mink_sum(b, c))
        prod_r = sa.mink_sum(sa.mink_product(a, b), sa.mink_product(a, c))
        ok &= sa.inclusion_margin(prod_l, prod_r) <= 1e-12 * max(1.0, prod_r.magnitude)
        # monotonicity: a <= hull(a, b) implies a + c <= hull(a, b) + c
        h = Interval(min(a.lo, b.lo), max(a.hi, b.hi))
        ok &= sa.is_subset_eps(a, h).holds and sa.is_subset_eps(sa.mink_sum(a, c), sa.mink_sum(h, c)).holds
        bad += not ok
    assert bad == 0


def test_c02_radstrom_cancellation():
    rng = np.random.default_rng(2)
    A1, A2, C = (_random_intervals(rng, N) for _ in range(3))
    results = [sa.radstrom_check(a1, a2, c) for a1, a2, c in zip(A1, A2, C)]
    assert all(r.consistent for r in results)
    assert sum(r.premise for r in results) > 0


def test_c03_harmonic_geometry():
    xs = np.linspace(*WIDE, 65)
    ys = np.linspace(*WIDE, 65)
    X, Y, T = np.meshgrid(xs, ys, np.linspace(0, 1, 33), indexing="ij")
    for m in (0.1, 0.5, 0.9):
        assert np.all(np.abs(harmonic_m_point(X[..., 0], Y[..., 0], 0.0, m) - m * X[..., 0])
                      <= 1e-12 * m * X[..., 0])
        assert np.all(np.abs(harmonic_m_point(X[..., 0], Y[..., 0], 1.0, m) - Y[..., 0])
                      <= 1e-12 * Y[..., 0])
        # at t = 1 both sides equal y exactly; the two formulas may round apart
        hm, h1 = harmonic_m_point(X, Y, T, m), harmonic_m_point(X, Y, T, 1.0)
        assert np.count_nonzero(hm - h1 > 1e-12 * h1) == 0


def test_c04_hm_am_positive_control():
    F = make_family("box", "x", WIDE)
    grid = GridSpec(50, 50, 21)
    for m in np.round(np.arange(1, 11) / 10, 1):
        cfg = CheckConfig(m=float(m), grid=grid, tol=1e-9)
        rep = check_m_concave(F, cfg)
        assert rep.verdict is Verdict.PASS and rep.stats["violations"] == 0, m
        oracle = real_am_convex_check("x", 1.0, float(m), grid, WIDE, 1e-9)
        assert oracle.verdict is Verdict.PASS and oracle.stats["violations"] == 0, m


def test_c05_negative_control_and_falsify():
    F = make_family("box", "1")
    cfg = CheckConfig(m=0.5, sample_budget=1000, seed=0)
    assert check_m_concave(F, cfg).verdict is Verdict.FAIL
    rep = falsify(F, cfg, "m-midconcave")
    assert rep.verdict is Verdict.FAIL
    assert rep.witness.t == 0.5 and rep.worst_margin >= 0.2
    assert rep.stats["first_violation"] < 1000


def test_c06_strong_modulus_identity():
    F = make_family("symmetric", "1/x^2")
    exact = check_strong_m_concave(F, CheckConfig(m=1.0, c=1.0))
    assert exact.verdict is Verdict.PASS and abs(exact.worst_margin) <= 1e-9
    assert check_strong_m_concave(F, CheckConfig(m=1.0, c=1 + 1e-3)).verdict is Verdict.FAIL
    margins = [check_strong_m_concave(F, CheckConfig(m=1.0, c=c)).worst_margin
               for c in (0.0, 0.25, 0.5, 1.0)]
    assert margins == sorted(margins)


def test_c07_closure_suite():
    F = make_family("box", "x")
    for m in (0.5, 1.0):
        product = set()
        for seed in (0, 1, 2):
            rep = closure_suite(F, F, CheckConfig(m=m, seed=seed, tol=1e-9, lambdas=(2.0, -1.0)))
            for name in ("sum", "scale(2)", "scale(-1)", "union", "cross"):
                assert rep.link(name).verdict is Verdict.PASS, (m, name)
            product.add((rep.link("product").verdict, rep.link("product").margin))
        assert len(product) == 1


def test_c08_dyadic_all_levels():
    F = make_family("box", "x", WIDE)
    cfg = CheckConfig(m=0.5, c=0.0, dyadic_depth=8, grid=GridSpec(50, 50, 21))
    start = time.perf_counter()
    rep = check_dyadic(F, cfg)
    elapsed = time.perf_counter() - start
    assert rep.verdict is Verdict.PASS and rep.stats["violations"] == 0
    assert rep.stats["dyadics"] == 255
    assert elapsed < 30
    one = CheckConfig(m=0.5, c=0.0, dyadic_depth=1, grid=GridSpec(50, 50, 21))
    assert check_dyadic(F, one).pairs == check_strong_m_midconcave(F, one).pairs


def test_c09_chain_instrument():
    rep = check_chain_t_to_m(make_family("box", "x"), CheckConfig(m=0.5, t_fixed=0.3))
    l3p = rep.link("L3'")
    assert l3p.verdict is Verdict.FAIL and l3p.witness.x > 0
    assert rep.link("E").verdict is Verdict.PASS


def test_c10_bernstein_doetsch_epsilon():
    F = make_family("box", "x", (0.5, 8.0))
    rep = check_bd_approx(F, CheckConfig(m=1.0, c=0.0, dyadic_depth=8), 1 / 3)
    eps = rep.extra["eps"]
    assert len(eps) == 8 and rep.extra["non_increasing"]
    assert eps[-1] < 1e-2
    half = check_bd_approx(F, CheckConfig(m=1.0, c=0.0, dyadic_depth=8), 0.5)
    assert half.extra["eps"][0] <= 1e-9


def test_c11_scaling_continuity():
    rng = np.random.default_rng(11)
    A = _random_intervals(rng, N)
    ts, ss = rng.uniform(-3, 3, (2, N))
    worst = max(sa.hausdorff(sa.scale(t, a), sa.scale(s, a)) - abs(t - s) * a.magnitude
                for a, t, s in zip(A, ts, ss))
    assert worst <= 1e-9
    a = Interval(-2, 3)
    assert sa.hausdorff(sa.scale(1.0, a), sa.scale(0.5, a)) == 1.5 == 0.5 * a.magnitude


def test_c12_suite_determinism(tmp_path, capsys):
    cfg = tmp_path / "suite.json"
    cfg.write_text(json.dumps({"grid": "9,9,5", "depth": 4, "seed": 3}))
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    codes = [main(["suite", "--config", str(cfg), "--out", str(p)]) for p in outs]
    capsys.readouterr()
    assert codes[0] == codes[1]
    assert outs[0].read_bytes() == outs[1].read_bytes()


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return Var() if rng.random() < 0.5 else Num(float(rng.choice([0.5, 1.0, 2.0, 3.0, 1.75])))
    kind = rng.integers(0, 6)
    if kind == 5:
        return Neg(_random_tree(rng, depth - 1))
    if kind == 4:
        return BinOp("^", _random_tree(rng, depth - 1), Num(float(rng.integers(1, 4))))
    op = "+-*/"[kind]
    return BinOp(op, _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))


def _direct(e, x):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_direct(e.operand, x)
    a, b = _direct(e.left, x), _direct(e.right, x)
    return {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b,
            "/": lambda: a / b, "^": lambda: a ** b}[e.op]()


def test_c13_parser_round_trip():
    rng = np.random.default_rng(13)
    done = 0
    while done < 100:
        tree = _random_tree(rng, 4)
        x = float(rng.uniform(0.5, 8))
        try:
            want = _direct(tree, x)
        except ZeroDivisionError:
            continue
        if not math.isfinite(want):
            continue
        text = to_text(tree)
        again = parse_expr(text)
        assert again == tree, text
        assert to_text(again) == text
        got = eval_expr(again, x)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want)), text
        done += 1
    malformed = ["", "1 +", "(x", "x)", "2 $ 3", "sin(x)", "exp x", "1 2", "*x", "x^"]
    for text in malformed:
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr(text)
        assert isinstance(err.value.position, int) and "offset" in str(err.value)
