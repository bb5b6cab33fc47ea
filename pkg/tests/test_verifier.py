import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmconcave.harmonic import GridSpec
from hmconcave.report import CheckReport, Verdict
from hmconcave.set_algebra import Interval, IntervalArray
from hmconcave.svf import SetValuedFunction, make_family, real_am_convex_check, svf_union
from hmconcave.verifier import (CheckConfig, check_bd_approx, check_chain_t_to_m, check_dyadic,
                                check_kuhn, check_m_concave, check_m_midconcave,
                                check_scaling_continuity, check_strong_m_concave,
                                check_strong_m_midconcave, check_strong_m_t_concave, closure_suite,
                                falsify, run_check)

SMALL = GridSpec(15, 15, 9)
BOX_X = make_family("box", "x")
BOX_1 = make_family("box", "1")
INV2 = make_family("symmetric", "1/x^2")


def cfg(**kw):
    kw.setdefault("grid", SMALL)
    return CheckConfig(**kw)


def test_config_validation():
    for bad in [dict(m=0), dict(m=1.5), dict(c=-1), dict(t_fixed=1.0), dict(tol=-1),
                dict(dyadic_depth=0), dict(jobs=0)]:
        with pytest.raises(ValueError):
            CheckConfig(**bad)


def test_m_concave_controls():
    assert check_m_concave(BOX_X, cfg(m=0.5)).verdict is Verdict.PASS
    rep = check_m_concave(BOX_1, cfg(m=0.5))
    assert rep.verdict is Verdict.FAIL
    assert rep.worst_margin == pytest.approx(0.5)
    assert rep.witness.t == 0.0


def test_midconcave_margin():
    rep = check_m_midconcave(BOX_1, cfg(m=0.5))
    assert rep.worst_margin == pytest.approx(0.25)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["x", "x^2", "1/x", "sqrt", "exp(x/4)", "log(x) + 1"]),
       st.sampled_from([0.25, 0.5, 0.75, 1.0]))
def test_box_family_agrees_with_scalar_oracle(expr, m):
    # [0, f] with f >= 0: the lower endpoints always match, so the set margin
    # is max(0, scalar margin)
    if expr == "sqrt":
        expr = "exp(log(x)/2)"
    F = make_family("box", expr, (0.5, 8.0))
    c = cfg(m=m)
    rep = check_m_concave(F, c)
    oracle = real_am_convex_check(expr, 1.0, m, SMALL, (0.5, 8.0))
    assert rep.verdict is oracle.verdict
    assert rep.worst_margin == pytest.approx(max(0.0, oracle.worst_margin), abs=1e-12)


def test_vectorized_path_equals_per_point_path():
    F = make_family("shifted", "x^2", w=0.5)
    c = cfg(m=0.75, c=0.1)
    fast = check_strong_m_concave(F, c)
    slow = check_strong_m_concave(svf_union(F, F), c)
    assert fast.worst_margin == pytest.approx(slow.worst_margin, abs=1e-12)
    a, b = np.array(fast.pairs), np.array(slow.pairs)
    assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_jobs_do_not_change_results():
    F = make_family("shifted", "1/x", w=0.25)
    one = check_strong_m_concave(F, cfg(m=0.5, c=0.3))
    four = check_strong_m_concave(F, cfg(m=0.5, c=0.3, jobs=4))
    assert one.to_json() == four.to_json()


def test_dyadic_depth_one_is_midconcavity():
    c = cfg(m=0.5, c=0.2, dyadic_depth=1)
    assert check_dyadic(BOX_X, c).pairs == check_strong_m_midconcave(BOX_X, c).pairs


def test_dyadic_levels():
    rep = check_dyadic(BOX_X, cfg(m=0.5, dyadic_depth=5))
    assert rep.verdict is Verdict.PASS
    assert [ln.name for ln in rep.links] == [f"n={n}" for n in range(1, 6)]
    assert rep.stats["dyadics"] == 31


def test_strong_modulus_identity_and_monotonicity():
    c1 = check_strong_m_concave(INV2, cfg(c=1.0))
    assert c1.verdict is Verdict.PASS and abs(c1.worst_margin) <= 1e-9
    assert check_strong_m_concave(INV2, cfg(c=1.001)).verdict is Verdict.FAIL
    margins = [check_strong_m_concave(INV2, cfg(c=c)).worst_margin for c in (0, 0.25, 0.5, 1, 2)]
    assert margins == sorted(margins)


def test_t_concave_needs_t():
    with pytest.raises(ValueError):
        check_strong_m_t_concave(BOX_X, cfg())
    assert check_strong_m_t_concave(BOX_X, cfg(t_fixed=0.3)).verdict is Verdict.PASS


def test_kuhn_cases():
    holds = check_kuhn(INV2, cfg(c=1.0, t_fixed=0.3))
    assert holds.verdict is Verdict.PASS and holds.extra["implication"] == "holds"
    vacuous = check_kuhn(BOX_1, cfg(m=0.5, t_fixed=0.3))
    assert vacuous.verdict is Verdict.PASS and vacuous.extra["implication"] == "vacuous"
    assert vacuous.worst_margin == -math.inf
    assert vacuous.link("conclusion").informational


def test_chain_links_measured_independently():
    rep = check_chain_t_to_m(BOX_X, cfg(m=0.5, t_fixed=0.3))
    assert [ln.name for ln in rep.links] == ["L1", "L2", "L3", "L3'", "E"]
    l3p = rep.link("L3'")
    assert l3p.verdict is Verdict.FAIL and l3p.witness.x > 0
    assert rep.link("E").verdict is Verdict.PASS
    assert rep.verdict is Verdict.PASS


def test_bd_epsilon_sequence():
    F = make_family("box", "x")
    rep = check_bd_approx(F, cfg(dyadic_depth=8), 1 / 3)
    eps = rep.extra["eps"]
    assert rep.verdict is Verdict.PASS and rep.extra["non_increasing"]
    assert all(b <= a + 1e-12 for a, b in zip(eps, eps[1:]))
    assert eps[-1] < 1e-2
    half = check_bd_approx(F, cfg(dyadic_depth=3), 0.5)
    assert half.extra["eps"][0] <= 1e-9
    assert check_bd_approx(BOX_1, cfg(m=0.5), 1 / 3).verdict is Verdict.FAIL


def test_falsify_seeded():
    c = cfg(m=0.5, seed=7, sample_budget=300)
    a, b = falsify(BOX_1, c, "m-concave"), falsify(BOX_1, c, "m-concave")
    assert a.to_json() == b.to_json()
    assert a.verdict is Verdict.FAIL and a.worst_margin >= 0.45
    assert falsify(BOX_X, c, "m-concave").verdict is Verdict.PASS
    mid = falsify(BOX_1, c, "m-midconcave")
    assert mid.witness.t == 0.5 and mid.worst_margin == pytest.approx(0.25)


def test_closure_suite_links():
    rep = closure_suite(BOX_X, BOX_X, cfg(m=0.5))
    names = [ln.name for ln in rep.links]
    assert names == ["premise:F", "premise:G", "sum", "scale(2)", "scale(-1)", "product",
                     "union", "cross"]
    assert rep.verdict is Verdict.PASS
    assert rep.link("product").informational
    assert rep.extra["precondition_fraction"] == 1.0


def test_closure_vacuous_when_premise_fails():
    rep = closure_suite(BOX_1, BOX_X, cfg(m=0.5))
    assert rep.verdict is Verdict.PASS and not rep.extra["premises_hold"]


class _Broken(SetValuedFunction):
    """[0, x] except for a reversed value beyond x = 4."""

    @property
    def domain(self):
        return Interval(0.5, 8.0)

    def bounds(self, xs):
        xs = np.asarray(xs, dtype=float)
        return IntervalArray(np.where(xs > 4, 1e9, 0.0), xs)

    def value(self, x):
        b = self.bounds(np.array([x]))
        return Interval(b.lo[0], b.hi[0])


def test_invalid_values_give_error_report():
    rep = check_m_concave(_Broken(), cfg())
    assert rep.verdict is Verdict.ERROR and math.isnan(rep.worst_margin)
    assert "invalid value" in rep.witness.detail


def test_scaling_continuity():
    rep = check_scaling_continuity(Interval(-2, 3), [1.0, 0.5])
    assert rep.verdict is Verdict.PASS and rep.stats["equality_pairs"] == 2


def test_run_check_dispatch():
    assert run_check("m-concave", [BOX_X], cfg()).name == "m-concave"
    with pytest.raises(ValueError):
        run_check("closure", [BOX_X], cfg())
    with pytest.raises(ValueError):
        run_check("nope", [BOX_X], cfg())


def test_report_json_round_trip():
    rep = check_kuhn(BOX_1, cfg(m=0.5, t_fixed=0.3))
    again = CheckReport.from_dict(json.loads(rep.to_json()))
    assert again.to_json() == rep.to_json()
    with pytest.raises(ValueError):
        CheckReport.from_dict({"name": "x"})
