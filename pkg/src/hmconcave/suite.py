"""Battery of checks over a family set with recorded expected verdicts."""

from __future__ import annotations

import math
from dataclasses import replace

from .report import CheckReport, Link, Verdict, Witness
from .svf import SetValuedFunction
from .verifier import (CheckConfig, check_bd_approx, check_chain_t_to_m, check_dyadic, check_kuhn,
                       check_m_concave, check_strong_m_midconcave, closure_suite)

DEFAULT_FAMILIES = {
    "x": 'kind=box expr="x" domain=[0.5,8]',
    "zero": 'kind=box expr="0" domain=[0.5,8]',
    "inv2": 'kind=symmetric expr="1/x^2" domain=[0.5,8]',
}
DEFAULT_M = (0.5, 1.0)
DEFAULT_C = (0.0, 1.0)
DEFAULT_T = 0.3
DEFAULT_T_TARGET = 1 / 3

# Checks that do not depend on the modulus run once per (family, m).
PER_M = ("m-concave", "closure", "chain-t-to-m")
PER_C = ("strong-m-midconcave", "kuhn", "dyadic", "bd-approx")
INFORMATIONAL = {"chain-t-to-m"}


def case_key(family: str, m: float, prop: str, c: float | None = None) -> str:
    if c is None:
        return f"{family}/m={m:g}/{prop}"
    return f"{family}/m={m:g}/c={c:g}/{prop}"


def _default_expect() -> dict[str, str]:
    # [0, x] satisfies every c = 0 inclusion (weighted HM <= weighted AM) and
    # every c > 0 one fails on its lower endpoint; {0} behaves the same way.
    # [-1/x^2, 1/x^2] is the equality case of the modulus-1 identity for
    # m = 1 and fails every inclusion for m = 0.5 (x = y already breaks it).
    # Kuhn reports PASS whether the implication holds or is vacuous.
    exp = {}
    for fam in ("x", "zero"):
        for m in DEFAULT_M:
            exp[case_key(fam, m, "m-concave")] = "PASS"
            exp[case_key(fam, m, "closure")] = "PASS"
            for c in DEFAULT_C:
                ok = "PASS" if c == 0 else "FAIL"
                exp[case_key(fam, m, "strong-m-midconcave", c)] = ok
                exp[case_key(fam, m, "kuhn", c)] = "PASS"
                exp[case_key(fam, m, "dyadic", c)] = ok
                exp[case_key(fam, m, "bd-approx", c)] = ok
    for m in DEFAULT_M:
        ok = "PASS" if m == 1 else "FAIL"
        exp[case_key("inv2", m, "m-concave")] = ok
        exp[case_key("inv2", m, "closure")] = "PASS"  # vacuous for m = 0.5
        for c in DEFAULT_C:
            exp[case_key("inv2", m, "strong-m-midconcave", c)] = ok
            exp[case_key("inv2", m, "kuhn", c)] = "PASS"
            exp[case_key("inv2", m, "dyadic", c)] = ok
            exp[case_key("inv2", m, "bd-approx", c)] = ok
    return exp


DEFAULT_EXPECT = _default_expect()


def _run(prop, F, cfg, t_target) -> CheckReport:
    if prop == "m-concave":
        return check_m_concave(F, cfg)
    if prop == "closure":
        return closure_suite(F, F, cfg)
    if prop == "chain-t-to-m":
        return check_chain_t_to_m(F, cfg)
    if prop == "strong-m-midconcave":
        return check_strong_m_midconcave(F, cfg)
    if prop == "kuhn":
        return check_kuhn(F, cfg)
    if prop == "dyadic":
        return check_dyadic(F, cfg)
    if prop == "bd-approx":
        return check_bd_approx(F, cfg, t_target)
    raise ValueError(f"unknown suite property {prop!r}")


def run_suite(families: dict[str, SetValuedFunction], cfg: CheckConfig,
              m_values=DEFAULT_M, c_values=DEFAULT_C, t: float = DEFAULT_T,
              t_target: float = DEFAULT_T_TARGET,
              expect: dict[str, str] | None = None) -> CheckReport:
    """Run every suite case; PASS iff each case with an expectation matches it.

    The worst margin of the aggregate report is the number of mismatched cases.
    """
    if not families:
        raise ValueError("the suite needs at least one family")
    expect = {} if expect is None else expect
    links: list[Link] = []
    mismatches = []
    cases = []
    for fam in families:
        for m in m_values:
            for prop in PER_M:
                cases.append((fam, m, None, prop))
            for c in c_values:
                for prop in PER_C:
                    cases.append((fam, m, c, prop))
    for fam, m, c, prop in cases:
        case_cfg = replace(cfg, m=m, c=0.0 if c is None else c, t_fixed=t)
        key = case_key(fam, m, prop, c)
        rep = _run(prop, families[fam], case_cfg, t_target)
        wanted = expect.get(key)
        informational = wanted is None or prop in INFORMATIONAL
        detail = "" if wanted is None else f"expected={wanted}"
        links.append(Link(key, rep.verdict, rep.worst_margin, rep.witness, informational, detail))
        if not informational and rep.verdict.value != wanted:
            mismatches.append(f"{key}: expected {wanted}, got {rep.verdict.value}")
    verdict = Verdict.FAIL if mismatches else Verdict.PASS
    witness = Witness(math.nan, None, None, mismatches[0]) if mismatches else None
    return CheckReport(
        "suite", verdict, float(len(mismatches)), witness, links,
        stats={"cases": len(cases), "asserted": sum(not ln.informational for ln in links),
               "mismatches": len(mismatches)},
        extra={"mismatches": mismatches, "families": sorted(families),
               "m_values": list(m_values), "c_values": list(c_values),
               "t": t, "t_target": t_target},
    )
