"""Grid and random-search checks of harmonic m-concavity properties.

Every check reduces to set inclusions ``A <= B`` measured by the signed
margin of :func:`set_algebra.inclusion_margin`; a check FAILs when its worst
margin exceeds ``tol``. Harmonic points that leave the function's domain are
skipped and counted, never scored.

Interval-valued functions go through a vectorized kernel on endpoint arrays;
union- and box-valued ones fall back to per-point set algebra.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import set_algebra as sa
from .expr import ExprError
from .harmonic import (GridSpec, harmonic_m_point, in_domain, interior_dyadics,
                       nearest_dyadic, sample_positive, t_values)
from .report import CheckReport, Link, Verdict, Witness, verdict_for
from .set_algebra import DEFAULT_TOL, Interval, IntervalArray
from .svf import INTERVAL, PointEvaluationError, SetValuedFunction, svf_cross, svf_product, svf_scale, svf_sum, svf_union


@dataclass(frozen=True)
class CheckConfig:
    m: float = 1.0
    c: float = 0.0
    t_fixed: float | None = None
    grid: GridSpec = GridSpec()
    tol: float = DEFAULT_TOL
    eps: float = 0.0
    dyadic_depth: int = 8
    seed: int = 0
    sample_budget: int = 1000
    lambdas: tuple[float, ...] = (2.0, -1.0)
    jobs: int = 1

    def __post_init__(self):
        if not 0 < self.m <= 1:
            raise ValueError(f"m must lie in (0, 1], got {self.m}")
        if self.c < 0:
            raise ValueError(f"c must be nonnegative, got {self.c}")
        if self.t_fixed is not None and not 0 < self.t_fixed < 1:
            raise ValueError(f"t must lie in (0, 1), got {self.t_fixed}")
        if self.tol < 0 or self.eps < 0:
            raise ValueError("tol and eps must be nonnegative")
        if self.dyadic_depth < 1:
            raise ValueError("dyadic depth must be at least 1")
        if self.sample_budget < 0 or self.jobs < 1:
            raise ValueError("sample budget must be >= 0 and jobs >= 1")
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))

    def echo(self) -> dict:
        d = asdict(self)
        d["grid"] = str(self.grid)
        d["lambdas"] = list(self.lambdas)
        return d


class _PointError(Exception):
    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(message)


def _radius(x, y, t, m, c):
    return c * m * t * (1 - t) * ((x - y) / (x * y)) ** 2


def _bounds(F: SetValuedFunction, pts: np.ndarray, index: np.ndarray) -> IntervalArray:
    b = F.bounds(pts)
    bad = np.flatnonzero(~b.valid())
    if bad.size:
        i = bad[0]
        raise _PointError(int(index[i]), f"invalid value [{b.lo[i]}, {b.hi[i]}] at {pts[i]!r}")
    return b


def _kernel(F, X, Y, T, m, c, eps) -> np.ndarray:
    """Margins of ``F(h) + r B <= t F(y) + m (1-t) F(x)`` at flat points; NaN where skipped."""
    dom = F.domain
    H = harmonic_m_point(X, Y, T, m)
    inside = in_domain(H, dom)
    margins = np.full(X.shape, np.nan)
    idx = np.flatnonzero(inside)
    x, y, t = X[inside], Y[inside], T[inside]
    h = np.clip(H[inside], dom.lo, dom.hi)
    r = _radius(x, y, t, m, c)
    if F.kind == INTERVAL:
        fh, fx, fy = _bounds(F, h, idx), _bounds(F, x, idx), _bounds(F, y, idx)
        rhs = fy.scale(t) + fx.scale(m * (1 - t))
        margins[inside] = fh.inflate(r).margin_in(rhs) - eps
        return margins
    try:
        vh, vx, vy = F.values(h), F.values(x), F.values(y)
    except PointEvaluationError as exc:
        raise _PointError(int(idx[exc.position]), str(exc)) from None
    out = margins[inside]
    for j in range(len(idx)):
        lhs = sa.inflate(vh[j], r[j])
        rhs = sa.mink_sum(sa.scale(t[j], vy[j]), sa.scale(m * (1 - t[j]), vx[j]))
        out[j] = sa.inclusion_margin(lhs, rhs) - eps
    margins[inside] = out
    return margins


def _sweep(F, X, Y, T, m, c, eps, jobs=1) -> np.ndarray:
    """Run the kernel over flat point arrays, split into ordered chunks."""
    if jobs <= 1 or X.size < 2 * jobs:
        return _kernel(F, X, Y, T, m, c, eps)
    bounds = np.linspace(0, X.size, jobs + 1).astype(int)
    chunks = list(zip(bounds[:-1], bounds[1:]))

    def run(chunk):
        a, b = chunk
        try:
            return _kernel(F, X[a:b], Y[a:b], T[a:b], m, c, eps)
        except _PointError as exc:
            return _PointError(exc.index + a, str(exc))

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(run, chunks))
    for p in parts:
        if isinstance(p, _PointError):
            raise p
    return np.concatenate(parts)


def _detail(F, x, y, t, m, c) -> str:
    try:
        h = harmonic_m_point(x, y, t, m)
        h = min(max(h, F.domain.lo), F.domain.hi)
        lhs = sa.inflate(F.value(h), float(_radius(x, y, t, m, c)))
        rhs = sa.mink_sum(sa.scale(t, F.value(y)), sa.scale(m * (1 - t), F.value(x)))
        return f"h={h:.17g} lhs={lhs} rhs={rhs}"
    except (ExprError, ValueError) as exc:
        return str(exc)


def _error_report(name, F, exc: _PointError, X, Y, T) -> CheckReport:
    i = exc.index
    w = Witness(float(X.flat[i]), None if Y is None else float(Y.flat[i]),
                None if T is None else float(T.flat[i]), str(exc))
    return CheckReport(name, Verdict.ERROR, math.nan, w, extra={"svf": F.label})


def _grid(F, cfg: CheckConfig):
    return sample_positive(F.domain, cfg.grid.nx), sample_positive(F.domain, cfg.grid.ny)


def _pair_rows(xs, ys, margins3) -> list[tuple[float, float, float]]:
    rows = []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            col = margins3[i, j]
            col = col[~np.isnan(col)]
            if col.size:
                rows.append((float(x), float(y), float(col.max())))
    return rows


def _summarize(margins, tol):
    """Worst margin, its flat index (first on ties), and evaluation counts."""
    evaluated = ~np.isnan(margins)
    n_eval = int(evaluated.sum())
    if n_eval == 0:
        return -math.inf, None, n_eval, 0
    i = int(np.nanargmax(margins))
    return float(margins.flat[i]), i, n_eval, int(np.count_nonzero(margins[evaluated] > tol))


def _grid_check(name, F, cfg: CheckConfig, ts, c) -> CheckReport:
    xs, ys = _grid(F, cfg)
    ts = np.asarray(ts, dtype=float)
    X, Y, T = np.meshgrid(xs, ys, ts, indexing="ij")
    try:
        margins = _sweep(F, X.ravel(), Y.ravel(), T.ravel(), cfg.m, c, cfg.eps, cfg.jobs)
    except _PointError as exc:
        return _error_report(name, F, exc, X, Y, T)
    margins = margins.reshape(X.shape)
    worst, i, n_eval, violations = _summarize(margins, cfg.tol)
    verdict = verdict_for(worst, cfg.tol)
    witness = None
    if verdict is Verdict.FAIL:
        x, y, t = float(X.flat[i]), float(Y.flat[i]), float(T.flat[i])
        witness = Witness(x, y, t, _detail(F, x, y, t, cfg.m, c))
    return CheckReport(
        name, verdict, worst, witness,
        stats={"grid": [len(xs), len(ys), len(ts)], "points": int(margins.size),
               "evaluated": n_eval, "skipped": int(margins.size) - n_eval,
               "violations": violations},
        pairs=_pair_rows(xs, ys, margins),
        extra={"svf": F.label, "m": cfg.m, "c": c},
    )


def check_m_concave(F: SetValuedFunction, cfg: CheckConfig, ts=None) -> CheckReport:
    """``F(h_m) <= t F(y) + m (1-t) F(x)`` over the x, y, t grid (or the given ``ts``)."""
    ts = t_values(cfg.grid.nt) if ts is None else ts
    return _grid_check("m-concave", F, cfg, ts, 0.0)


def check_m_midconcave(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    return _grid_check("m-midconcave", F, cfg, [0.5], 0.0)


def _require_t(cfg: CheckConfig) -> float:
    if cfg.t_fixed is None:
        raise ValueError("this check needs a fixed t (t_fixed)")
    return cfg.t_fixed


def check_strong_m_t_concave(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    """The strong inclusion with modulus ``cfg.c`` at the single weight ``cfg.t_fixed``."""
    return _grid_check("strong-m-t-concave", F, cfg, [_require_t(cfg)], cfg.c)


def check_strong_m_concave(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    return _grid_check("strong-m-concave", F, cfg, t_values(cfg.grid.nt), cfg.c)


def check_strong_m_midconcave(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    return _grid_check("strong-m-midconcave", F, cfg, [0.5], cfg.c)


def _as_link(name, rep: CheckReport, informational=False, detail="") -> Link:
    return Link(name, rep.verdict, rep.worst_margin, rep.witness, informational, detail)


def check_kuhn(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    """Implication: strong m-t-concavity at ``t_fixed`` gives strong m-midconcavity.

    PASS when the implication is not contradicted on the grid, including the
    vacuous case where the premise already fails.
    """
    premise = check_strong_m_t_concave(F, cfg)
    conclusion = check_strong_m_midconcave(F, cfg)
    name = "kuhn"
    if Verdict.ERROR in (premise.verdict, conclusion.verdict):
        bad = premise if premise.verdict is Verdict.ERROR else conclusion
        return CheckReport(name, Verdict.ERROR, math.nan, bad.witness,
                           [_as_link("premise", premise), _as_link("conclusion", conclusion)],
                           extra={"svf": F.label, "implication": "error"})
    vacuous = premise.verdict is Verdict.FAIL
    links = [_as_link("premise", premise, detail=f"t={cfg.t_fixed}"),
             _as_link("conclusion", conclusion, informational=vacuous, detail="t=0.5")]
    if vacuous:
        status, verdict, worst, witness = "vacuous", Verdict.PASS, -math.inf, None
    else:
        verdict, worst, witness = conclusion.verdict, conclusion.worst_margin, conclusion.witness
        status = "holds" if verdict is Verdict.PASS else "violated"
    return CheckReport(name, verdict, worst, witness, links,
                       stats={"premise": premise.stats, "conclusion": conclusion.stats},
                       pairs=conclusion.pairs,
                       extra={"svf": F.label, "implication": status, "m": cfg.m, "c": cfg.c})


def _link_from(name, margins, coords, tol, informational=False, detail="") -> Link:
    worst, i, n_eval, violations = _summarize(margins, tol)
    verdict = verdict_for(worst, tol)
    witness = None
    if verdict is Verdict.FAIL:
        X, Y = coords
        witness = Witness(float(X.flat[i]), None if Y is None else float(Y.flat[i]), None,
                          f"margin={worst:.17g}")
    detail = detail or f"evaluated={n_eval} violations={violations}"
    return Link(name, verdict, worst, witness, informational, detail)


def check_chain_t_to_m(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    """Measure each inclusion of the fixed-t to m chain separately.

    Links (``r`` the strong radius with m = 1, ``m r`` the one with m)::

        L1   F(h_m) + m r B  <=  F(h_1) + r B
        L2   F(h_1) + r B    <=  t F(y) + (1-t) F(x)
        L3   t F(y) + (1-t) F(x)  <=  t F(y) + m (1-t) F(x)
        L3'  F(x)  <=  m F(x)
        E    F(h_m) + m r B  <=  t F(y) + m (1-t) F(x)

    The report verdict is that of E; the others are measurements.
    """
    if F.kind != INTERVAL:
        raise TypeError("the chain instrument needs an interval-valued function")
    t, m, c = _require_t(cfg), cfg.m, cfg.c
    dom = F.domain
    xs, ys = _grid(F, cfg)
    X, Y = (a.ravel() for a in np.meshgrid(xs, ys, indexing="ij"))
    T = np.full(X.shape, t)
    Hm, H1 = harmonic_m_point(X, Y, T, m), harmonic_m_point(X, Y, T, 1.0)
    in_m, in_1 = in_domain(Hm, dom), in_domain(H1, dom)
    idx = np.arange(X.size)
    try:
        fx, fy = _bounds(F, X, idx), _bounds(F, Y, idx)
        fhm = _bounds(F, np.clip(Hm, dom.lo, dom.hi), idx)
        fh1 = _bounds(F, np.clip(H1, dom.lo, dom.hi), idx)
        fxs = _bounds(F, xs, np.arange(xs.size))
    except _PointError as exc:
        return _error_report("chain-t-to-m", F, exc, X, Y, T)
    r1, rm = _radius(X, Y, T, 1.0, c), _radius(X, Y, T, m, c)
    left_m, left_1 = fhm.inflate(rm), fh1.inflate(r1)
    mid = fy.scale(T) + fx.scale(1 - T)
    target = fy.scale(T) + fx.scale(m * (1 - T))

    def masked(v, mask):
        return np.where(mask, v, np.nan)

    coords = (X, Y)
    shape = (len(xs), len(ys), 1)
    e_margins = masked(left_m.margin_in(target), in_m) - cfg.eps
    links = [
        _link_from("L1", masked(left_m.margin_in(left_1), in_m & in_1) - cfg.eps, coords, cfg.tol),
        _link_from("L2", masked(left_1.margin_in(mid), in_1) - cfg.eps, coords, cfg.tol),
        _link_from("L3", mid.margin_in(target) - cfg.eps, coords, cfg.tol),
        _link_from("L3'", fxs.margin_in(fxs.scale(m)) - cfg.eps, (xs, None), cfg.tol),
        _link_from("E", e_margins, coords, cfg.tol),
    ]
    e = links[-1]
    witness = e.witness
    if witness is not None:
        witness = Witness(witness.x, witness.y, t, _detail(F, witness.x, witness.y, t, m, c))
    n_skip = int(np.isnan(e_margins).sum())
    return CheckReport("chain-t-to-m", e.verdict, e.margin, witness, links,
                       stats={"grid": [len(xs), len(ys), 1], "points": int(X.size),
                              "skipped": n_skip},
                       pairs=_pair_rows(xs, ys, e_margins.reshape(shape)),
                       extra={"svf": F.label, "t": t, "m": m, "c": c})


def check_dyadic(F: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    """Strong inclusion at every interior dyadic ``k / 2**n`` with ``n <= dyadic_depth``.

    One link per level ``n`` covering the dyadics that first appear there.
    """
    xs, ys = _grid(F, cfg)
    links, levels = [], []
    n_total = n_eval_total = violations_total = 0
    for n, ts in interior_dyadics(cfg.dyadic_depth):
        X, Y, T = np.meshgrid(xs, ys, ts, indexing="ij")
        try:
            margins = _sweep(F, X.ravel(), Y.ravel(), T.ravel(), cfg.m, cfg.c, cfg.eps, cfg.jobs)
        except _PointError as exc:
            return _error_report("dyadic", F, exc, X, Y, T)
        margins = margins.reshape(X.shape)
        worst, i, n_eval, violations = _summarize(margins, cfg.tol)
        verdict = verdict_for(worst, cfg.tol)
        witness = None
        if verdict is Verdict.FAIL:
            x, y, t = float(X.flat[i]), float(Y.flat[i]), float(T.flat[i])
            witness = Witness(x, y, t, _detail(F, x, y, t, cfg.m, cfg.c))
        links.append(Link(f"n={n}", verdict, worst, witness, detail=f"dyadics={len(ts)}"))
        levels.append(margins)
        n_total += margins.size
        n_eval_total += n_eval
        violations_total += violations
    worst_link = max(links, key=lambda ln: ln.margin)  # first level wins ties
    all_margins = np.concatenate(levels, axis=2)
    return CheckReport(
        "dyadic", worst_link.verdict, worst_link.margin, worst_link.witness, links,
        stats={"grid": [len(xs), len(ys)], "dyadics": 2**cfg.dyadic_depth - 1,
               "points": n_total, "evaluated": n_eval_total,
               "skipped": n_total - n_eval_total, "violations": violations_total},
        pairs=_pair_rows(xs, ys, all_margins),
        extra={"svf": F.label, "m": cfg.m, "c": cfg.c, "depth": cfg.dyadic_depth},
    )


def check_bd_approx(F: SetValuedFunction, cfg: CheckConfig, t_target: float) -> CheckReport:
    """Approximate ``t_target`` by dyadics and measure the slack the limit argument needs.

    At level ``n`` with nearest dyadic ``q`` each grid pair contributes the
    smallest radii making these inclusions true::

        (1) q F(y)          <= t F(y) + e1 B
        (2) m (1-q) F(x)    <= m (1-t) F(x) + e2 B
        (3) r_t B           <= r_q B + e3 B
        (4) F(h_t)          <= F(h_q) + e4 B

    together with the excess ``d`` of the dyadic inclusion at ``q`` itself.
    Chaining them gives ``F(h_t) + r_t B <= t F(y) + m (1-t) F(x) + 4 eps B``
    for ``eps = (e1 + e2 + e3 + e4 + max(d, 0)) / 4``; ``eps(n)`` is the worst
    pair. PASS when the dyadic inclusion holds at every level and ``eps(n)``
    is non-increasing.
    """
    if F.kind != INTERVAL:
        raise TypeError("the dyadic approximation check needs an interval-valued function")
    if not 0 < t_target < 1:
        raise ValueError(f"t_target must lie in (0, 1), got {t_target}")
    m, c, tol = cfg.m, cfg.c, cfg.tol
    dom = F.domain
    xs, ys = _grid(F, cfg)
    X, Y = (a.ravel() for a in np.meshgrid(xs, ys, indexing="ij"))
    t = float(t_target)
    Ht = harmonic_m_point(X, Y, t, m)
    idx = np.arange(X.size)
    try:
        fx, fy = _bounds(F, X, idx), _bounds(F, Y, idx)
        fht = _bounds(F, np.clip(Ht, dom.lo, dom.hi), idx)
    except _PointError as exc:
        return _error_report("bd-approx", F, exc, X, Y, None)
    r_t = _radius(X, Y, t, m, c)
    target = fy.scale(t) + fx.scale(m * (1 - t))
    direct = fht.inflate(r_t).margin_in(target) - cfg.eps

    links, levels = [], []
    worst_premise = -math.inf
    premise_witness = None
    for n in range(1, cfg.dyadic_depth + 1):
        q = nearest_dyadic(t, n).value
        Hq = harmonic_m_point(X, Y, q, m)
        ok = in_domain(Ht, dom) & in_domain(Hq, dom)
        try:
            fhq = _bounds(F, np.clip(Hq, dom.lo, dom.hi), idx)
        except _PointError as exc:
            return _error_report("bd-approx", F, exc, X, Y, None)
        r_q = _radius(X, Y, q, m, c)
        e1 = np.maximum(fy.scale(q).margin_in(fy.scale(t)), 0.0)
        e2 = np.maximum(fx.scale(m * (1 - q)).margin_in(fx.scale(m * (1 - t))), 0.0)
        e3 = np.maximum(r_t - r_q, 0.0)
        e4 = np.maximum(fht.margin_in(fhq), 0.0)
        premise = fhq.inflate(r_q).margin_in(fy.scale(q) + fx.scale(m * (1 - q))) - cfg.eps
        need = (e1 + e2 + e3 + e4 + np.maximum(premise, 0.0)) / 4.0
        need, premise = np.where(ok, need, np.nan), np.where(ok, premise, np.nan)
        if not ok.any():
            eps_n, prem_n, i, i_need = 0.0, -math.inf, 0, 0
        else:
            i, i_need = int(np.nanargmax(premise)), int(np.nanargmax(need))
            eps_n, prem_n = float(need[i_need]), float(premise[i])
        gap = float(np.nanmax(np.where(ok, direct - 4 * need, np.nan))) if ok.any() else -math.inf
        verdict = verdict_for(prem_n, tol)
        witness = None
        if verdict is Verdict.FAIL:
            witness = Witness(float(X[i]), float(Y[i]), q, f"dyadic inclusion fails by {prem_n:.17g}")
            if prem_n > worst_premise:
                premise_witness = witness
        worst_premise = max(worst_premise, prem_n)
        links.append(Link(f"n={n}", verdict, eps_n, witness,
                          detail=f"q={q!r} premise_margin={prem_n!r}"))
        levels.append({"n": n, "q": q, "eps": eps_n, "premise_margin": prem_n,
                       "bound_gap": gap, "skipped": int((~ok).sum()),
                       "eps_at": [float(X[i_need]), float(Y[i_need])]})

    eps_seq = [lv["eps"] for lv in levels]
    increases = [b - a for a, b in zip(eps_seq, eps_seq[1:])]
    worst_increase = max(increases, default=-math.inf)
    non_increasing = worst_increase <= tol
    worst = max(worst_premise, worst_increase)
    verdict = verdict_for(worst, tol)
    witness = premise_witness
    if verdict is Verdict.FAIL and witness is None:
        n_up = increases.index(worst_increase) + 2
        x_up, y_up = levels[n_up - 1]["eps_at"]
        witness = Witness(x_up, y_up, nearest_dyadic(t, n_up).value,
                          f"eps increases at level n={n_up}")
    return CheckReport(
        "bd-approx", verdict, worst, witness, links,
        stats={"grid": [len(xs), len(ys)], "levels": cfg.dyadic_depth},
        extra={"svf": F.label, "m": m, "c": c, "t_target": t, "levels": levels,
               "eps": eps_seq, "non_increasing": non_increasing,
               "direct_margin": float(np.nanmax(np.where(in_domain(Ht, dom), direct, np.nan)))
               if in_domain(Ht, dom).any() else -math.inf},
    )


def check_scaling_continuity(A: Interval, ts, ss=None, tol: float = DEFAULT_TOL) -> CheckReport:
    """``d_H(tA, sA) <= |t - s| max(|lo|, |hi|)`` for all sampled ``(t, s)``."""
    ts = np.asarray(ts, dtype=float)
    ss = ts if ss is None else np.asarray(ss, dtype=float)
    bound_scale = A.magnitude
    worst, wit, equal = -math.inf, None, 0
    for t in ts:
        tA = sa.scale(float(t), A)
        for s in ss:
            d = sa.hausdorff(tA, sa.scale(float(s), A))
            margin = d - abs(t - s) * bound_scale
            if t != s and abs(margin) <= tol:
                equal += 1
            if margin > worst:
                worst, wit = margin, (float(t), float(s), d)
    verdict = verdict_for(worst, tol)
    witness = None
    if verdict is Verdict.FAIL:
        witness = Witness(wit[0], wit[1], None, f"d_H={wit[2]!r}")
    return CheckReport("scaling-continuity", verdict, worst, witness,
                       stats={"pairs": int(ts.size * ss.size), "equality_pairs": equal},
                       extra={"A": [A.lo, A.hi]})


# property name -> (fixed t or None for a free t, whether the modulus c applies)
POINTWISE = {
    "m-concave": (None, False),
    "m-midconcave": (0.5, False),
    "strong-m-t-concave": ("t_fixed", True),
    "strong-m-concave": (None, True),
    "strong-m-midconcave": (0.5, True),
}


def falsify(F: SetValuedFunction, cfg: CheckConfig, prop: str = "m-concave") -> CheckReport:
    """Seeded random search for the worst violation of a pointwise property.

    ``x`` and ``y`` are log-uniform on the domain and ``t`` uniform on [0, 1]
    (or fixed by the property); the worst sample's ``t`` is then refined by a
    step-halving local search.
    """
    if prop not in POINTWISE:
        raise ValueError(f"falsify supports {sorted(POINTWISE)}, got {prop!r}")
    if cfg.sample_budget <= 0:
        raise ValueError("falsify needs a positive sample budget")
    t_fix, strong = POINTWISE[prop]
    if t_fix == "t_fixed":
        t_fix = _require_t(cfg)
    c = cfg.c if strong else 0.0
    dom = F.domain
    rng = np.random.default_rng(cfg.seed)
    n = cfg.sample_budget
    lo = dom.lo
    lx = rng.uniform(math.log(lo), math.log(dom.hi), size=(2, n))
    X, Y = np.clip(np.exp(lx), lo, dom.hi)
    T = np.full(n, float(t_fix)) if t_fix is not None else rng.uniform(0.0, 1.0, n)
    name = f"falsify:{prop}"
    try:
        margins = _sweep(F, X, Y, T, cfg.m, c, cfg.eps, cfg.jobs)
    except _PointError as exc:
        return _error_report(name, F, exc, X, Y, T)
    worst, i, n_eval, violations = _summarize(margins, cfg.tol)
    first = np.flatnonzero(margins > cfg.tol)
    stats = {"samples": n, "evaluated": n_eval, "skipped": n - n_eval,
             "violations": violations,
             "first_violation": int(first[0]) if first.size else None, "refine_evals": 0}
    if i is None:
        return CheckReport(name, Verdict.PASS, worst, stats=stats, extra={"svf": F.label})
    x, y, t = float(X[i]), float(Y[i]), float(T[i])
    if t_fix is None:
        t, worst, stats["refine_evals"] = _refine_t(F, x, y, t, worst, cfg, c)
    verdict = verdict_for(worst, cfg.tol)
    witness = Witness(x, y, t, _detail(F, x, y, t, cfg.m, c)) if verdict is Verdict.FAIL else None
    return CheckReport(name, verdict, worst, witness, stats=stats,
                       extra={"svf": F.label, "m": cfg.m, "c": c, "seed": cfg.seed})


def _refine_t(F, x, y, t, best, cfg, c, steps=40):
    h, evals = 0.125, 0
    for _ in range(steps):
        cands = np.clip(np.array([t - h, t + h]), 0.0, 1.0)
        try:
            ms = _kernel(F, np.full(2, x), np.full(2, y), cands, cfg.m, c, cfg.eps)
        except _PointError:
            ms = np.full(2, np.nan)
        evals += 2
        ms = np.where(np.isnan(ms), -np.inf, ms)
        j = int(np.argmax(ms))
        if ms[j] > best:
            best, t = float(ms[j]), float(cands[j])
        else:
            h /= 2
    return t, best, evals


def _precondition_fraction(F, G, cfg) -> float:
    """Share of grid pairs with F(x), F(y) or G(x), G(y) intersecting."""
    xs, ys = _grid(svf_sum(F, G), cfg)
    X, Y = (a.ravel() for a in np.meshgrid(xs, ys, indexing="ij"))
    fx, fy, gx, gy = F.bounds(X), F.bounds(Y), G.bounds(X), G.bounds(Y)
    meet_f = np.maximum(fx.lo, fy.lo) <= np.minimum(fx.hi, fy.hi)
    meet_g = np.maximum(gx.lo, gy.lo) <= np.minimum(gx.hi, gy.hi)
    return float(np.mean(meet_f | meet_g))


def closure_suite(F: SetValuedFunction, G: SetValuedFunction, cfg: CheckConfig) -> CheckReport:
    """Run the m-concavity check on F + G, lam F, F G, F u G and F x G.

    The product link is informational: its verdict is recorded, not required.
    """
    prem = [check_m_concave(F, cfg), check_m_concave(G, cfg)]
    links = [_as_link("premise:F", prem[0]), _as_link("premise:G", prem[1])]
    items = [("sum", svf_sum(F, G), False, "")]
    for lam in cfg.lambdas:
        items.append((f"scale({lam:g})", svf_scale(lam, F), False,
                      "negative lambda" if lam < 0 else ""))
    frac = None
    if F.kind == INTERVAL and G.kind == INTERVAL:
        frac = _precondition_fraction(F, G, cfg)
    items.append(("product", svf_product(F, G), True,
                  "" if frac is None else f"precondition_fraction={frac!r}"))
    items.append(("union", svf_union(F, G), False, ""))
    items.append(("cross", svf_cross(F, G), False, ""))
    for name, H, info, detail in items:
        links.append(_as_link(name, check_m_concave(H, cfg), info, detail))

    premises_hold = all(p.verdict is Verdict.PASS for p in prem)
    required = [ln for ln in links[2:] if not ln.informational]
    if any(ln.verdict is Verdict.ERROR for ln in links):
        verdict, worst = Verdict.ERROR, math.nan
        witness = next(ln.witness for ln in links if ln.verdict is Verdict.ERROR)
    elif premises_hold:
        top = max(required, key=lambda ln: ln.margin)
        verdict, worst = verdict_for(top.margin, cfg.tol), top.margin
        witness = top.witness
    else:
        verdict, worst, witness = Verdict.PASS, -math.inf, None
    return CheckReport("closure", verdict, worst, witness, links,
                       extra={"svf": [F.label, G.label], "m": cfg.m,
                              "premises_hold": premises_hold,
                              "precondition_fraction": frac})


CHECKS = {
    "m-concave": check_m_concave,
    "m-midconcave": check_m_midconcave,
    "strong-m-t-concave": check_strong_m_t_concave,
    "strong-m-concave": check_strong_m_concave,
    "strong-m-midconcave": check_strong_m_midconcave,
    "kuhn": check_kuhn,
    "chain-t-to-m": check_chain_t_to_m,
    "dyadic": check_dyadic,
    "bd-approx": lambda F, cfg: check_bd_approx(F, cfg, _require_t(cfg)),
}


def run_check(prop: str, svfs, cfg: CheckConfig) -> CheckReport:
    """Dispatch by property name; ``closure`` takes two functions, the rest one."""
    if prop == "closure":
        if len(svfs) != 2:
            raise ValueError("closure needs exactly two functions")
        return closure_suite(svfs[0], svfs[1], cfg)
    if prop not in CHECKS:
        raise ValueError(f"unknown property {prop!r}; choose from {sorted(CHECKS) + ['closure']}")
    if len(svfs) != 1:
        raise ValueError(f"{prop} needs exactly one function")
    return CHECKS[prop](svfs[0], cfg)

