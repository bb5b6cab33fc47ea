"""Set-valued functions on positive domains and their combinators.

A function is either a closed form ``x -> [lower(x), upper(x)]`` over a
declared domain, a table of sampled intervals (endpoints interpolated
linearly), or a combinator node: sum, scalar multiple, elementwise product,
union, or Cartesian product of two functions. Interval-valued functions can
be evaluated on whole arrays through :meth:`SetValuedFunction.bounds`.

Also home to the scalar convexity checks used as independent oracles for the
set-valued verifier.
"""

from __future__ import annotations

import csv
import math
import shlex
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import set_algebra as sa
from .expr import BinOp, Expr, ExprError, Neg, Num, evaluate, eval_expr, parse_expr, to_text
from .harmonic import GridSpec, in_domain, sample_positive, t_values
from .report import CheckReport, Verdict, Witness, verdict_for
from .set_algebra import DEFAULT_TOL, Interval, IntervalArray

VALIDATION_POINTS = 257

INTERVAL, UNION, BOX = "interval", "union", "box"


class DomainError(ValueError):
    """Evaluation point outside the function's domain."""


class PointEvaluationError(ValueError):
    """Evaluation failed at ``position`` within a batch of points."""

    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(message)


class SetValuedFunction:
    kind: str = INTERVAL

    @property
    def domain(self) -> Interval:
        raise NotImplementedError

    def value(self, x: float) -> sa.SetValue:
        raise NotImplementedError

    def bounds(self, xs) -> IntervalArray:
        raise NotImplementedError

    def values(self, xs) -> list:
        """Set values at each of ``xs`` (no domain check)."""
        if self.kind == INTERVAL:
            b = self.bounds(xs)
            _raise_invalid(b, xs)
            return [Interval(lo, hi) for lo, hi in zip(b.lo.tolist(), b.hi.tolist())]
        out = []
        for i, x in enumerate(xs):
            try:
                out.append(self.value(float(x)))
            except (ExprError, ValueError) as exc:
                raise PointEvaluationError(i, str(exc)) from None
        return out

    def __call__(self, x: float) -> sa.SetValue:
        d = self.domain
        if not d.lo <= x <= d.hi:
            raise DomainError(f"x={x!r} outside domain {d}")
        return self.value(x)

    def _require_interval(self):
        if self.kind != INTERVAL:
            raise TypeError(f"{self.label} is {self.kind}-valued; no array evaluation")

    @property
    def label(self) -> str:
        return type(self).__name__

    def __add__(self, other):
        return svf_sum(self, other)

    def __rmul__(self, lam):
        return svf_scale(lam, self)


def _raise_invalid(b: IntervalArray, xs):
    bad = np.flatnonzero(~b.valid())
    if bad.size:
        i = int(bad[0])
        raise PointEvaluationError(i, f"invalid value [{b.lo[i]}, {b.hi[i]}] at x={xs[i]!r}")


@dataclass(frozen=True, eq=False)
class ClosedForm(SetValuedFunction):
    lower: Expr
    upper: Expr
    domain_: Interval
    name: str = ""

    def __post_init__(self):
        if self.domain_.lo <= 0:
            raise ValueError(f"domain must lie in (0, inf), got {self.domain_}")
        xs = sample_positive(self.domain_, VALIDATION_POINTS)
        b = self.bounds(xs)
        bad = np.flatnonzero(~b.valid())
        if bad.size:
            i = bad[0]
            raise ValueError(f"{self.label}: invalid interval [{b.lo[i]}, {b.hi[i]}] at x={xs[i]!r}")

    @property
    def domain(self) -> Interval:
        return self.domain_

    @property
    def label(self) -> str:
        return self.name or f"[{to_text(self.lower)}, {to_text(self.upper)}]"

    def value(self, x: float) -> Interval:
        return Interval(eval_expr(self.lower, x), eval_expr(self.upper, x))

    def bounds(self, xs) -> IntervalArray:
        return IntervalArray(evaluate(self.lower, xs), evaluate(self.upper, xs))


@dataclass(frozen=True, eq=False)
class Tabulated(SetValuedFunction):
    xs: tuple[float, ...]
    los: tuple[float, ...]
    his: tuple[float, ...]
    name: str = ""

    def __post_init__(self):
        if not (len(self.xs) == len(self.los) == len(self.his)) or not self.xs:
            raise ValueError("tabulated function needs equally many x, lo, hi samples")
        xs = np.asarray(self.xs, dtype=float)
        if xs[0] <= 0:
            raise ValueError("tabulated x values must be positive")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("tabulated x values must be strictly increasing")
        for x, lo, hi in zip(self.xs, self.los, self.his):
            try:
                Interval(lo, hi)
            except ValueError as exc:
                raise ValueError(f"bad sample at x={x}: {exc}") from None

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or not {"x", "lo", "hi"} <= set(rows[0]):
            raise ValueError(f"{path}: expected a CSV with header x,lo,hi")
        cols = {k: tuple(float(r[k]) for r in rows) for k in ("x", "lo", "hi")}
        return cls(cols["x"], cols["lo"], cols["hi"], name=Path(path).name)

    @property
    def domain(self) -> Interval:
        return Interval(self.xs[0], self.xs[-1])

    @property
    def label(self) -> str:
        return self.name or f"table[{len(self.xs)}]"

    def value(self, x: float) -> Interval:
        b = self.bounds(np.array([x]))
        return Interval(b.lo[0], b.hi[0])

    def bounds(self, xs) -> IntervalArray:
        xs = np.asarray(xs, dtype=float)
        return IntervalArray(np.interp(xs, self.xs, self.los), np.interp(xs, self.xs, self.his))


def _common_domain(*children: SetValuedFunction) -> Interval:
    lo = max(c.domain.lo for c in children)
    hi = min(c.domain.hi for c in children)
    if lo > hi:
        raise ValueError("children have disjoint domains: " + ", ".join(c.label for c in children))
    return Interval(lo, hi)


def _one_dim(*children):
    for c in children:
        if c.kind == BOX:
            raise TypeError(f"{c.label} is box-valued; combine boxes with boxes only")


@dataclass(frozen=True, eq=False)
class _Binary(SetValuedFunction):
    left: SetValuedFunction
    right: SetValuedFunction

    symbol = "?"

    def __post_init__(self):
        _common_domain(self.left, self.right)
        kinds = {self.left.kind, self.right.kind}
        if BOX in kinds and kinds != {BOX}:
            raise TypeError(f"cannot combine {self.left.kind}- and {self.right.kind}-valued functions")

    @property
    def domain(self) -> Interval:
        return _common_domain(self.left, self.right)

    @property
    def kind(self) -> str:
        k = {self.left.kind, self.right.kind}
        return BOX if BOX in k else UNION if UNION in k else INTERVAL

    @property
    def label(self) -> str:
        return f"({self.left.label} {self.symbol} {self.right.label})"


class Sum(_Binary):
    symbol = "+"

    def value(self, x):
        return sa.mink_sum(self.left.value(x), self.right.value(x))

    def bounds(self, xs):
        self._require_interval()
        return self.left.bounds(xs) + self.right.bounds(xs)


class Product(_Binary):
    symbol = "*"

    def value(self, x):
        return sa.mink_product(self.left.value(x), self.right.value(x))

    def bounds(self, xs):
        self._require_interval()
        return self.left.bounds(xs).product(self.right.bounds(xs))


class Union(_Binary):
    symbol = "u"

    def __post_init__(self):
        _one_dim(self.left, self.right)
        super().__post_init__()

    @property
    def kind(self) -> str:
        return UNION

    def value(self, x):
        return sa.union(self.left.value(x), self.right.value(x))

    def values(self, xs):
        return [sa.union(a, b) for a, b in zip(self.left.values(xs), self.right.values(xs))]


class Cross(_Binary):
    symbol = "x"

    def __post_init__(self):
        _common_domain(self.left, self.right)
        for c in (self.left, self.right):
            if c.kind == UNION:
                raise TypeError(f"{c.label} is union-valued; products of unions are not boxes")

    @property
    def kind(self) -> str:
        return BOX

    def value(self, x):
        return sa.cross(self.left.value(x), self.right.value(x))

    def values(self, xs):
        return [sa.cross(a, b) for a, b in zip(self.left.values(xs), self.right.values(xs))]


@dataclass(frozen=True, eq=False)
class Scale(SetValuedFunction):
    lam: float
    child: SetValuedFunction

    @property
    def domain(self) -> Interval:
        return self.child.domain

    @property
    def kind(self) -> str:
        return self.child.kind

    @property
    def label(self) -> str:
        return f"{self.lam:g}*{self.child.label}"

    def value(self, x):
        return sa.scale(self.lam, self.child.value(x))

    def bounds(self, xs):
        self._require_interval()
        return self.child.bounds(xs).scale(self.lam)


def svf_sum(f: SetValuedFunction, g: SetValuedFunction) -> Sum:
    return Sum(f, g)


def svf_scale(lam: float, f: SetValuedFunction) -> Scale:
    return Scale(float(lam), f)


def svf_product(f: SetValuedFunction, g: SetValuedFunction) -> Product:
    return Product(f, g)


def svf_union(f: SetValuedFunction, g: SetValuedFunction) -> Union:
    return Union(f, g)


def svf_cross(f: SetValuedFunction, g: SetValuedFunction) -> Cross:
    return Cross(f, g)


def svf_eval(f: SetValuedFunction, x: float) -> sa.SetValue:
    return f(x)


def _as_expr(e) -> Expr:
    return parse_expr(e) if isinstance(e, str) else e


def closed_form(lower, upper, domain, name: str = "") -> ClosedForm:
    if not isinstance(domain, Interval):
        domain = Interval(*domain)
    return ClosedForm(_as_expr(lower), _as_expr(upper), domain, name)


def make_family(kind: str, f, domain=(0.5, 8.0), w: float = 0.0) -> ClosedForm:
    """Generator families: box ``[0, f]``, symmetric ``[-f, f]``, shifted ``[f - w, f + w]``."""
    e = _as_expr(f)
    text = to_text(e)
    if kind == "box":
        return closed_form(Num(0.0), e, domain, f"box({text})")
    if kind == "symmetric":
        return closed_form(Neg(e), e, domain, f"symmetric({text})")
    if kind == "shifted":
        if w < 0:
            raise ValueError(f"shift half-width must be nonnegative, got {w}")
        return closed_form(BinOp("-", e, Num(w)), BinOp("+", e, Num(w)), domain,
                           f"shifted({text}, w={w:g})")
    raise ValueError(f"unknown family kind {kind!r}")


def _parse_domain(text: str) -> Interval:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"domain must look like [lo,hi], got {text!r}")
    try:
        lo, hi = (float(p) for p in body[1:-1].split(","))
    except ValueError:
        raise ValueError(f"domain must look like [lo,hi], got {text!r}") from None
    return Interval(lo, hi)


def parse_svf_spec(text: str, base_dir=None) -> SetValuedFunction:
    """Parse ``kind=box expr="x" domain=[0.5,8]`` style specs.

    Kinds: ``box``, ``symmetric``, ``shifted`` (with ``w=``), ``closed`` (with
    ``lower=`` and ``upper=``), and ``tabulated`` (with ``file=`` pointing at
    an ``x,lo,hi`` CSV, resolved against ``base_dir``).
    """
    fields = {}
    for tok in shlex.split(text):
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"expected key=value in SVF spec, got {tok!r}")
        fields[key] = val
    kind = fields.pop("kind", None)
    if kind is None:
        raise ValueError(f"SVF spec needs kind=..., got {text!r}")

    def need(key):
        if key not in fields:
            raise ValueError(f"SVF spec of kind {kind} needs {key}=...")
        return fields.pop(key)

    if kind == "tabulated":
        path = Path(need("file"))
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        f = Tabulated.from_csv(path)
    elif kind in ("box", "symmetric", "shifted"):
        w = float(fields.pop("w", 0.0))
        f = make_family(kind, need("expr"), _parse_domain(need("domain")), w=w)
    elif kind == "closed":
        f = closed_form(need("lower"), need("upper"), _parse_domain(need("domain")))
    else:
        raise ValueError(f"unknown SVF kind {kind!r}")
    if fields:
        raise ValueError(f"unknown SVF spec keys: {', '.join(sorted(fields))}")
    return f


# Scalar oracles. These never touch the set algebra: the harmonic point is
# written as the reciprocal of a weighted mean of reciprocals, and the
# inequalities are compared directly.

def _oracle_grid(domain: Interval, grid: GridSpec):
    xs = sample_positive(domain, grid.nx)
    ys = sample_positive(domain, grid.ny)
    return np.meshgrid(xs, ys, t_values(grid.nt), indexing="ij")


def _oracle_report(name, margins, X, Y, T, tol) -> CheckReport:
    evaluated = ~np.isnan(margins)
    if not evaluated.any():
        return CheckReport(name, Verdict.PASS, -math.inf,
                           stats={"points": int(margins.size), "skipped": int(margins.size)})
    if not np.all(np.isfinite(margins[evaluated])):
        i = int(np.flatnonzero(evaluated & ~np.isfinite(margins))[0])
        return CheckReport(name, Verdict.ERROR, math.nan,
                           Witness(float(X.flat[i]), float(Y.flat[i]), float(T.flat[i]),
                                   "non-finite function value"))
    i = int(np.nanargmax(margins))
    worst = float(margins.flat[i])
    verdict = verdict_for(worst, tol)
    witness = Witness(float(X.flat[i]), float(Y.flat[i]), float(T.flat[i])) \
        if verdict is Verdict.FAIL else None
    return CheckReport(name, verdict, worst, witness, stats={
        "points": int(margins.size),
        "skipped": int(margins.size - evaluated.sum()),
        "violations": int(np.count_nonzero(margins[evaluated] > tol)),
    })


def real_am_convex_check(f, alpha: float = 1.0, m: float = 1.0, grid: GridSpec = GridSpec(),
                         domain=(0.5, 8.0), tol: float = DEFAULT_TOL) -> CheckReport:
    """Check ``f(h) <= t^alpha f(y) + m (1 - t^alpha) f(x)`` on a grid."""
    if not 0 <= alpha <= 1 or not 0 < m <= 1:
        raise ValueError(f"need alpha in [0, 1] and m in (0, 1], got alpha={alpha}, m={m}")
    f = _as_expr(f)
    domain = domain if isinstance(domain, Interval) else Interval(*domain)
    X, Y, T = _oracle_grid(domain, grid)
    with np.errstate(divide="ignore"):
        H = 1.0 / (T / Y + (1.0 - T) / (m * X))
    ok = in_domain(H, domain)
    w = T**alpha
    margins = np.full(X.shape, np.nan)
    margins[ok] = evaluate(f, H[ok]) - (w[ok] * evaluate(f, Y[ok]) + m * (1 - w[ok]) * evaluate(f, X[ok]))
    return _oracle_report("real-am-convex", margins, X, Y, T, tol)


def real_strong_convex_check(f, c: float, grid: GridSpec = GridSpec(), domain=(0.5, 8.0),
                             tol: float = DEFAULT_TOL) -> CheckReport:
    """Check ``f(h) <= t f(y) + (1-t) f(x) - c t (1-t) ((x-y)/(xy))^2`` on a grid."""
    f = _as_expr(f)
    domain = domain if isinstance(domain, Interval) else Interval(*domain)
    X, Y, T = _oracle_grid(domain, grid)
    H = 1.0 / (T / Y + (1.0 - T) / X)
    ok = in_domain(H, domain)
    margins = np.full(X.shape, np.nan)
    Xo, Yo, To = X[ok], Y[ok], T[ok]
    gap = (1.0 / Yo - 1.0 / Xo) ** 2
    margins[ok] = evaluate(f, H[ok]) - (To * evaluate(f, Yo) + (1 - To) * evaluate(f, Xo)
                                        - c * To * (1 - To) * gap)
    return _oracle_report("real-strong-convex", margins, X, Y, T, tol)
