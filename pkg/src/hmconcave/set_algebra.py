"""Minkowski algebra on compact intervals, finite interval unions and boxes.

Values of a set-valued function live here. An ``Interval`` is a compact
convex subset of the reals, an ``IntervalUnion`` a finite union of disjoint
intervals, and a ``Box`` a finite product of intervals. The closed unit ball
of the reals is ``Interval(-1, 1)``, so ``A + r*B`` is ``inflate(A, r)``.

``IntervalArray`` carries many intervals at once as two numpy arrays and is
what the grid verifier uses; it mirrors the scalar operations exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

import numpy as np

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    """Compact interval ``[lo, hi]`` with finite endpoints."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"interval is backwards: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, v: float) -> "Interval":
        return cls(v, v)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def magnitude(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    def __add__(self, other):
        return mink_sum(self, other)

    def __rmul__(self, lam):
        return scale(lam, self)

    def __str__(self):
        return f"[{self.lo:.6g}, {self.hi:.6g}]"


UNIT_BALL = Interval(-1.0, 1.0)


@dataclass(frozen=True)
class IntervalUnion:
    """Normalized finite union of intervals.

    Parts are sorted and pairwise separated (``prev.hi < next.lo``); build
    arbitrary collections through :meth:`of`, which merges touching parts.
    """

    parts: tuple[Interval, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("an interval union needs at least one part")
        for a, b in zip(parts, parts[1:]):
            if not a.hi < b.lo:
                raise ValueError(f"union parts not normalized: {a} then {b}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, intervals: Iterable[Interval]) -> "IntervalUnion":
        ordered = sorted(intervals, key=lambda iv: (iv.lo, iv.hi))
        if not ordered:
            raise ValueError("an interval union needs at least one part")
        merged = [ordered[0]]
        for iv in ordered[1:]:
            last = merged[-1]
            if iv.lo <= last.hi:
                merged[-1] = Interval(last.lo, max(last.hi, iv.hi))
            else:
                merged.append(iv)
        return cls(tuple(merged))

    @property
    def hull(self) -> Interval:
        return Interval(self.parts[0].lo, self.parts[-1].hi)

    def __contains__(self, v) -> bool:
        return any(v in p for p in self.parts)

    def __str__(self):
        return " u ".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, the product of ``dims``."""

    dims: tuple[Interval, ...]

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims:
            raise ValueError("a box needs at least one dimension")
        for d in dims:
            if not isinstance(d, Interval):
                raise TypeError(f"box components must be Intervals, got {type(d).__name__}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return len(self.dims)

    def __str__(self):
        return " x ".join(str(d) for d in self.dims)


SetValue = Union[Interval, IntervalUnion, Box]


def _parts(a) -> tuple[Interval, ...]:
    if isinstance(a, Interval):
        return (a,)
    if isinstance(a, IntervalUnion):
        return a.parts
    raise TypeError(f"expected a one-dimensional set, got {type(a).__name__}")


def _check_boxes(a: Box, b: Box):
    if a.dim != b.dim:
        raise ValueError(f"box dimension mismatch: {a.dim} vs {b.dim}")


def _is_box(a, b) -> bool:
    boxes = isinstance(a, Box) + isinstance(b, Box)
    if boxes == 1:
        raise TypeError(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    return boxes == 2


def mink_sum(a: SetValue, b: SetValue) -> SetValue:
    if _is_box(a, b):
        _check_boxes(a, b)
        return Box(tuple(mink_sum(p, q) for p, q in zip(a.dims, b.dims)))
    if isinstance(a, Interval) and isinstance(b, Interval):
        return Interval(a.lo + b.lo, a.hi + b.hi)
    return IntervalUnion.of(mink_sum(p, q) for p in _parts(a) for q in _parts(b))


def scale(lam: float, a: SetValue) -> SetValue:
    """The set ``{lam * v : v in a}``."""
    if isinstance(a, Box):
        return Box(tuple(scale(lam, d) for d in a.dims))
    if isinstance(a, IntervalUnion):
        return IntervalUnion.of(scale(lam, p) for p in a.parts)
    if lam >= 0:
        return Interval(lam * a.lo, lam * a.hi)
    return Interval(lam * a.hi, lam * a.lo)


def mink_product(a: SetValue, b: SetValue) -> SetValue:
    """Elementwise set product ``{u * v}``; componentwise on boxes."""
    if _is_box(a, b):
        _check_boxes(a, b)
        return Box(tuple(mink_product(p, q) for p, q in zip(a.dims, b.dims)))
    if isinstance(a, Interval) and isinstance(b, Interval):
        prods = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
        return Interval(min(prods), max(prods))
    return IntervalUnion.of(mink_product(p, q) for p in _parts(a) for q in _parts(b))


def inflate(a: SetValue, r: float) -> SetValue:
    """``a + r * B`` with ``B`` the closed unit ball (sup-norm ball on boxes)."""
    if r < 0:
        raise ValueError(f"inflation radius must be nonnegative, got {r}")
    if isinstance(a, Box):
        return Box(tuple(inflate(d, r) for d in a.dims))
    if isinstance(a, IntervalUnion):
        return IntervalUnion.of(inflate(p, r) for p in a.parts)
    return Interval(a.lo - r, a.hi + r)


def union(a: SetValue, b: SetValue) -> IntervalUnion:
    return IntervalUnion.of(_parts(a) + _parts(b))


def cross(a: SetValue, b: SetValue) -> Box:
    def dims(v):
        if isinstance(v, Box):
            return v.dims
        if isinstance(v, Interval):
            return (v,)
        raise TypeError(f"cannot take a product with {type(v).__name__}")

    return Box(dims(a) + dims(b))


def _interval_margin(inner: Interval, outer: Interval) -> float:
    return max(outer.lo - inner.lo, inner.hi - outer.hi)


def _dist(z: float, parts: tuple[Interval, ...]) -> float:
    return min(max(q.lo - z, z - q.hi, 0.0) for q in parts)


def _part_margin(p: Interval, outer: tuple[Interval, ...]) -> float:
    for q in outer:
        if q.lo <= p.lo and p.hi <= q.hi:
            return _interval_margin(p, q)
    # Not inside a single part: the margin is the largest distance from a
    # point of p to the union, attained at an endpoint of p or at the point
    # of p nearest a gap midpoint.
    candidates = [p.lo, p.hi]
    for a, b in zip(outer, outer[1:]):
        mid = 0.5 * (a.hi + b.lo)
        candidates.append(min(max(mid, p.lo), p.hi))
    return max(_dist(z, outer) for z in candidates)


def inclusion_margin(inner: SetValue, outer: SetValue) -> float:
    """Signed excursion of ``inner`` outside ``outer``.

    Nonpositive when ``inner`` is included (its magnitude is the slack);
    positive values are the smallest ``eps`` with ``inner`` inside
    ``outer + eps * B``.
    """
    if _is_box(inner, outer):
        _check_boxes(inner, outer)
        return max(_interval_margin(p, q) for p, q in zip(inner.dims, outer.dims))
    if isinstance(inner, Interval) and isinstance(outer, Interval):
        return _interval_margin(inner, outer)
    outer_parts = _parts(outer)
    return max(_part_margin(p, outer_parts) for p in _parts(inner))


class Inclusion(NamedTuple):
    holds: bool
    margin: float


def is_subset_eps(inner: SetValue, outer: SetValue, eps: float = 0.0,
                  tol: float = DEFAULT_TOL) -> Inclusion:
    """Test ``inner`` inside ``outer + eps * B`` up to an absolute slack ``tol``.

    The returned margin already accounts for ``eps``.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    margin = inclusion_margin(inner, outer) - eps
    return Inclusion(margin <= tol, margin)


def hausdorff(a: Interval, b: Interval) -> float:
    return max(abs(a.lo - b.lo), abs(a.hi - b.hi))


def intersects(a: Interval, b: Interval) -> bool:
    return max(a.lo, b.lo) <= min(a.hi, b.hi)


class RadstromResult(NamedTuple):
    premise: bool
    conclusion: bool
    consistent: bool


def radstrom_check(a1: Interval, a2: Interval, c: Interval,
                   tol: float = DEFAULT_TOL) -> RadstromResult:
    """Instance of the cancellation law ``a1 + c <= a2 + c  =>  a1 <= a2``."""
    premise = is_subset_eps(mink_sum(a1, c), mink_sum(a2, c), 0.0, tol).holds
    conclusion = is_subset_eps(a1, a2, 0.0, tol).holds
    return RadstromResult(premise, conclusion, (not premise) or conclusion)


@dataclass(frozen=True)
class IntervalArray:
    """A batch of intervals stored as endpoint arrays.

    No ordering invariant is enforced here: callers check ``valid()`` after
    evaluating user functions, since a non-finite or reversed entry marks an
    evaluation error rather than a programming error.
    """

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def of(cls, ivs: Iterable[Interval]) -> "IntervalArray":
        ivs = list(ivs)
        return cls(np.array([iv.lo for iv in ivs]), np.array([iv.hi for iv in ivs]))

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, i) -> Interval:
        return Interval(self.lo[i], self.hi[i])

    def valid(self) -> np.ndarray:
        return np.isfinite(self.lo) & np.isfinite(self.hi) & (self.lo <= self.hi)

    def take(self, mask) -> "IntervalArray":
        return IntervalArray(self.lo[mask], self.hi[mask])

    def __add__(self, other: "IntervalArray") -> "IntervalArray":
        return IntervalArray(self.lo + other.lo, self.hi + other.hi)

    def scale(self, lam) -> "IntervalArray":
        lam = np.asarray(lam, dtype=float)
        a, b = lam * self.lo, lam * self.hi
        pos = lam >= 0
        return IntervalArray(np.where(pos, a, b), np.where(pos, b, a))

    def product(self, other: "IntervalArray") -> "IntervalArray":
        p = np.stack([self.lo * other.lo, self.lo * other.hi,
                      self.hi * other.lo, self.hi * other.hi])
        return IntervalArray(p.min(axis=0), p.max(axis=0))

    def inflate(self, r) -> "IntervalArray":
        return IntervalArray(self.lo - r, self.hi + r)

    def margin_in(self, outer: "IntervalArray") -> np.ndarray:
        return np.maximum(outer.lo - self.lo, self.hi - outer.hi)
