"""Harmonic m-combinations on the positive half-line.

The harmonic m-combination of ``x, y > 0`` with weight ``t`` is
``m*x*y / (t*m*x + (1-t)*y)``; it runs from ``m*x`` at ``t = 0`` to ``y`` at
``t = 1``. Domains are closed positive intervals; an interval with
``lo == 0`` stands for the half-open ``(0, hi]`` and is sampled from a small
inset instead of 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .report import CheckReport, Verdict, Witness, verdict_for
from .set_algebra import DEFAULT_TOL, Interval

DEFAULT_INSET = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """Sample counts for x, y (log-spaced) and t (uniform on [0, 1])."""

    nx: int = 33
    ny: int = 33
    nt: int = 17

    def __post_init__(self):
        if min(self.nx, self.ny, self.nt) < 1:
            raise ValueError(f"grid sizes must be positive, got {self}")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            nx, ny, nt = (int(p) for p in text.split(","))
        except ValueError:
            raise ValueError(f"grid must look like 'nx,ny,nt', got {text!r}") from None
        return cls(nx, ny, nt)

    def __str__(self):
        return f"{self.nx},{self.ny},{self.nt}"


@dataclass(frozen=True)
class HarmonicParams:
    t: float
    m: float = 1.0

    def __post_init__(self):
        _check_params(self.t, self.m)


@dataclass(frozen=True)
class DyadicRational:
    k: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ValueError(f"dyadic k, n must be nonnegative, got k={self.k}, n={self.n}")
        if self.k > 2**self.n:
            raise ValueError(f"dyadic k={self.k} exceeds 2**{self.n}")

    @property
    def value(self) -> float:
        return self.k / 2**self.n


def dyadic_value(q: DyadicRational) -> float:
    return q.value


def nearest_dyadic(t: float, n: int) -> DyadicRational:
    """Closest interior dyadic ``k / 2**n`` to ``t`` (``0 < k < 2**n``)."""
    if n < 1:
        raise ValueError("depth must be at least 1")
    k = math.floor(t * 2**n + 0.5)
    return DyadicRational(min(max(k, 1), 2**n - 1), n)


def interior_dyadics(depth: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n, values)`` with the dyadics first appearing at level ``n``.

    Over ``n = 1..depth`` this enumerates each of the ``2**depth - 1`` interior
    dyadics exactly once.
    """
    for n in range(1, depth + 1):
        ks = np.arange(1, 2**n, 2)
        yield n, ks / 2**n


def _check_params(t, m):
    if np.any(np.asarray(t) < 0) or np.any(np.asarray(t) > 1):
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if np.any(np.asarray(m) <= 0) or np.any(np.asarray(m) > 1):
        raise ValueError(f"m must lie in (0, 1], got {m}")


def harmonic_m_point(x, y, t, m=1.0):
    """``m*x*y / (t*m*x + (1-t)*y)``; works elementwise on arrays."""
    if np.any(np.asarray(x) <= 0) or np.any(np.asarray(y) <= 0):
        raise ValueError("harmonic combinations need x, y > 0")
    _check_params(t, m)
    return m * x * y / (t * m * x + (1 - t) * y)


def sample_positive(domain: Interval, n: int, inset: float = DEFAULT_INSET) -> np.ndarray:
    lo = domain.lo if domain.lo > 0 else inset
    if lo > domain.hi:
        raise ValueError(f"domain {domain} is empty after the {inset} inset")
    if n == 1:
        return np.array([lo])
    return np.geomspace(lo, domain.hi, n)


def in_domain(p, domain: Interval, rel: float = 1e-12):
    """Membership with a relative slack of a few ulps.

    Harmonic combinations of boundary points land a rounding error outside
    the domain; those still count as inside.
    """
    lo_ok = p > 0 if domain.lo == 0 else p >= domain.lo * (1 - rel)
    return lo_ok & (p <= domain.hi * (1 + rel))


def t_values(nt: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, nt)


def _membership_margin(p, d: Interval):
    lo_margin = d.lo - p if d.lo > 0 else np.where(p > 0, -p, np.inf)
    return np.maximum(lo_margin, p - d.hi)


def is_harmonically_m_convex_domain(domain: Interval, m: float, grid: GridSpec = GridSpec(),
                                    tol: float = DEFAULT_TOL,
                                    inset: float = DEFAULT_INSET) -> CheckReport:
    """Grid test that every harmonic m-combination of domain points stays inside."""
    if domain.lo < 0:
        raise ValueError("harmonic domains must lie in [0, inf)")
    xs = sample_positive(domain, grid.nx, inset)
    ys = sample_positive(domain, grid.ny, inset)
    X, Y, T = np.meshgrid(xs, ys, t_values(grid.nt), indexing="ij")
    H = harmonic_m_point(X, Y, T, m)
    margins = _membership_margin(H, domain)
    return _grid_report("harmonic-m-convex-domain", margins, (X, Y, T), tol,
                        lambda i: f"h={H.flat[i]:.17g} outside {domain}")


def is_starshaped(domain: Interval, grid: GridSpec = GridSpec(),
                  tol: float = DEFAULT_TOL) -> CheckReport:
    """Grid test of ``t*x in D`` for ``t`` in ``(0, 1]`` and ``x`` in ``D``."""
    xs = np.linspace(domain.lo, domain.hi, grid.nx)
    ts = t_values(grid.nt + 1)[1:]
    X, T = np.meshgrid(xs, ts, indexing="ij")
    P = T * X
    margins = np.maximum(domain.lo - P, P - domain.hi)
    return _grid_report("starshaped", margins, (X, None, T), tol,
                        lambda i: f"t*x={P.flat[i]:.17g} outside {domain}")


def _grid_report(name, margins, coords, tol, describe) -> CheckReport:
    i = int(np.argmax(margins))
    worst = float(margins.flat[i])
    violations = int(np.count_nonzero(margins > tol))
    verdict = verdict_for(worst, tol)
    X, Y, T = coords
    witness = None
    if verdict is Verdict.FAIL:
        witness = Witness(float(X.flat[i]), None if Y is None else float(Y.flat[i]),
                          float(T.flat[i]), describe(i))
    return CheckReport(name, verdict, worst, witness,
                       stats={"points": int(margins.size), "violations": violations})
