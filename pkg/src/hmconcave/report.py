"""Check reports and their stable JSON / CSV forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"


@dataclass(frozen=True)
class Witness:
    x: float
    y: float | None = None
    t: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class Link:
    """One named sub-result of a composite check."""

    name: str
    verdict: Verdict
    margin: float
    witness: Witness | None = None
    informational: bool = False
    detail: str = ""


@dataclass
class CheckReport:
    name: str
    verdict: Verdict
    worst_margin: float
    witness: Witness | None = None
    links: list[Link] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)
    # worst margin per (x, y) pair, for heatmaps
    pairs: list[tuple[float, float, float]] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)
    config_echo: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def link(self, name: str) -> Link:
        for ln in self.links:
            if ln.name == name:
                return ln
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "worst_margin": self.worst_margin,
            "witness": _witness_dict(self.witness),
            "links": [
                {
                    "name": ln.name,
                    "verdict": ln.verdict.value,
                    "margin": ln.margin,
                    "witness": _witness_dict(ln.witness),
                    "informational": ln.informational,
                    "detail": ln.detail,
                }
                for ln in self.links
            ],
            "stats": self.stats,
            "pairs": [list(p) for p in self.pairs],
            "extra": self.extra,
            "config_echo": self.config_echo,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CheckReport":
        try:
            return cls(
                name=str(d["name"]),
                verdict=Verdict(d["verdict"]),
                worst_margin=float(d["worst_margin"]),
                witness=_witness_from(d.get("witness")),
                links=[
                    Link(str(ln["name"]), Verdict(ln["verdict"]), float(ln["margin"]),
                         _witness_from(ln.get("witness")), bool(ln.get("informational", False)),
                         str(ln.get("detail", "")))
                    for ln in d.get("links", [])
                ],
                stats=dict(d.get("stats", {})),
                pairs=[(float(a), float(b), float(c)) for a, b, c in d.get("pairs", [])],
                extra=dict(d.get("extra", {})),
                config_echo=dict(d.get("config_echo", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed report: {exc!r}") from exc

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def pairs_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "margin"])
        for x, y, m in self.pairs:
            w.writerow([_float(x), _float(y), _float(m)])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"{self.name}: {self.verdict.value}  worst_margin={_float(self.worst_margin)}"]
        if self.witness is not None:
            w = self.witness
            lines.append(f"  witness x={_opt(w.x)} y={_opt(w.y)} t={_opt(w.t)} {w.detail}".rstrip())
        for ln in self.links:
            tag = " (info)" if ln.informational else ""
            lines.append(f"  - {ln.name}: {ln.verdict.value} margin={_float(ln.margin)}{tag}")
        if self.stats:
            lines.append("  stats: " + ", ".join(f"{k}={v}" for k, v in sorted(self.stats.items())))
        return "\n".join(lines)


def _witness_dict(w: Witness | None):
    if w is None:
        return None
    return {"x": w.x, "y": w.y, "t": w.t, "detail": w.detail}


def _witness_from(d) -> Witness | None:
    if d is None:
        return None
    opt = lambda v: None if v is None else float(v)  # noqa: E731
    return Witness(float(d["x"]), opt(d.get("y")), opt(d.get("t")), str(d.get("detail", "")))


def _opt(v):
    return "-" if v is None else _float(v)


def _float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    return format(v, ".17g")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON with sorted keys and every float written to 17 significant digits.

    ``json.dumps`` prints the shortest repr, which is not what downstream
    diffing expects; non-finite floats use Python's ``Infinity``/``NaN`` tokens.
    """
    out: list[str] = []

    def emit(o, depth):
        pad = "\n" + " " * (indent * (depth + 1))
        end = "\n" + " " * (indent * depth)
        if isinstance(o, Enum):
            o = o.value
        if o is None or isinstance(o, (bool, str)):
            out.append(json.dumps(o))
        elif isinstance(o, int):
            out.append(str(o))
        elif isinstance(o, float):
            out.append(_float(o))
        elif isinstance(o, dict):
            if not o:
                out.append("{}")
                return
            out.append("{")
            for i, k in enumerate(sorted(o, key=str)):
                out.append(("," if i else "") + pad + json.dumps(str(k)) + ": ")
                emit(o[k], depth + 1)
            out.append(end + "}")
        elif isinstance(o, (list, tuple)):
            if not o:
                out.append("[]")
                return
            out.append("[")
            for i, v in enumerate(o):
                out.append(("," if i else "") + pad)
                emit(v, depth + 1)
            out.append(end + "]")
        elif hasattr(o, "item"):  # numpy scalar
            emit(o.item(), depth)
        else:
            raise TypeError(f"cannot serialize {type(o).__name__}")

    emit(obj, 0)
    return "".join(out) + "\n"


def verdict_for(margin: float, tol: float) -> Verdict:
    return Verdict.FAIL if margin > tol else Verdict.PASS
