"""Binary Cantor systems built from the asymptotic-value orbit near t_infinity.

With c_m = |f^(m-1)(t*)| the level-n plus-side bridges are

    J(n, m) = interval bounded by c_m and c_(m + 2^n),   m = 1 .. 2^n,

and the gap removed from J(n, k) is bounded by c_(k + 2^(n+1)) and
c_(k + 2^n + 2^(n+1)).  It splits J(n, k) into the children J(n+1, k) and
J(n+1, k + 2^n).  The minus side is the exact negation.  Endpoint labels are
orbit indices, so structural checks compare integers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import OrderingViolated
from .numeric import FLOAT_OPS
from .tanmap import Side, SidedReal, eval_T, f_step, f_value, MapParams, POLE_TOLERANCE, SATURATION

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Interval:
    level: int
    side: str  # "+" or "-"
    index: int
    kind: str  # "bridge" or "gap"
    left: float
    right: float
    left_label: int  # signed orbit index: +m for c_m, -m for -c_m
    right_label: int

    @property
    def length(self) -> float:
        return self.right - self.left

    def contains(self, x: float) -> bool:
        if self.kind == "gap":
            return self.left < x < self.right
        return self.left <= x <= self.right


@dataclass
class CantorLevel:
    n: int
    bridges_plus: list = field(default_factory=list)
    bridges_minus: list = field(default_factory=list)
    gaps_plus: list = field(default_factory=list)
    gaps_minus: list = field(default_factory=list)

    def bridge(self, m: int, side: str = "+") -> Interval:
        seq = self.bridges_plus if side == "+" else self.bridges_minus
        return next(b for b in seq if b.index == m)


@dataclass
class CantorSystem:
    t_star: float
    orbit_constants: list  # c_1 .. c_M stored at positions 0 .. M-1
    levels: list
    signed_orbit: list  # f^(m-1)(t*) with sign, same indexing

    def c(self, m: int) -> float:
        return self.orbit_constants[m - 1]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


@dataclass
class Check:
    level: int
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    t_star: float
    depth: int
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def by_name(self, name: str) -> list:
        return [c for c in self.checks if c.name == name]


def signed_orbit(t_star: float, M: int) -> list:
    """x_m = f^(m-1)(t*) for m = 1..M, started from pi/2 from the right."""
    x, side = HALF_PI, Side.FROM_RIGHT
    out = []
    for _ in range(M):
        x, side = f_step(FLOAT_OPS, float(t_star), x, side, POLE_TOLERANCE, SATURATION)
        out.append(x)
    return out


def orbit_constants(t_star: float, M: int) -> list:
    """c_1 .. c_M with c_m = |f^m(pi/2+)|; c_1 = t_star exactly."""
    return [abs(x) for x in signed_orbit(t_star, M)]


def ordering_holds(c: list) -> bool:
    """c_2 < pi/2 < c_4 < c_3 < c_1 (1-based indices into c)."""
    return c[1] < HALF_PI < c[3] < c[2] < c[0]


def _interval(level, side, index, kind, la, lb, c):
    va, vb = c[la - 1], c[lb - 1]
    if va > vb:
        la, lb, va, vb = lb, la, vb, va
    if side == "+":
        return Interval(level, "+", index, kind, va, vb, la, lb)
    return Interval(level, "-", index, kind, -vb, -va, -lb, -la)


def decomposition_ok(c: list, n: int) -> bool:
    """Monotone order c_k, c_(k+2^(n+1)), c_(k+2^n+2^(n+1)), c_(k+2^n) for all k."""
    p, q = 2 ** n, 2 ** (n + 1)
    for k in range(1, p + 1):
        seq = [c[k - 1], c[k + q - 1], c[k + p + q - 1], c[k + p - 1]]
        inc = all(a < b for a, b in zip(seq, seq[1:]))
        dec = all(a > b for a, b in zip(seq, seq[1:]))
        if not (inc or dec):
            return False
    return True


def required_constants(depth: int) -> int:
    return max(4, 2 ** (depth + 1) + 1)


def build_levels(t_star: float, depth: int) -> CantorSystem:
    """Bridges of levels 0..depth and the gaps of levels 0..depth-1."""
    if depth < 0 or depth > 6:
        raise ValueError("depth must lie in 0..6")
    M = required_constants(depth)
    xs = signed_orbit(t_star, M)
    c = [abs(x) for x in xs]
    if not ordering_holds(c):
        raise OrderingViolated("c_2 < pi/2 < c_4 < c_3 < c_1 fails")
    levels = []
    for n in range(depth + 1):
        lev = CantorLevel(n)
        p = 2 ** n
        for m in range(1, p + 1):
            for side, seq in (("+", lev.bridges_plus), ("-", lev.bridges_minus)):
                seq.append(_interval(n, side, m, "bridge", m, m + p, c))
        if n < depth:
            if not decomposition_ok(c, n):
                raise OrderingViolated(f"gap ordering fails at level {n}")
            q = 2 ** (n + 1)
            for k in range(1, p + 1):
                for side, seq in (("+", lev.gaps_plus), ("-", lev.gaps_minus)):
                    seq.append(_interval(n, side, k, "gap", k + q, k + p + q, c))
        levels.append(lev)
    return CantorSystem(float(t_star), c, levels, xs)


def max_valid_depth(t_star: float, limit: int = 6) -> int:
    """Deepest level for which build_levels succeeds, or -1."""
    best = -1
    for d in range(limit + 1):
        try:
            build_levels(t_star, d)
        except OrderingViolated:
            break
        best = d
    return best


def verify_system(system: CantorSystem, map_tol: float = 1e-9) -> VerificationReport:
    rep = VerificationReport(system.t_star, system.depth)
    c = system.orbit_constants
    xs = system.signed_orbit
    t = system.t_star
    levels = system.levels
    rep.checks.append(Check(-1, "ordering", ordering_holds(c),
                            "c2 < pi/2 < c4 < c3 < c1"))
    maxlen = []
    for lev in levels:
        n = lev.n
        p = 2 ** n
        # (2) disjointness
        for side, seq in (("+", lev.bridges_plus), ("-", lev.bridges_minus)):
            s = sorted(seq, key=lambda b: b.left)
            ok = all(a.right < b.left for a, b in zip(s, s[1:]))
            rep.checks.append(Check(n, "disjoint", ok, side))
        # symmetry
        sym = all(bp.left == -bm.right and bp.right == -bm.left
                  and bp.left_label == -bm.right_label and bp.right_label == -bm.left_label
                  for bp, bm in zip(lev.bridges_plus, lev.bridges_minus))
        rep.checks.append(Check(n, "symmetry", sym))
        # (1) decomposition into children and gap, exact at shared endpoints
        if n + 1 < len(levels):
            child = levels[n + 1]
            ok = True
            for side, bridges, gaps, kids in (
                    ("+", lev.bridges_plus, lev.gaps_plus, child.bridges_plus),
                    ("-", lev.bridges_minus, lev.gaps_minus, child.bridges_minus)):
                kmap = {b.index: b for b in kids}
                for parent, gap in zip(bridges, gaps):
                    k = parent.index
                    a, b = kmap[k], kmap[k + p]
                    lo, hi = (a, b) if a.left < b.left else (b, a)
                    labels = (lo.left_label == parent.left_label
                              and lo.right_label == gap.left_label
                              and gap.right_label == hi.left_label
                              and hi.right_label == parent.right_label)
                    values = (lo.left == parent.left and lo.right == gap.left
                              and gap.right == hi.left and hi.right == parent.right)
                    inside = parent.left < gap.left < gap.right < parent.right
                    ok = ok and labels and values and inside
            rep.checks.append(Check(n, "decomposition", ok))
        # (3) endpoint images
        worst = 0.0
        targets_ok = True
        for b in lev.bridges_plus:
            m = b.index
            for lab in (m, m + p):
                if lab + 1 > len(xs):
                    continue
                img = f_value(FLOAT_OPS, t, c[lab - 1])
                sgn = 1.0 if xs[lab - 1] > 0 else -1.0
                worst = max(worst, abs(img - sgn * xs[lab]))
            if m < p and m + 1 + p <= len(c):
                tgt = lev.bridge(m + 1)
                labs = {abs(tgt.left_label), abs(tgt.right_label)}
                targets_ok = targets_ok and labs == {m + 1, m + 1 + p}
        rep.checks.append(Check(n, "mapping", worst < map_tol and targets_ok,
                                f"max endpoint image error {worst:.2e}"))
        # (5) density proxy
        dens = all(any(bb.contains(c[j]) for j in range(min(2 ** (n + 1), len(c))))
                   for bb in lev.bridges_plus)
        rep.checks.append(Check(n, "density", dens))
        # pole membership
        rep.checks.append(Check(n, "pole", any(bb.contains(HALF_PI) for bb in lev.bridges_plus)))
        maxlen.append(max(bb.length for bb in lev.bridges_plus))
    # (4) shrinkage
    shrink = all(b < a for a, b in zip(maxlen, maxlen[1:]))
    rep.checks.append(Check(-1, "shrinking", shrink, " > ".join(f"{v:.3e}" for v in maxlen)))
    # imaginary-line image
    params = MapParams(min(t, math.pi))
    worst_re = max(abs(eval_T(params, bb.left).real) for bb in levels[-1].bridges_plus)
    rep.checks.append(Check(-1, "imaginary_image", worst_re < 1e-12, f"{worst_re:.1e}"))
    return rep


def max_bridge_lengths(system: CantorSystem) -> list:
    return [max(b.length for b in lev.bridges_plus) for lev in system.levels]


def intervals(system: CantorSystem) -> list:
    out = []
    for lev in system.levels:
        out += lev.bridges_plus + lev.bridges_minus + lev.gaps_plus + lev.gaps_minus
    return out


def dump_csv(system: CantorSystem) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "side", "index", "kind", "left", "right", "left_label", "right_label"])
    for iv in intervals(system):
        w.writerow([iv.level, iv.side, iv.index, iv.kind, repr(iv.left), repr(iv.right),
                    iv.left_label, iv.right_label])
    return buf.getvalue()


def dump_json(system: CantorSystem, report: Optional[VerificationReport] = None) -> str:
    doc = {
        "t_star": system.t_star,
        "depth": system.depth,
        "orbit_constants": system.orbit_constants,
        "intervals": [
            {"level": iv.level, "side": iv.side, "index": iv.index, "kind": iv.kind,
             "left": iv.left, "right": iv.right,
             "left_label": iv.left_label, "right_label": iv.right_label}
            for iv in intervals(system)
        ],
    }
    if report is not None:
        doc["ok"] = report.ok
        doc["checks"] = [{"level": ch.level, "name": ch.name, "ok": ch.ok, "detail": ch.detail}
                         for ch in report.checks]
    return json.dumps(doc, indent=2)
