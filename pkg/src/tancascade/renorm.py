"""Renormalization tower: pre-poles, interval systems and orbit constants.

The level-n renormalization is R^n_t = f_t^(2^n) restricted to the four
intervals [-b_n, -pi/2], [-pi/2, -a_n], [a_n, pi/2], [pi/2, b_n], where the
pre-poles a_n < pi/2 < b_n = pi - a_n are the points sent onto a pole by
R^(n-1)_t.  Level 0 uses a_0 = 0 and b_0 = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NoSignChange, NotRenormalizable, OutOfDomain, UnsidedPole
from .numeric import bisect, get_ops, newton_polish
from .tanmap import (
    POLE_TOLERANCE,
    SATURATION,
    Side,
    SidedReal,
    as_sided,
    f_step,
    orbit_jet,
)

SCAN_POINTS = 2 ** 10
PREPOLE_TOL = 1e-12


@dataclass
class RenormLevel:
    n: int
    a_n: float
    b_n: float
    intervals: tuple
    c1: float
    c2: float
    target: float = math.nan  # pole hit by R^(n-1)(a_n)


class CValue(NamedTuple):
    value: float
    hit_pole: bool


def _intervals(a, b, ops):
    hp = ops.half_pi
    return ((-b, -hp), (-hp, -a), (a, hp), (hp, b))


def _iterate_sided(ops, t, x, side, k, tol=POLE_TOLERANCE):
    hit = False
    for _ in range(k):
        x, side = f_step(ops, t, x, side, tol, SATURATION)
        if side is not Side.NONE and abs(abs(x) - ops.half_pi) <= tol:
            hit = True
    return x, side, hit


def _iterate(ops, t, x, k):
    for _ in range(k):
        x = f_step(ops, t, x, Side.NONE, POLE_TOLERANCE, SATURATION)[0]
    return x


def _safe_iterate(ops, t, x, k):
    try:
        return _iterate(ops, t, x, k)
    except UnsidedPole:
        return math.nan


def prepoles(t, n: int, precision_bits: int = 53, scan_points: int = SCAN_POINTS,
             _detail: bool = False):
    """Pre-poles (a_n, b_n) with b_n = pi - a_n.

    a_n is the unique point of (a_(n-1), pi/2) where R^(n-1)_t = f^(2^(n-1))
    hits one of the poles -pi/2, +pi/2.  The bracket is found by scanning a
    grid of ``scan_points`` points and refined by bisection and Newton.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    ops = get_ops(precision_bits)
    t = ops.num(t)
    if n == 1:
        a_prev = ops.num(0)
    else:
        a_prev = prepoles(t, n - 1, precision_bits, scan_points)[0]
    k = 2 ** (n - 1)
    hp = ops.half_pi
    lo_end, hi_end = float(a_prev), float(hp)
    grid = np.linspace(lo_end, hi_end, scan_points + 2)[1:-1]
    vals = np.array([float(_safe_iterate(ops, t, ops.num(g), k)) for g in grid])
    brackets = []
    for target in (-float(hp), float(hp)):
        d = vals - target
        for i in range(len(d) - 1):
            if np.isfinite(d[i]) and np.isfinite(d[i + 1]) and d[i] * d[i + 1] < 0:
                # reject jumps across a pre-pole of lower level
                if abs(vals[i + 1] - vals[i]) < 1.0:
                    brackets.append((i, target))
    if len(brackets) != 1:
        raise NotRenormalizable(
            f"t = {float(t)!r}: {len(brackets)} pre-pole brackets at level {n}")
    i, target_f = brackets[0]
    target = -hp if target_f < 0 else hp
    lo, hi = ops.num(grid[i]), ops.num(grid[i + 1])

    def resid(x):
        return _iterate(ops, t, x, k) - target

    try:
        lo, hi = bisect(resid, lo, hi, xtol=float(1e-15 * 4 if ops.bits <= 53 else ops.eps * 8))
    except NoSignChange as exc:
        raise NotRenormalizable(str(exc)) from exc

    def fd(x):
        j = orbit_jet(ops, t, x, k)
        return j.x - target, j.dx

    a, res = newton_polish(fd, (lo + hi) / 2, lo, hi, PREPOLE_TOL)
    b = ops.pi - a
    if _detail:
        return a, b, target, res
    return a, b


def is_renormalizable(t: float, n: int) -> bool:
    """True iff the level-n intervals carry a unique pre-image of each pole.

    Equivalently the level-(n+1) pre-poles exist, which happens for
    t > beta_n.
    """
    try:
        prepoles(t, n + 1)
        return True
    except (NotRenormalizable, UnsidedPole, ValueError):
        return False


def c_value_detail(t, n: int, m: int, precision_bits: int = 53) -> CValue:
    """|f_t^(2^n m)(pi/2+)| with a flag for orbits that land on a pole."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    ops = get_ops(precision_bits)
    x, _, hit = _iterate_sided(ops, ops.num(t), ops.half_pi, Side.FROM_RIGHT, 2 ** n * m)
    return CValue(abs(x), hit)


def c_value(t, n: int, m: int, precision_bits: int = 53):
    """Orbit constant c_m(R^n_t) = c_(2^n m)(f_t) = |f_t^(2^n m)(pi/2+)|."""
    return c_value_detail(t, n, m, precision_bits).value


def build_level(t, n: int, precision_bits: int = 53) -> RenormLevel:
    a, b, target, _ = prepoles(t, n, precision_bits, _detail=True)
    ops = get_ops(precision_bits)
    return RenormLevel(n, a, b, _intervals(a, b, ops),
                       c_value(t, n, 1, precision_bits), c_value(t, n, 2, precision_bits),
                       target)


def renorm_eval(t, n: int, x, precision_bits: int = 53, level: RenormLevel | None = None,
                snap_tol: float = 1e-9):
    """R^n_t(x) = f_t^(2^n)(x) on the level-n intervals, with side tracking.

    A sided point within ``snap_tol`` of a pre-pole +-a_n or +-b_n is treated
    as that pre-pole: its first 2^(n-1) iterates land exactly on the pole
    with the propagated side.
    """
    ops = get_ops(precision_bits)
    tt = ops.num(t)
    if level is None:
        level = build_level(t, n, precision_bits)
    sx = as_sided(x)
    xv = ops.num(sx.value)
    inside = any(lo - 1e-15 <= xv <= hi + 1e-15 for lo, hi in level.intervals)
    if not inside:
        raise OutOfDomain(f"x = {float(xv)!r} is outside the level-{n} intervals")
    k = 2 ** n
    side = sx.side
    if side is not Side.NONE:
        hits = ((level.a_n, level.target), (-level.b_n, level.target),
                (-level.a_n, -level.target), (level.b_n, -level.target))
        for p, pole in hits:
            if abs(xv - p) <= snap_tol:
                half = 2 ** (n - 1)
                side_h = side if half % 2 == 0 else side.flipped()
                y, _, _ = _iterate_sided(ops, tt, pole, side_h, k - half)
                return y
    y, _, _ = _iterate_sided(ops, tt, xv, side, k)
    return y


def renorm_eval_sided(t, n: int, x: SidedReal, precision_bits: int = 53) -> SidedReal:
    ops = get_ops(precision_bits)
    y, s, _ = _iterate_sided(ops, ops.num(t), ops.num(x.value), x.side, 2 ** n)
    return SidedReal(y, s)
