"""Attracting and parabolic cycles of f_t on the real axis.

A T_t-cycle on the real and imaginary axes is stored through its real points,
which form an f_t-cycle.  For t > 1 the T-period is twice the f-period; the
only odd case is the fixed point 0 for t < 1.  ``Cycle.multiplier`` is the
derivative of f^N along the real points, which equals the T-multiplier for
every even-period cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.optimize import brentq

from .errors import (
    DerivativeNearOne,
    NewtonDiverged,
    NoConvergence,
    NoCrossing,
    PoleOnCycle,
    PoleProximity,
    UnsidedPole,
)
from .numeric import FLOAT_OPS, newton_2d
from .tanmap import (
    POLE_TOLERANCE,
    SATURATION,
    Side,
    f_step,
    f_value,
    log_abs_fprime,
    orbit_jet,
    pole_offset,
)

ATTRACTING = "attracting"
PARABOLIC = "parabolic"
REPELLING = "repelling"

_OPS = FLOAT_OPS


@dataclass
class Cycle:
    period_T: int
    real_points: list
    multiplier: float
    classification: str
    t: float = math.nan
    residual: float = 0.0

    @property
    def period_f(self) -> int:
        return len(self.real_points)

    @property
    def T_multiplier_modulus(self) -> float:
        """|T-multiplier|; differs from |multiplier| only for the fixed point 0."""
        if self.period_T == 1:
            return abs(self.t)
        return abs(self.multiplier)

    def negated(self) -> "Cycle":
        return Cycle(self.period_T, [-p for p in self.real_points], self.multiplier,
                     self.classification, self.t, self.residual)


@dataclass
class ParabolicFix:
    t_star: float
    cycle: Cycle
    target_multiplier: int
    residuals: tuple = field(default=(math.nan, math.nan))


def classify(multiplier: float, tol: float = 1e-9) -> str:
    a = abs(multiplier)
    if a < 1 - tol:
        return ATTRACTING
    if abs(a - 1) <= tol:
        return PARABOLIC
    return REPELLING


def _iterate(t: float, x: float, k: int) -> float:
    for _ in range(k):
        x = f_value(_OPS, t, x)
    return x


def _period_T(points: list) -> int:
    if len(points) == 1 and points[0] == 0:
        return 1
    return 2 * len(points)


def _cycle_points(t: float, x: float, n: int) -> list:
    pts = [x]
    for _ in range(n - 1):
        pts.append(f_value(_OPS, t, pts[-1]))
    return pts


def multiplier(t: float, cycle: Cycle) -> float:
    """(f^N)' along the cycle as sign * exp(sum log|f'|)."""
    logsum = 0.0
    for p in cycle.real_points:
        if abs(pole_offset(_OPS, p)) <= POLE_TOLERANCE:
            raise PoleOnCycle(f"cycle point {p!r} is a pole")
        logsum += log_abs_fprime(_OPS, t, p)
    sgn = -1.0 if len(cycle.real_points) % 2 else 1.0
    return sgn * math.exp(logsum)


def _make_cycle(t: float, points: list, residual: float, tol: float = 1e-9) -> Cycle:
    if len(points) == 1 and abs(points[0]) < 1e-12:
        points = [0.0]
    c = Cycle(_period_T(points), points, 0.0, "", t, residual)
    c.multiplier = multiplier(t, c)
    c.classification = classify(c.multiplier, tol)
    return c


def _newton_1d(fun, x: float, tol: float, max_iter: int = 60, min_slope: float = 0.0):
    """Plain Newton on a scalar function returning (value, slope)."""
    for _ in range(max_iter):
        g, dg = fun(x)
        if abs(g) < tol:
            return x, g
        if abs(dg) < min_slope:
            raise DerivativeNearOne(f"|g'| = {abs(dg):.2e} at x = {x!r}")
        step = g / dg
        if not math.isfinite(step) or abs(step) > 1.0:
            raise NewtonDiverged(f"Newton step {step!r} from x = {x!r}")
        x -= step
    g, _ = fun(x)
    if abs(g) < tol:
        return x, g
    raise NewtonDiverged(f"Newton did not reach {tol} (residual {abs(g):.2e})")


def refine_cycle_newton(t: float, seed: list, period_f: int, tol: float = 1e-13) -> Cycle:
    """Newton on g(x) = f^N(x) - x from seed[0]; points rebuilt by iteration."""
    x0 = float(seed[0])

    def g(x):
        j = orbit_jet(_OPS, t, x, period_f)
        return j.x - x, j.dx - 1.0

    x, _ = _newton_1d(g, x0, tol, min_slope=1e-8)
    pts = _cycle_points(t, x, period_f)
    return _make_cycle(t, pts, abs(_iterate(t, x, period_f) - x))


def refine_symmetric(t: float, seed: float, period_f: int, tol: float = 1e-13) -> Cycle:
    """Newton on the half map h(x) = f^{N/2}(x) + x for a cycle with C = -C.

    h'(x) = (f^{N/2})'(x) + 1 stays near 2 at a multiplier +1 doubling, so this
    stays well conditioned where the full map g is singular.
    """
    half = period_f // 2

    def h(x):
        j = orbit_jet(_OPS, t, x, half)
        return j.x + x, j.dx + 1.0

    x, _ = _newton_1d(h, float(seed), tol, min_slope=1e-8)
    pts = _cycle_points(t, x, period_f)
    return _make_cycle(t, pts, abs(_iterate(t, x, period_f) - x))


def _min_return(t: float, x: float, kmax: int, tol: float) -> Optional[int]:
    y = x
    for k in range(1, kmax + 1):
        y = f_value(_OPS, t, y)
        if abs(y - x) < tol:
            return k
    return None


def _reduce_period(t: float, x: float, k: int, tol: float) -> int:
    for d in range(1, k):
        if k % d == 0 and abs(_iterate(t, x, d) - x) < tol:
            return d
    return k


def _settle(t: float, x: float, side: Side, transient: int) -> float:
    for _ in range(transient):
        x, side = f_step(_OPS, t, x, side, POLE_TOLERANCE, SATURATION)
    return x


def attracting_cycle_from(t: float, start: float, max_period_T: int = 1024,
                          transient: int = 5000, tol: float = 1e-9) -> Optional[Cycle]:
    """Attracting cycle in the limit set of the f_t-orbit of ``start``."""
    t = float(t)
    side = Side.FROM_LEFT if start > 0 else Side.FROM_RIGHT
    try:
        x = _settle(t, float(start), side, transient)
    except UnsidedPole:
        return None
    kmax = max(1, max_period_T // 2)
    k = None
    for extra in (0, transient, 4 * transient):
        if extra:
            x = _settle(t, x, Side.NONE, extra)
        try:
            k = _min_return(t, x, kmax, tol)
        except UnsidedPole:
            return None
        if k is not None:
            break
    loose = False
    if k is None:
        k = _min_return(t, x, kmax, 1e-5)
        loose = True
        if k is None:
            return None
    k = _reduce_period(t, x, k, 1e-5 if loose else tol)
    if abs(x) < 1e-12 and k == 1:
        return _make_cycle(t, [0.0], 0.0)
    cyc = None
    try:
        if k % 2 == 0 and abs(_iterate(t, x, k // 2) + x) < max(tol, 1e-5 if loose else tol):
            cyc = refine_symmetric(t, x, k)
        else:
            cyc = refine_cycle_newton(t, [x], k)
    except (DerivativeNearOne, NewtonDiverged, PoleProximity, UnsidedPole):
        cyc = None
    if cyc is None or cyc.classification == REPELLING or abs(cyc.real_points[0] - x) > 1e-3:
        if loose:
            return None
        pts = _cycle_points(t, x, k)
        cyc = _make_cycle(t, pts, abs(_iterate(t, x, k) - x))
    return cyc


def find_attracting_cycle(t: float, max_period_T: int = 1024, transient: int = 5000,
                          tol: float = 1e-9) -> Optional[Cycle]:
    """Cycle attracting the asymptotic value t, or None if no return is seen."""
    if max_period_T > 2 ** 12:
        raise ValueError("max_period_T must not exceed 4096")
    if not 0 < t <= math.pi + 1e-15:
        raise ValueError("t must lie in (0, pi]")
    return attracting_cycle_from(t, t, max_period_T, transient, tol)


def count_distinct_cycles(t: float, period_T: Optional[int] = None, tol: float = 1e-6,
                          transient: int = 20000, max_period_T: int = 1024) -> int:
    """1 if the orbits of +t and -t share their limit cycle, 2 if disjoint."""
    cp = attracting_cycle_from(t, t, max_period_T, transient)
    cm = attracting_cycle_from(t, -t, max_period_T, transient)
    if cp is None or cm is None:
        raise NoConvergence(f"no attracting cycle detected at t = {t!r}")
    if period_T is not None and (cp.period_T != period_T or cm.period_T != period_T):
        raise NoConvergence(
            f"period {cp.period_T}/{cm.period_T} found at t = {t!r}, expected {period_T}")
    dist = min(abs(a - b) for a in cp.real_points for b in cm.real_points)
    return 2 if dist > tol else 1


# ---------------------------------------------------------------------------
# parabolic parameters


def _cycle_derivative(t: float, x: float, k: int, sigma: int):
    """Solve f^k(x) + sigma x = 0 near x; return (x, (f^k)'(x))."""

    def g(y):
        j = orbit_jet(_OPS, t, y, k)
        return j.x + sigma * y, j.dx + sigma

    x, _ = _newton_1d(g, x, 1e-14, max_iter=40)
    return x, orbit_jet(_OPS, t, x, k).dx


def _seed_point(t: float, period_f: int, transient: int = 20000) -> float:
    c = attracting_cycle_from(t, t, max(2, 2 * period_f), transient)
    if c is None:
        raise NoCrossing(f"no attracting cycle to continue at t = {t!r}")
    if c.period_f != period_f:
        raise NoCrossing(f"cycle at t = {t!r} has f-period {c.period_f}, expected {period_f}")
    return max(c.real_points, key=lambda p: abs(pole_offset(_OPS, p)))


def locate_parabolic(t_bracket: tuple, period_f: int, target: int, seed_x: Optional[float] = None,
                     step: float = 1e-3, tol: float = 1e-12) -> ParabolicFix:
    """Parameter where the continued cycle has multiplier ``target``.

    With target -1 the system {f^N(x) = x, (f^N)'(x) = -1} is solved.  With
    target +1 and even N the cycle is symmetric and the system is reduced to
    the half map {f^{N/2}(x) = -x, (f^{N/2})'(x) = 1}, whose Jacobian stays
    regular at the doubling.  The crossing is bracketed by continuation from
    the left end of ``t_bracket``, located with brentq and polished by damped
    2D Newton.
    """
    lo, hi = map(float, t_bracket)
    if target not in (-1, 1):
        raise ValueError("target must be +1 or -1")
    if target == 1 and period_f % 2 == 0:
        k, sigma, dtarget = period_f // 2, 1, 1.0
    else:
        k, sigma, dtarget = period_f, -1, float(target)
    width = hi - lo
    dt = min(step, width / 64)
    t = lo + dt
    x = _seed_point(t, period_f) if seed_x is None else float(seed_x)
    x, d = _cycle_derivative(t, x, k, sigma)
    prev = (t, x, d)
    found = None
    while t < hi:
        h = dt
        while True:
            tn = min(t + h, hi)
            try:
                xn, dn = _cycle_derivative(tn, x, k, sigma)
                if abs(xn - x) < 0.05:
                    break
            except (NewtonDiverged, PoleProximity, UnsidedPole):
                pass
            h /= 2
            if h < 1e-14 * max(1.0, t):
                raise NoCrossing(f"continuation stalled at t = {t!r}")
        t, x, d = tn, xn, dn
        if (prev[2] - dtarget) * (d - dtarget) <= 0:
            found = (prev, (t, x, d))
            break
        prev = (t, x, d)
        if t >= hi:
            break
    if found is None:
        raise NoCrossing(f"multiplier does not reach {target} on [{lo}, {hi}]")
    (ta, xa, _), (tb, _, _) = found

    def q(s):
        return _cycle_derivative(s, xa, k, sigma)[1] - dtarget

    ts = brentq(q, ta, tb, xtol=1e-15)
    xs, _ = _cycle_derivative(ts, xa, k, sigma)

    def system(y, s):
        j = orbit_jet(_OPS, s, y, k)
        return ((j.x + sigma * y, j.D - dtarget),
                ((j.dx + sigma, j.dt), (j.dD_dx, j.dD_dt)))

    try:
        xs2, ts2, _ = newton_2d(system, xs, ts, tol=tol, max_iter=20, max_step=1e-6)
        if abs(ts2 - ts) < 1e-9:
            xs, ts = xs2, ts2
    except NewtonDiverged:
        pass
    pts = _cycle_points(ts, xs, period_f)
    cyc = _make_cycle(ts, pts, abs(_iterate(ts, xs, period_f) - xs))
    res_fix = cyc.residual
    res_mult = abs(cyc.multiplier - target)
    return ParabolicFix(ts, cyc, target, (res_fix, res_mult))
