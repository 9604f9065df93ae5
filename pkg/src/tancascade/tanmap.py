"""Kernels for the tangent family T_t(z) = it tan z and its square f_t.

On the real axis ``f_t(x) = T_t(T_t(x)) = -t tanh(t tan x)``.  The poles
``k*pi + pi/2`` are jump discontinuities of ``f_t`` with one-sided limits
``f_t(pole-) = -t`` and ``f_t(pole+) = +t``.  Points that sit on a pole are
carried as :class:`SidedReal` values that remember the approach direction.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Any, NamedTuple

from .errors import DegenerateDerivative, PoleProximity, UnsidedPole
from .numeric import DOUBLE_BITS, get_ops

POLE_TOLERANCE = 1e-12
SATURATION = 40.0
_NEAR_POLE = 0.25


class Side(enum.Enum):
    NONE = "none"
    FROM_LEFT = "from_left"
    FROM_RIGHT = "from_right"

    def flipped(self) -> "Side":
        if self is Side.FROM_LEFT:
            return Side.FROM_RIGHT
        if self is Side.FROM_RIGHT:
            return Side.FROM_LEFT
        return Side.NONE


@dataclass(frozen=True)
class SidedReal:
    """A real number with an optional one-sided approach direction."""

    value: Any
    side: Side = Side.NONE

    def __post_init__(self):
        if not math.isfinite(float(self.value)):
            raise ValueError("SidedReal value must be finite")

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class MapParams:
    t: Any
    precision_bits: int = DOUBLE_BITS
    pole_tolerance: float = POLE_TOLERANCE
    saturation_threshold: float = SATURATION

    def __post_init__(self):
        tf = float(self.t)
        if not (0 < tf <= math.pi + 1e-15):
            raise ValueError(f"t must lie in (0, pi], got {tf!r}")
        if self.precision_bits <= 0:
            raise ValueError("precision_bits must be positive")
        if self.pole_tolerance <= 0:
            raise ValueError("pole_tolerance must be positive")
        if self.saturation_threshold < 20:
            raise ValueError("saturation_threshold must be at least 20")

    @property
    def ops(self):
        return get_ops(self.precision_bits)

    @property
    def t_num(self):
        return self.ops.num(self.t)


def as_sided(x) -> SidedReal:
    return x if isinstance(x, SidedReal) else SidedReal(x)


# ---------------------------------------------------------------------------
# backend-generic scalar kernels


def pole_offset(ops, x):
    """Signed distance from x to the nearest pole k*pi + pi/2."""
    j = ops.floor(x / ops.pi)
    return x - (j * ops.pi + ops.half_pi)


def _tan_with_offset(ops, x):
    """Return (tan x, offset to nearest pole) with cancellation-free evaluation."""
    dx = pole_offset(ops, x)
    if dx == 0:
        raise PoleProximity(f"x = {float(x)!r} is a pole")
    if abs(dx) < _NEAR_POLE:
        return -ops.cos(dx) / ops.sin(dx), dx
    r = x - round(x / ops.pi) * ops.pi
    return ops.tan(r), dx


def f_step(ops, t, x, side: Side, tol: float, sat: float):
    """One side-aware step of f_t; returns (value, side)."""
    dx = pole_offset(ops, x)
    if abs(dx) <= tol:
        if side is Side.FROM_LEFT:
            return -t, Side.FROM_RIGHT
        if side is Side.FROM_RIGHT:
            return t, Side.FROM_LEFT
        raise UnsidedPole(f"x = {float(x)!r} is a pole and carries no side")
    if abs(dx) < _NEAR_POLE:
        tn = -ops.cos(dx) / ops.sin(dx)
    else:
        tn = ops.tan(x - round(x / ops.pi) * ops.pi)
    u = t * tn
    if abs(u) > sat:
        return (-t if u > 0 else t), side.flipped()
    return -t * ops.tanh(u), side.flipped()


def f_value(ops, t, x, tol: float = POLE_TOLERANCE, sat: float = SATURATION):
    """f_t(x) for an unsided point; raises UnsidedPole at a pole."""
    return f_step(ops, t, x, Side.NONE, tol, sat)[0]


class Terms(NamedTuple):
    """Local derivative data of f_t at one point."""

    fx: Any
    fp: Any  # f_t'(x)
    r2: Any  # f_t''(x) / f_t'(x)
    rt: Any  # (d/dt f_t'(x)) / f_t'(x)
    ft: Any  # d/dt f_t(x), also dF/dw


def local_terms(ops, t, x, tol: float = POLE_TOLERANCE, sat: float = SATURATION) -> Terms:
    tn, dx = _tan_with_offset(ops, x)
    if abs(dx) <= tol:
        raise PoleProximity(f"x = {float(x)!r} is within {tol} of a pole")
    u = t * tn
    sec2 = 1 + tn * tn
    if abs(u) > sat:
        th = 1 if u > 0 else -1
        fp = 0 * t
        ft = -th - u * 4 * ops.exp(-2 * abs(u))
        fx = -t * th
    else:
        th = ops.tanh(u)
        ch = ops.cosh(u)
        sech2 = 1 / (ch * ch)
        fp = -t * t * sech2 * sec2
        ft = -th - u * sech2
        fx = -t * th
    r2 = -2 * (t * th * sec2 - tn)
    rt = 2 / t - 2 * th * tn
    return Terms(fx, fp, r2, rt, ft)


def log_abs_fprime(ops, t, x, tol: float = POLE_TOLERANCE):
    """log |f_t'(x)| without overflow, valid also beyond the saturation threshold."""
    tn, dx = _tan_with_offset(ops, x)
    if abs(dx) <= tol:
        raise PoleProximity(f"x = {float(x)!r} is within {tol} of a pole")
    au = abs(t * tn)
    logcosh = au + ops.log1p(ops.exp(-2 * au)) - ops.log(2 * ops.num(1))
    return 2 * ops.log(abs(t)) + ops.log(1 + tn * tn) - 2 * logcosh


class Jet(NamedTuple):
    """Orbit of length k with first and mixed derivatives.

    ``x`` is f^k(x0); ``dx`` and ``dt`` are its partials with respect to the
    starting point and the parameter; ``D`` is (f^k)'(x0) and ``dD_dx``,
    ``dD_dt`` are its partials.
    """

    x: Any
    dx: Any
    dt: Any
    D: Any
    dD_dx: Any
    dD_dt: Any


def orbit_jet(ops, t, x0, k: int, tol: float = POLE_TOLERANCE, sat: float = SATURATION) -> Jet:
    x = x0
    X = 1 + 0 * x0
    Y = 0 * x0
    sx = 0 * x0
    st = 0 * x0
    for _ in range(k):
        tm = local_terms(ops, t, x, tol, sat)
        sx += tm.r2 * X
        st += tm.rt + tm.r2 * Y
        Y = tm.ft + tm.fp * Y
        X = tm.fp * X
        x = tm.fx
    return Jet(x, X, Y, X, X * sx, X * st)


# ---------------------------------------------------------------------------
# public operations


def eval_T(params: MapParams, z: complex) -> complex:
    """T_t(z) = i t tan z with the saturation rule far from the real axis."""
    z = complex(z)
    t = float(params.t)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("z must be finite")
    sat = params.saturation_threshold
    if abs(z.imag) > sat:
        return complex(-t if z.imag > 0 else t, 0.0)
    pole = math.floor(z.real / math.pi) * math.pi + math.pi / 2
    dz = z - pole
    if abs(dz) <= params.pole_tolerance:
        raise PoleProximity(f"z = {z!r} is within {params.pole_tolerance} of a pole")
    if abs(dz) < _NEAR_POLE:
        tn = -cmath.cos(dz) / cmath.sin(dz)
    else:
        tn = cmath.tan(z - round(z.real / math.pi) * math.pi)
    return 1j * t * tn


def eval_f(params: MapParams, x) -> SidedReal:
    """Side-aware f_t(x) = -t tanh(t tan x)."""
    ops = params.ops
    sx = as_sided(x)
    v, s = f_step(ops, params.t_num, ops.num(sx.value), sx.side,
                  params.pole_tolerance, params.saturation_threshold)
    return SidedReal(v, s)


def eval_f_prime(params: MapParams, x):
    """f_t'(x) = -t^2 sech^2(t tan x) sec^2 x, exactly 0 when saturated."""
    ops = params.ops
    xv = ops.num(float(x) if isinstance(x, SidedReal) else x)
    return local_terms(ops, params.t_num, xv, params.pole_tolerance,
                       params.saturation_threshold).fp


def eval_F_partials(w, z, self_test: bool = False, tol: float = POLE_TOLERANCE,
                    sat: float = SATURATION):
    """Partials (dF/dw, dF/dz) of F(w, z) = -w tanh(w tan z).

    With ``self_test`` the analytic dF/dw is compared with a centered finite
    difference of step 1e-6 and an AssertionError is raised on mismatch.
    """
    ops = get_ops(DOUBLE_BITS)
    tm = local_terms(ops, float(w), float(z), tol, sat)
    if self_test:
        h = 1e-6
        fd = (f_value(ops, w + h, z, tol, sat) - f_value(ops, w - h, z, tol, sat)) / (2 * h)
        if abs(tm.ft - fd) >= 1e-6 * (1 + abs(tm.ft)):
            raise AssertionError(f"dF/dw self-test failed: {tm.ft!r} vs {fd!r}")
    return tm.ft, tm.fp


def schwarzian(params: MapParams, x, min_derivative: float = 1e-6) -> float:
    """Schwarzian derivative of f_t by 5-point finite differences.

    The step is h = 1e-3 (1 + |x|).  Points where |f_t'| is below
    ``min_derivative * t**2`` (the flat region near poles) or where the
    stencil would cross a pole are rejected with DegenerateDerivative.
    """
    ops = params.ops
    t = params.t_num
    xv = ops.num(float(x))
    h = 1e-3 * (1 + abs(float(x)))
    if abs(float(pole_offset(ops, xv))) <= 2.5 * h:
        raise DegenerateDerivative("finite-difference stencil reaches a pole")
    fp0 = local_terms(ops, t, xv, params.pole_tolerance, params.saturation_threshold).fp
    if abs(fp0) < min_derivative * float(t) ** 2:
        raise DegenerateDerivative(f"f' = {float(fp0):.3e} is too flat at x = {float(x)!r}")
    tol, sat = params.pole_tolerance, params.saturation_threshold
    fm2, fm1, f0, f1, f2 = (f_value(ops, t, xv + k * h, tol, sat) for k in (-2, -1, 0, 1, 2))
    d1 = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h)
    d2 = (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    d3 = (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h ** 3)
    if d1 == 0:
        raise DegenerateDerivative("vanishing first derivative")
    return float(d3 / d1 - 1.5 * (d2 / d1) ** 2)


def schwarzian_exact(t: float, x: float) -> float:
    """Closed form 2(1 - t^2 sec^4 x), used as an independent check."""
    s2 = 1.0 / math.cos(x) ** 2
    return 2.0 * (1.0 - t * t * s2 * s2)


def orbit(params: MapParams, start, k: int) -> list[SidedReal]:
    """Forward orbit f_t(start), ..., f_t^k(start) with side tracking.

    If an unsided point lands on a pole the UnsidedPole raised carries the
    partial orbit in ``.partial`` and the failing step in ``.step``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ops = params.ops
    t = params.t_num
    s = as_sided(start)
    x, side = ops.num(s.value), s.side
    out: list[SidedReal] = []
    for i in range(k):
        try:
            x, side = f_step(ops, t, x, side, params.pole_tolerance, params.saturation_threshold)
        except UnsidedPole as exc:
            exc.partial = out
            exc.step = i
            raise
        out.append(SidedReal(x, side))
    return out
