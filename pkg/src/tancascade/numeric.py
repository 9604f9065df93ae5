"""Precision backends and small root-finding helpers.

Every kernel in the package is written against an ``ops`` object so that the
same code runs in native double precision (``math``) or in extended precision
(an isolated ``mpmath`` context).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import mpmath

from .errors import NewtonDiverged, NoSignChange

DOUBLE_BITS = 53


class FloatOps:
    """Native double precision."""

    bits = DOUBLE_BITS
    pi = math.pi
    half_pi = math.pi / 2
    eps = 2.0 ** -52
    inf = math.inf

    tan = staticmethod(math.tan)
    sin = staticmethod(math.sin)
    cos = staticmethod(math.cos)
    tanh = staticmethod(math.tanh)
    cosh = staticmethod(math.cosh)
    exp = staticmethod(math.exp)
    log = staticmethod(math.log)
    log1p = staticmethod(math.log1p)
    floor = staticmethod(math.floor)
    sqrt = staticmethod(math.sqrt)

    @staticmethod
    def num(x) -> float:
        return float(x)

    @staticmethod
    def isfinite(x) -> bool:
        return math.isfinite(x)


class MpOps:
    """Extended precision on a private mpmath context (no global state)."""

    def __init__(self, bits: int):
        ctx = mpmath.MPContext()
        ctx.prec = bits
        self.ctx = ctx
        self.bits = bits
        self.pi = +ctx.pi
        self.half_pi = ctx.pi / 2
        self.eps = ctx.mpf(2) ** (1 - bits)
        self.inf = ctx.inf
        self.tan = ctx.tan
        self.sin = ctx.sin
        self.cos = ctx.cos
        self.tanh = ctx.tanh
        self.cosh = ctx.cosh
        self.exp = ctx.exp
        self.log = ctx.log
        self.log1p = ctx.log1p
        self.sqrt = ctx.sqrt

    def floor(self, x) -> int:
        return int(self.ctx.floor(x))

    def num(self, x):
        return self.ctx.mpf(x)

    def isfinite(self, x) -> bool:
        return bool(self.ctx.isfinite(x))


FLOAT_OPS = FloatOps()


@lru_cache(maxsize=16)
def _mp_ops(bits: int) -> MpOps:
    return MpOps(bits)


def get_ops(precision_bits: int = DOUBLE_BITS):
    """Return the arithmetic backend for the requested precision."""
    if precision_bits <= 0:
        raise ValueError("precision_bits must be positive")
    if precision_bits <= DOUBLE_BITS:
        return FLOAT_OPS
    return _mp_ops(int(precision_bits))


def sign(x) -> int:
    return (x > 0) - (x < 0)


def bisect(fn: Callable, lo, hi, xtol: float, max_iter: int = 400):
    """Bisection on a bracket with a sign change.

    Works for floats and mpmath numbers alike.  Returns the final bracket
    ``(lo, hi)`` with ``fn(lo)`` and ``fn(hi)`` of opposite sign.
    """
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if sign(flo) == sign(fhi):
        raise NoSignChange(f"no sign change on [{float(lo)!r}, {float(hi)!r}]")
    for _ in range(max_iter):
        if abs(hi - lo) <= xtol:
            break
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break
        fm = fn(mid)
        if fm == 0:
            return mid, mid
        if sign(fm) == sign(flo):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo, hi


def newton_polish(fn_and_deriv: Callable, x, lo, hi, tol: float, max_iter: int = 8):
    """Safeguarded Newton steps that never leave ``[lo, hi]``.

    Returns the iterate with the smallest residual seen, which makes the
    polish harmless when the bracket is already at rounding level.
    """
    best_x = x
    val, der = fn_and_deriv(x)
    best_r = abs(val)
    for _ in range(max_iter):
        if der == 0 or best_r <= tol * 1e-3:
            break
        nx = x - val / der
        if not (min(lo, hi) <= nx <= max(lo, hi)):
            break
        x = nx
        val, der = fn_and_deriv(x)
        if abs(val) < best_r:
            best_x, best_r = x, abs(val)
        else:
            break
    return best_x, best_r


def newton_2d(residual: Callable, x, y, tol: float, max_iter: int = 60, max_step: float = 0.05):
    """Damped Newton for two equations in two unknowns.

    ``residual(x, y)`` returns ``((g, h), ((gx, gy), (hx, hy)))``.  Steps are
    capped at ``max_step`` and halved until the residual norm decreases.
    """
    (g, h), jac = residual(x, y)
    norm = math.hypot(float(g), float(h))
    for _ in range(max_iter):
        if norm < tol:
            return x, y, (g, h)
        (gx, gy), (hx, hy) = jac
        det = gx * hy - gy * hx
        if det == 0:
            raise NewtonDiverged("singular Jacobian in 2D Newton")
        dx = -(hy * g - gy * h) / det
        dy = -(-hx * g + gx * h) / det
        scale = max(abs(float(dx)), abs(float(dy))) / max_step
        if scale > 1:
            dx, dy = dx / scale, dy / scale
        lam = 1.0
        for _ in range(30):
            try:
                (ng, nh), njac = residual(x + lam * dx, y + lam * dy)
            except ArithmeticError:
                ng = nh = None
            except ValueError:
                ng = nh = None
            if ng is not None:
                nnorm = math.hypot(float(ng), float(nh))
                if nnorm < norm or nnorm < tol:
                    break
            lam /= 2
        else:
            raise NewtonDiverged("2D Newton line search failed")
        x, y = x + lam * dx, y + lam * dy
        g, h, jac, norm = ng, nh, njac, nnorm
    if norm < tol:
        return x, y, (g, h)
    raise NewtonDiverged(f"2D Newton stalled at residual {norm:.3e}")
