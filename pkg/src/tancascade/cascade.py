"""Cycle-doubling parameters alpha_n and cycle-merging parameters beta_n.

beta_n is a virtual cycle parameter: the orbit of the asymptotic value t
lands on the pole (-1)^(n+1) pi/2 after 2^n - 1 steps of f_t.  alpha_n is the
parameter where the attracting cycle born at beta_(n-1) becomes parabolic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .cycles import locate_parabolic
from .errors import (
    InsufficientData,
    NoSignChange,
    OrbitHitPole,
    PoleProximity,
    TanCascadeError,
    UnsidedPole,
)
from .numeric import bisect, get_ops, newton_polish
from .tanmap import POLE_TOLERANCE, SATURATION, Side, f_step, orbit_jet

BETA_SCAN_POINTS = 4096
BETA0 = math.pi / 2


class BetaResult(NamedTuple):
    t: float
    residual: float


class AlphaResult(NamedTuple):
    t: float
    residual: float  # multiplier residual
    fixed_residual: float = 0.0


@dataclass
class CascadeEntry:
    n: int
    t: float
    residuals: tuple
    bracket: tuple = ()


@dataclass
class CascadeTable:
    alphas: list = field(default_factory=list)
    betas: list = field(default_factory=list)
    t_infinity_estimate: float = math.nan
    ratio_sequence: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    precision_bits: int = 53

    def alpha(self, n: int) -> float:
        return self.alphas[n - 1].t

    def beta(self, n: int) -> float:
        if n == 0:
            return BETA0
        return self.betas[n - 1].t

    @property
    def depth(self) -> int:
        return len(self.betas)

    def interleaved(self) -> list:
        seq = [BETA0]
        for a, b in zip(self.alphas, self.betas):
            seq += [a.t, b.t]
        if len(self.alphas) > len(self.betas):
            seq.append(self.alphas[-1].t)
        return seq

    def is_interleaved(self) -> bool:
        seq = self.interleaved()
        return all(x < y for x, y in zip(seq, seq[1:])) and seq[-1] < math.pi


class TInfEstimate(NamedTuple):
    t_inf: float
    ratios: list
    divergent: bool


def beta_target(n: int, ops=None):
    hp = ops.half_pi if ops is not None else math.pi / 2
    return hp if n % 2 == 1 else -hp


def phi_beta(t, n: int, precision_bits: int = 53, with_signature: bool = False):
    """Phi_n(t) = f_t^(2^n - 1)(t) - (-1)^(n+1) pi/2.

    The starting value t is the one-sided limit f_t(pi/2+), so it carries the
    side ``from_left``.  With ``with_signature`` the pole-interval index of
    every orbit point before the last step is returned as well; Phi_n is
    continuous wherever that signature is constant.
    """
    ops = get_ops(precision_bits)
    t = ops.num(t)
    x, side = t, Side.FROM_LEFT
    sig = []
    for i in range(2 ** n - 1):
        if with_signature:
            sig.append(ops.floor((x + ops.half_pi) / ops.pi))
        x, side = f_step(ops, t, x, side, POLE_TOLERANCE, SATURATION)
    val = x - beta_target(n, ops)
    if with_signature:
        return val, tuple(sig)
    return val


def _phi_safe(t, n, precision_bits):
    try:
        return phi_beta(t, n, precision_bits, with_signature=True)
    except (UnsidedPole, PoleProximity):
        return math.nan, None


def scan_beta_bracket(n: int, lo: float, hi: float, points: int = BETA_SCAN_POINTS,
                      precision_bits: int = 53) -> tuple:
    """First continuous sign change of Phi_n on a uniform grid of (lo, hi)."""
    grid = np.linspace(lo, hi, points)
    prev_t, prev_v, prev_s = None, None, None
    for t in grid:
        v, s = _phi_safe(float(t), n, precision_bits)
        v = float(v)
        if prev_s is not None and s == prev_s and math.isfinite(v) and prev_v * v < 0:
            return float(prev_t), float(t)
        prev_t, prev_v, prev_s = t, v, s
    raise NoSignChange(f"Phi_{n} has no continuous sign change on ({lo}, {hi})")


def solve_beta(n: int, bracket: tuple, precision_bits: int = 53, xtol: float = 1e-13) -> BetaResult:
    """Root of Phi_n inside ``bracket`` by bisection and Newton polish.

    If the bracket ends do not already straddle a continuous sign change the
    bracket is scanned on a 4096-point grid first.
    """
    ops = get_ops(precision_bits)
    lo, hi = float(bracket[0]), float(bracket[1])
    vlo, slo = _phi_safe(lo, n, precision_bits)
    vhi, shi = _phi_safe(hi, n, precision_bits)
    if not (slo is not None and slo == shi and float(vlo) * float(vhi) < 0):
        lo, hi = scan_beta_bracket(n, lo, hi, precision_bits=precision_bits)
    _, sig = _phi_safe(lo, n, precision_bits)

    def phi(t):
        v, s = _phi_safe(t, n, precision_bits)
        if s != sig:
            raise OrbitHitPole(f"orbit changes branch at t = {float(t)!r}")
        return v

    a, b = bisect(phi, ops.num(lo), ops.num(hi), xtol=xtol if ops.bits <= 53 else float(ops.eps) * 16)
    k = 2 ** n - 1
    target = beta_target(n, ops)

    def phi_d(t):
        j = orbit_jet(ops, t, t, k)
        return j.x - target, j.dx + j.dt

    root, _ = newton_polish(phi_d, (a + b) / 2, a, b, 1e-15)
    if abs(phi(a)) < abs(phi(root)):
        root = a
    if abs(phi(b)) < abs(phi(root)):
        root = b
    return BetaResult(root if ops.bits > 53 else float(root), abs(float(phi(root))))


def solve_alpha(n: int, bracket: tuple, seed_x: Optional[float] = None) -> AlphaResult:
    """Parabolic parameter alpha_n inside ``bracket`` = (beta_(n-1), beyond).

    n = 1 continues the period-1 f-cycle to multiplier -1; n >= 2 continues
    the merged symmetric cycle of f-period 2^n to multiplier +1.
    """
    if n == 1:
        fix = locate_parabolic(bracket, 1, -1, seed_x=seed_x)
    else:
        fix = locate_parabolic(bracket, 2 ** n, 1, seed_x=seed_x)
    return AlphaResult(fix.t_star, fix.residuals[1], fix.residuals[0])


def estimate_t_infinity(table) -> TInfEstimate:
    """Geometric extrapolation of the beta sequence using the last gap ratio."""
    if isinstance(table, CascadeTable):
        betas = [float(b.t) for b in table.betas]
    else:
        betas = [float(b) for b in table]
    if len(betas) < 3:
        raise InsufficientData("need at least three betas")
    gaps = [b - a for a, b in zip(betas, betas[1:])]
    ratios = [g0 / g1 if g1 != 0 else math.inf for g0, g1 in zip(gaps, gaps[1:])]
    delta = ratios[-1]
    if not delta > 1 or not math.isfinite(delta):
        return TInfEstimate(math.inf, ratios, True)
    return TInfEstimate(betas[-1] + gaps[-1] / (delta - 1), ratios, False)


def cascade_table(depth: int = 5, precision_bits: int = 53,
                  alpha1_bracket: tuple = (BETA0, math.pi)) -> CascadeTable:
    """Alternate solve_alpha / solve_beta with chained brackets.

    The alpha_n continuation starts at beta_(n-1) and runs at most one
    previous beta gap to the right.  The beta_n scan covers
    (alpha_n, alpha_n + 4 (beta_(n-1) - alpha_(n-1))) for n >= 2 and
    (alpha_1, pi) for n = 1.
    """
    table = CascadeTable(precision_bits=precision_bits)
    beta_prev, beta_prev2 = BETA0, None
    alpha_prev = None
    for n in range(1, depth + 1):
        try:
            if n == 1:
                abr = alpha1_bracket
            else:
                span = beta_prev - (beta_prev2 if beta_prev2 is not None else BETA0)
                abr = (beta_prev, min(math.pi, beta_prev + span))
            ar = solve_alpha(n, abr)
            table.alphas.append(CascadeEntry(n, ar.t, (ar.residual, ar.fixed_residual), abr))
            if n == 1:
                bbr = (ar.t, math.pi)
            else:
                bbr = (ar.t, min(math.pi, ar.t + 4 * (beta_prev - alpha_prev)))
            br = solve_beta(n, bbr, precision_bits)
            table.betas.append(CascadeEntry(n, br.t, (br.residual,), bbr))
        except TanCascadeError as exc:
            table.failures.append(f"level {n}: {type(exc).__name__}: {exc}")
            break
        if not table.is_interleaved():
            table.failures.append(f"level {n}: interleaving violated")
            break
        beta_prev2, beta_prev = beta_prev, float(br.t)
        alpha_prev = ar.t
    if len(table.betas) >= 3:
        est = estimate_t_infinity(table)
        table.t_infinity_estimate = est.t_inf
        table.ratio_sequence = est.ratios
    return table


def period_schedule(t: float, table: CascadeTable) -> Optional[tuple]:
    """Expected (cycle count, T-period) at t from the cascade table."""
    if t < 1:
        return (1, 1)
    if 1 < t < math.pi / 2:
        return (1, 4)
    alphas = [a.t for a in table.alphas]
    betas = [b.t for b in table.betas]
    if alphas and math.pi / 2 < t < alphas[0]:
        return (2, 2)
    if alphas and betas and alphas[0] < t < betas[0]:
        return (2, 4)
    for n in range(1, len(betas) + 1):
        if n < len(alphas) and betas[n - 1] < t < alphas[n]:
            return (1, 2 ** (n + 2))
        if n < len(alphas) and n < len(betas) and alphas[n] < t < betas[n]:
            return (2, 2 ** (n + 2))
    return None
