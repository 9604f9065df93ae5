"""Transfer operator and positive-transversality certificate at beta_n.

At a virtual cycle parameter t0 the orbit c_1 = t0, c_(i+1) = f(c_i) closes
on the pole c_0 after m - 1 steps.  The transfer operator A acts on
(v_1, ..., v_(m-1)) with

    A[i, 1]   = -(dF/dw) / (dF/dz)   at (c_1, c_i)
    A[i, i+1] =  1 / (dF/dz)          at (c_1, c_i),  i <= m - 2

and det(I - rho A) equals P(rho) = 1 + sum_n rho^n L(c_n) / (F^n)'(c_1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cascade import beta_target, phi_beta, solve_beta
from .errors import BranchJump, ClosureFailed, SingularPartial
from .numeric import FLOAT_OPS, get_ops
from .tanmap import eval_F_partials, f_value

CLOSURE_TOL = 1e-10
FD_BITS = 113


@dataclass
class OrbitSetP:
    t0: float
    n: int
    m: int
    points: list  # c_0 .. c_(m-1)
    separation: float
    closure_residual: float


@dataclass
class TransferMatrix:
    dim: int
    entries: np.ndarray


class PhiPrime(NamedTuple):
    numeric: float
    via_identity: float
    positivity: bool


def build_orbit_P(t0: float, n: int, tol: float = CLOSURE_TOL) -> OrbitSetP:
    m = 2 ** n
    c0 = beta_target(n)
    pts = [c0, float(t0)]
    for _ in range(m - 2):
        pts.append(f_value(FLOAT_OPS, t0, pts[-1]))
    closure = abs(f_value(FLOAT_OPS, t0, pts[-1]) - c0) if m > 1 else 0.0
    if not closure < tol:
        raise ClosureFailed(f"f^(m-1)(t0) misses the pole by {closure:.3e}")
    sep = min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
    return OrbitSetP(float(t0), n, m, pts, sep, closure)


def _partials(P: OrbitSetP):
    w = P.points[1]
    fw, fz = [], []
    for c in P.points[1:]:
        a, b = eval_F_partials(w, c)
        if b == 0:
            raise SingularPartial(f"dF/dz vanishes at z = {c!r}")
        fw.append(a)
        fz.append(b)
    return np.array(fw), np.array(fz)


def transfer_matrix(P: OrbitSetP) -> TransferMatrix:
    dim = P.m - 1
    fw, fz = _partials(P)
    A = np.zeros((dim, dim))
    for i in range(dim):
        A[i, 0] += -fw[i] / fz[i]
        if i < dim - 1:
            A[i, i + 1] = 1.0 / fz[i]
    return TransferMatrix(dim, A)


def eigenvalues(A: TransferMatrix) -> np.ndarray:
    return np.linalg.eigvals(A.entries)


def spectral_radius(A: TransferMatrix) -> float:
    if A.dim == 0:
        return 0.0
    return float(np.max(np.abs(eigenvalues(A))))


def poly_P_coefficients(P: OrbitSetP) -> np.ndarray:
    """Coefficients of P(rho) in increasing degree, starting with 1."""
    fw, fz = _partials(P)
    chain = np.cumprod(fz)  # (F^n)'(c_1), n = 1..m-1
    return np.concatenate([[1.0], fw / chain])


def poly_P(P: OrbitSetP, rho: float) -> float:
    coef = poly_P_coefficients(P)
    return float(np.polynomial.polynomial.polyval(rho, coef))


def poly_P_roots(P: OrbitSetP) -> np.ndarray:
    return np.polynomial.polynomial.polyroots(poly_P_coefficients(P))


def orbit_derivative(P: OrbitSetP) -> float:
    """(F^(m-1))'(c_1) as the running product of dF/dz along the orbit."""
    _, fz = _partials(P)
    return float(np.prod(fz))


def phi_prime(P: OrbitSetP, h0: float = 1e-7, fd_bits: int = FD_BITS) -> PhiPrime:
    """Phi'(t0) by a 5-point centered difference and via (F^(m-1))'(c_1) P(1).

    The difference quotient is evaluated in ``fd_bits`` precision so that
    rounding does not limit it.  The stencil must keep the orbit on one
    branch; it is halved up to 30 times before BranchJump is raised.
    """
    ops = get_ops(fd_bits)
    t0 = ops.num(P.t0)
    _, sig0 = phi_beta(t0, P.n, fd_bits, with_signature=True)
    h = ops.num(h0) * (1 + abs(t0))
    for _ in range(30):
        vals, ok = [], True
        for k in (-2, -1, 1, 2):
            v, s = phi_beta(t0 + k * h, P.n, fd_bits, with_signature=True)
            if s != sig0:
                ok = False
                break
            vals.append(v)
        if ok:
            break
        h /= 2
    else:
        raise BranchJump(f"no single-branch stencil around t0 = {P.t0!r}")
    fm2, fm1, f1, f2 = vals
    numeric = float((-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h))
    D = orbit_derivative(P)
    ident = D * poly_P(P, 1.0)
    return PhiPrime(numeric, ident, numeric / D > 0)


def certificate(n: int, t0: float | None = None, bracket: tuple | None = None) -> dict:
    """Full certificate at beta_n as a JSON-ready dictionary."""
    if t0 is None:
        from .cascade import cascade_table

        if bracket is None:
            tab = cascade_table(n)
            if len(tab.betas) < n:
                raise RuntimeError("; ".join(tab.failures) or "cascade failed")
            t0 = tab.beta(n)
        else:
            t0 = solve_beta(n, bracket).t
    P = build_orbit_P(t0, n)
    A = transfer_matrix(P)
    ev = eigenvalues(A)
    roots = poly_P_roots(P)
    pp = phi_prime(P)
    rho = spectral_radius(A)
    return {
        "n": n,
        "t0": P.t0,
        "m": P.m,
        "separation": P.separation,
        "closure_residual": P.closure_residual,
        "spectral_radius": rho,
        "min_abs_one_minus_lambda": float(np.min(np.abs(1 - ev))) if len(ev) else math.inf,
        "eigenvalues": [[float(z.real), float(z.imag)] for z in sorted(ev, key=lambda z: (z.real, z.imag))],
        "eigen_root_mismatch": eigen_root_mismatch(ev, roots),
        "P1": poly_P(P, 1.0),
        "orbit_derivative": orbit_derivative(P),
        "phi_prime_numeric": pp.numeric,
        "phi_prime_identity": pp.via_identity,
        "positivity": bool(pp.positivity),
    }


def eigen_root_mismatch(ev: np.ndarray, roots: np.ndarray) -> float:
    """Max distance between the eigenvalues and the reciprocal roots of P.

    The multisets are matched greedily in order of decreasing modulus.
    """
    if len(ev) != len(roots):
        return math.inf
    if len(ev) == 0:
        return 0.0
    recip = list(1.0 / roots)
    worst = 0.0
    for z in sorted(ev, key=lambda z: -abs(z)):
        j = min(range(len(recip)), key=lambda i: abs(recip[i] - z))
        worst = max(worst, abs(recip[j] - z))
        recip.pop(j)
    return float(worst)


def certificate_ok(cert: dict) -> bool:
    rel = abs(cert["phi_prime_numeric"] - cert["phi_prime_identity"]) / abs(cert["phi_prime_numeric"])
    return (cert["spectral_radius"] <= 1 + 1e-9
            and cert["min_abs_one_minus_lambda"] > 1e-6
            and rel < 1e-5
            and cert["positivity"]
            and cert["eigen_root_mismatch"] < 1e-8)


def certificate_json(cert: dict) -> str:
    return json.dumps(cert, indent=2, sort_keys=True)
