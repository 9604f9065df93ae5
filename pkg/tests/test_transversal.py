import json
import math

import numpy as np
import pytest

from tancascade.errors import ClosureFailed
from tancascade.tanmap import eval_F_partials
from tancascade.transversal import (
    build_orbit_P,
    certificate,
    certificate_json,
    certificate_ok,
    eigen_root_mismatch,
    eigenvalues,
    orbit_derivative,
    phi_prime,
    poly_P,
    poly_P_coefficients,
    poly_P_roots,
    spectral_radius,
    transfer_matrix,
)

# frozen from tests/oracle_gen.py
BETAS = [2.9418125008545883318, 3.0813547977643741077, 3.0922058071322562009,
         3.0930566424936867786, 3.0931172465888213455]
A_AT_BETA1 = 0.14902368071464397738
PHI_PRIME_BETA1 = -5.4807235465550302532


def test_orbit_set_closes():
    P = build_orbit_P(BETAS[1], 2)
    assert P.m == 4 and len(P.points) == 4
    assert P.points[0] == -math.pi / 2 and P.points[1] == BETAS[1]
    assert P.closure_residual < 1e-10
    assert P.separation > 0


def test_orbit_set_rejects_non_virtual():
    with pytest.raises(ClosureFailed):
        build_orbit_P(3.0, 1)


def test_level_one_matrix_oracle():
    P = build_orbit_P(BETAS[0], 1)
    A = transfer_matrix(P)
    assert A.dim == 1
    assert A.entries[0, 0] == pytest.approx(A_AT_BETA1, rel=1e-12)
    fw, fz = eval_F_partials(BETAS[0], BETAS[0])
    assert A.entries[0, 0] == pytest.approx(-fw / fz, rel=1e-15)


def test_phi_prime_level_one_oracle():
    P = build_orbit_P(BETAS[0], 1)
    pp = phi_prime(P)
    assert pp.numeric == pytest.approx(PHI_PRIME_BETA1, rel=1e-12)
    assert pp.via_identity == pytest.approx(PHI_PRIME_BETA1, rel=1e-12)
    assert pp.positivity


def test_level_two_chain_rule():
    # m = 4: P(rho) = 1 + rho L1/F1' + rho^2 L2/(F1'F2') + rho^3 L3/(F1'F2'F3')
    P = build_orbit_P(BETAS[1], 2)
    w = P.points[1]
    parts = [eval_F_partials(w, c) for c in P.points[1:]]
    coef = [1.0]
    chain = 1.0
    for fw, fz in parts:
        chain *= fz
        coef.append(fw / chain)
    assert np.allclose(poly_P_coefficients(P), coef, rtol=1e-14, atol=0)
    assert orbit_derivative(P) == pytest.approx(chain, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matrix_sparsity(n):
    A = transfer_matrix(build_orbit_P(BETAS[n - 1], n)).entries
    dim = 2 ** n - 1
    assert A.shape == (dim, dim)
    for i in range(dim):
        for j in range(dim):
            if j != 0 and j != i + 1:
                assert A[i, j] == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_polynomial_matches_determinant(n):
    P = build_orbit_P(BETAS[n - 1], n)
    A = transfer_matrix(P).entries
    assert poly_P(P, 0.0) == 1.0
    for rho in (0.3, -0.7, 1.0):
        det = np.linalg.det(np.eye(A.shape[0]) - rho * A)
        assert poly_P(P, rho) == pytest.approx(det, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_roots_are_reciprocal_eigenvalues(n):
    P = build_orbit_P(BETAS[n - 1], n)
    A = transfer_matrix(P)
    assert eigen_root_mismatch(eigenvalues(A), poly_P_roots(P)) < 1e-8
    assert spectral_radius(A) < 1


def test_eigen_root_mismatch_edge_cases():
    assert eigen_root_mismatch(np.array([]), np.array([])) == 0.0
    assert eigen_root_mismatch(np.array([0.5]), np.array([])) == math.inf
    assert eigen_root_mismatch(np.array([0.5, 0.25]), np.array([4.0, 2.0])) < 1e-15


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_certificates(n):
    cert = certificate(n, t0=BETAS[n - 1])
    assert certificate_ok(cert)
    assert cert["spectral_radius"] < 1
    rel = abs(cert["phi_prime_numeric"] - cert["phi_prime_identity"]) / abs(cert["phi_prime_numeric"])
    assert rel < 1e-5
    doc = json.loads(certificate_json(cert))
    assert doc["n"] == n and doc["m"] == 2 ** n
    assert len(doc["eigenvalues"]) == 2 ** n - 1


def test_certificate_with_bracket():
    cert = certificate(1, bracket=(2.7, 3.0))
    assert cert["t0"] == pytest.approx(BETAS[0], abs=1e-13)
