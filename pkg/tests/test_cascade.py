import math

import pytest

from tancascade.cascade import (
    CascadeTable,
    beta_target,
    cascade_table,
    estimate_t_infinity,
    period_schedule,
    phi_beta,
    scan_beta_bracket,
    solve_alpha,
    solve_beta,
)
from tancascade.cycles import count_distinct_cycles, find_attracting_cycle
from tancascade.errors import InsufficientData, NoSignChange

# frozen from tests/oracle_gen.py (60-digit mpmath, independent solver)
ALPHAS = [2.6663322665357872944, 3.0608526262371592633, 3.0905955391453527406,
          3.0929372473908038919]
BETAS = [2.9418125008545883318, 3.0813547977643741077, 3.0922058071322562009,
         3.0930566424936867786, 3.0931172465888213455]
T_INF_DEPTH5 = 3.0931218944134566515


def test_anchors(table5):
    for n, a in enumerate(ALPHAS, 1):
        assert table5.alpha(n) == pytest.approx(a, abs=1e-10)
    for n, b in enumerate(BETAS, 1):
        assert table5.beta(n) == pytest.approx(b, abs=1e-12)
    assert table5.beta(0) == math.pi / 2
    assert table5.depth == 5 and not table5.failures


def test_residuals(table5):
    for e in table5.betas:
        assert e.residuals[0] < 1e-10
    for e in table5.alphas[:4]:
        assert e.residuals[0] < 1e-9
        assert e.residuals[1] < 1e-12


def test_interleaving(table5):
    assert table5.is_interleaved()
    seq = table5.interleaved()
    assert seq[0] == math.pi / 2 and len(seq) == 11


def test_t_infinity_estimate(table5):
    assert table5.t_infinity_estimate == pytest.approx(T_INF_DEPTH5, abs=1e-13)
    assert table5.beta(5) < table5.t_infinity_estimate < math.pi


def test_deeper_estimates_converge(table8):
    assert table8.depth == 8
    assert table8.is_interleaved()
    assert abs(table8.t_infinity_estimate - T_INF_DEPTH5) < 1e-6
    assert table8.beta(8) < table8.t_infinity_estimate


def test_estimate_synthetic():
    est = estimate_t_infinity([1.0, 2.0, 3.0])
    assert est.divergent and est.t_inf == math.inf
    est = estimate_t_infinity([0.0, 1.0, 1.5, 1.75])
    assert not est.divergent
    assert est.t_inf == pytest.approx(2.0)
    assert est.ratios == pytest.approx([2.0, 2.0])
    with pytest.raises(InsufficientData):
        estimate_t_infinity([1.0, 2.0])


def test_phi_beta_sign_change():
    assert phi_beta(BETAS[0] - 1e-6, 1) * phi_beta(BETAS[0] + 1e-6, 1) < 0
    assert abs(phi_beta(BETAS[0], 1)) < 1e-12
    v, sig = phi_beta(3.0, 2, with_signature=True)
    assert len(sig) == 3
    assert beta_target(1) == math.pi / 2 and beta_target(2) == -math.pi / 2


def test_solve_beta_extended_precision():
    r = solve_beta(2, (ALPHAS[1], 3.09), precision_bits=160)
    assert abs(float(r.t) - BETAS[1]) < 1e-15


def test_scan_without_root():
    with pytest.raises(NoSignChange):
        scan_beta_bracket(1, 2.0, 2.5, points=64)


def test_solve_alpha_level_two():
    r = solve_alpha(2, (BETAS[0], BETAS[0] + (BETAS[0] - math.pi / 2)))
    assert r.t == pytest.approx(ALPHAS[1], abs=1e-10)


def test_custom_alpha_bracket():
    tab = cascade_table(1, alpha1_bracket=(2.0, 3.0))
    assert tab.alpha(1) == pytest.approx(ALPHAS[0], abs=1e-12)
    assert tab.t_infinity_estimate != tab.t_infinity_estimate  # nan below depth 3


def test_schedule(table5):
    assert period_schedule(0.5, table5) == (1, 1)
    assert period_schedule(1.2, table5) == (1, 4)
    assert period_schedule(2.0, table5) == (2, 2)
    assert period_schedule(2.9, table5) == (2, 4)
    assert period_schedule(3.0, table5) == (1, 8)
    assert period_schedule(3.07, table5) == (2, 8)
    assert period_schedule(3.085, table5) == (1, 16)
    assert period_schedule(3.2, table5) is None


@pytest.mark.parametrize("t", [0.5, 1.2, 2.0, 2.9, 3.0, 3.07, 3.085, 3.0915])
def test_schedule_matches_dynamics(table5, t):
    count, period = period_schedule(t, table5)
    c = find_attracting_cycle(t)
    assert c.period_T == period
    assert count_distinct_cycles(t) == count


def test_empty_table():
    tab = CascadeTable()
    assert tab.depth == 0 and tab.is_interleaved()
