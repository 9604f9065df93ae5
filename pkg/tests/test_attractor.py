import csv
import io
import json
import math

import pytest

from tancascade.attractor import (
    build_levels,
    decomposition_ok,
    dump_csv,
    dump_json,
    intervals,
    max_bridge_lengths,
    max_valid_depth,
    orbit_constants,
    ordering_holds,
    required_constants,
    signed_orbit,
    verify_system,
)
from tancascade.errors import OrderingViolated
from tancascade.tanmap import MapParams, eval_f

HALF_PI = math.pi / 2
T_INF_DEPTH5 = 3.0931218944134566515  # frozen from tests/oracle_gen.py


def test_orbit_constants_basic():
    c = orbit_constants(T_INF_DEPTH5, 8)
    assert c[0] == T_INF_DEPTH5
    assert all(0 < v <= T_INF_DEPTH5 for v in c)
    assert ordering_holds(c)
    p = MapParams(T_INF_DEPTH5)
    assert c[1] == abs(eval_f(p, T_INF_DEPTH5).value)


def test_signed_orbit_is_the_orbit():
    xs = signed_orbit(T_INF_DEPTH5, 4)
    assert xs[0] == T_INF_DEPTH5
    p = MapParams(T_INF_DEPTH5)
    for a, b in zip(xs, xs[1:]):
        assert b == eval_f(p, a).value


def test_required_constants():
    assert required_constants(0) == 4
    assert required_constants(4) == 33


def test_level_anchors():
    s = build_levels(T_INF_DEPTH5, 4)
    c = s.c
    j0 = s.levels[0].bridge(1, "+")
    assert (j0.left, j0.right) == (c(2), c(1))
    jm = s.levels[0].bridge(1, "-")
    assert (jm.left, jm.right) == (-c(1), -c(2))
    g0 = s.levels[0].gaps_plus[0]
    assert (g0.left, g0.right) == (c(4), c(3))
    assert (g0.left_label, g0.right_label) == (4, 3)
    j21 = s.levels[2].bridge(1, "-")
    assert {j21.left, j21.right} == {-c(1), -c(5)}
    assert {j21.left_label, j21.right_label} == {-1, -5}


def test_decomposition_level_one():
    s = build_levels(T_INF_DEPTH5, 1)
    j0 = s.levels[0].bridge(1)
    g0 = s.levels[0].gaps_plus[0]
    j11, j12 = s.levels[1].bridge(1), s.levels[1].bridge(2)
    lo, hi = sorted((j11, j12), key=lambda b: b.left)
    assert lo.left == j0.left and lo.right == g0.left
    assert g0.right == hi.left and hi.right == j0.right


def test_mapping_example():
    s = build_levels(T_INF_DEPTH5, 1)
    p = MapParams(T_INF_DEPTH5)
    assert abs(eval_f(p, s.c(3)).value) == pytest.approx(s.c(4), abs=1e-12)


def test_verify_depth_four():
    s = build_levels(T_INF_DEPTH5, 4)
    rep = verify_system(s)
    assert rep.ok, [(f.level, f.name, f.detail) for f in rep.failures()]
    names = {c.name for c in rep.checks}
    assert {"ordering", "disjoint", "symmetry", "decomposition", "mapping", "density",
            "pole", "shrinking", "imaginary_image"} <= names


def test_max_valid_depth_depends_on_estimate(t_star):
    assert max_valid_depth(T_INF_DEPTH5) == 4
    assert max_valid_depth(t_star) == 6
    rep = verify_system(build_levels(t_star, 6))
    assert rep.ok


def test_shrinking_lengths():
    s = build_levels(T_INF_DEPTH5, 4)
    L = max_bridge_lengths(s)
    assert all(b < a for a, b in zip(L, L[1:]))


def test_symmetry_exact():
    s = build_levels(T_INF_DEPTH5, 3)
    for lev in s.levels:
        for bp, bm in zip(lev.bridges_plus, lev.bridges_minus):
            assert bp.left == -bm.right and bp.right == -bm.left


def test_pole_membership():
    s = build_levels(T_INF_DEPTH5, 4)
    for lev in s.levels:
        assert any(b.contains(HALF_PI) for b in lev.bridges_plus)


def test_ordering_violation_far_from_t_inf():
    with pytest.raises(OrderingViolated):
        build_levels(2.0, 1)
    assert max_valid_depth(2.0) == -1
    assert decomposition_ok(orbit_constants(T_INF_DEPTH5, 17), 2)


def test_depth_limits():
    with pytest.raises(ValueError):
        build_levels(T_INF_DEPTH5, 7)


def test_dumps():
    s = build_levels(T_INF_DEPTH5, 2)
    rows = list(csv.DictReader(io.StringIO(dump_csv(s))))
    assert len(rows) == len(intervals(s))
    assert {r["kind"] for r in rows} == {"bridge", "gap"}
    doc = json.loads(dump_json(s, verify_system(s)))
    assert doc["depth"] == 2 and doc["ok"] is True
    assert len(doc["intervals"]) == len(rows)
