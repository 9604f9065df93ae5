import math

import numpy as np
import pytest

from tancascade.errors import IoFailure
from tancascade.render import (
    BACKGROUND,
    RESERVED,
    Raster,
    RenderConfig,
    count_branches,
    diagram_columns,
    parse_ppm,
    period_color,
    plane_coordinates,
    plane_periods,
    ppm_bytes,
    read_ppm,
    render_orbit_diagram,
    render_parameter_plane,
    row_transitions,
    write_ppm,
)


def test_config_validation():
    with pytest.raises(ValueError):
        RenderConfig(width=0)
    with pytest.raises(ValueError):
        RenderConfig(max_period_T=2048)


def test_raster_shape_check():
    with pytest.raises(ValueError):
        Raster(2, 2, np.zeros((3, 2, 3), dtype=np.uint8))


def test_ppm_bytes_exact():
    pix = np.array([[[255, 0, 0], [0, 255, 0]]], dtype=np.uint8)
    assert ppm_bytes(Raster(2, 1, pix)) == b"P6\n2 1\n255\n\xff\x00\x00\x00\xff\x00"


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    pix = rng.integers(0, 256, size=(5, 4, 3), dtype=np.uint8)
    path = tmp_path / "r.ppm"
    write_ppm(Raster(4, 5, pix), path)
    back = read_ppm(path)
    assert back.width == 4 and back.height == 5
    assert np.array_equal(back.pixels, pix)


def test_ppm_errors(tmp_path):
    with pytest.raises(IoFailure):
        parse_ppm(b"P3\n1 1\n255\n000")
    with pytest.raises(IoFailure):
        parse_ppm(b"P6\n2 2\n255\n\x00")
    with pytest.raises(IoFailure):
        read_ppm(tmp_path / "missing.ppm")
    with pytest.raises(IoFailure):
        write_ppm(Raster(1, 1, np.zeros((1, 1, 3), np.uint8)), tmp_path / "no" / "x.ppm")


def test_period_colors_distinct():
    cols = {period_color(2 ** k) for k in range(11)}
    assert len(cols) == 11
    assert period_color(0) == RESERVED
    assert RESERVED not in cols
    assert period_color(4, {4: (1, 2, 3)}) == (1, 2, 3)


def test_plane_periods_on_real_axis():
    t = np.array([0.5, 1.2, 2.0, 2.9, 3.0, 3.07]) + 0j
    per = plane_periods(t, 3000, 64, 1e-6, 40.0)
    assert list(per) == [1, 4, 2, 4, 8, 8]


def _small_plane(**kw):
    cfg = RenderConfig(region=(-3.15, 3.15, 0.0, 3.15), width=64, height=32, transient=600,
                       **kw)
    return cfg, render_parameter_plane(cfg)


def test_plane_examples_and_symmetry():
    cfg, r = _small_plane()
    assert r.pixels.shape == (32, 64, 3)
    t = plane_coordinates(cfg)
    # pixel nearest t = 0.5 and t = 2.0 on the lowest row
    row = cfg.height - 1
    j05 = int(np.argmin(np.abs(t[row].real - 0.5)))
    j20 = int(np.argmin(np.abs(t[row].real - 2.0)))
    assert r.periods[row, j05] == 1
    assert r.periods[row, j20] == 2
    assert tuple(r.pixels[row, j05]) == period_color(1)
    # t and -conj(t) carry the same period
    assert np.array_equal(r.periods, r.periods[:, ::-1])


def test_plane_deterministic_and_parallel():
    _, a = _small_plane()
    _, b = _small_plane()
    _, c = _small_plane(workers=2)
    assert ppm_bytes(a) == ppm_bytes(b) == ppm_bytes(c)


def test_row_transitions():
    pix = np.zeros((1, 5, 3), dtype=np.uint8)
    pix[0, 3:] = 9
    assert row_transitions(Raster(5, 1, pix), 0) == [2]


def _diagram():
    cfg = RenderConfig(region=(0.0, math.pi), width=800, height=600, transient=3000,
                       max_iter=256)
    return cfg, render_orbit_diagram(cfg)


def _column(cfg, t):
    return int(np.argmin(np.abs(diagram_columns(cfg) - t)))


def test_diagram_branch_counts():
    cfg, r = _diagram()
    assert count_branches(r, _column(cfg, 0.5))["total"] == 1
    assert count_branches(r, _column(cfg, 2.0)) == {"plus": 1, "minus": 1, "total": 2,
                                                    "shared": 0}
    assert count_branches(r, _column(cfg, 2.9))["total"] == 4
    c3 = count_branches(r, _column(cfg, 3.0))
    assert c3["total"] == 4 and c3["shared"] == 4


def test_diagram_merging_across_beta1():
    cfg, r = _diagram()
    before = count_branches(r, _column(cfg, 2.9))
    after = count_branches(r, _column(cfg, 3.0))
    assert before["plus"] == 2 and before["minus"] == 2 and before["shared"] == 0
    assert after["plus"] == 4 and after["minus"] == 4


def test_diagram_deterministic_and_background():
    cfg, a = _diagram()
    _, b = _diagram()
    assert ppm_bytes(a) == ppm_bytes(b)
    assert np.all(a.pixels == np.array(BACKGROUND, np.uint8), axis=2).any()
    assert diagram_columns(cfg)[-1] == pytest.approx(math.pi)
