"""Rasters: complex parameter plane coloured by period, and the real orbit diagram.

Both renderers are vectorised with numpy over pixels or columns, use fixed
iteration orders and write into preallocated buffers, so identical
configurations give byte-identical output.
"""

from __future__ import annotations

import colorsys
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import IoFailure

PLANE_REGION = (-3.15, 3.15, 0.0, 3.15)
RESERVED = (0, 0, 0)
BACKGROUND = (255, 255, 255)
PLUS_COLOR = (200, 30, 30)
MINUS_COLOR = (30, 60, 200)
BOTH_COLOR = (140, 30, 160)
MARKER_COLOR = (200, 200, 200)


@dataclass
class RenderConfig:
    """Renderer settings.

    ``region`` is (re_min, re_max, im_min, im_max) for the parameter plane
    and (t_min, t_max) for the orbit diagram.  ``max_iter`` is the number of
    plotted iterates per column in the orbit diagram; the plane searches
    near-returns over ``max_period_T`` steps after ``transient`` steps.
    """

    region: tuple = PLANE_REGION
    width: int = 400
    height: int = 400
    transient: int = 1500
    max_iter: int = 256
    max_period_T: int = 64
    tol: float = 1e-6
    palette: Optional[dict] = None
    workers: int = 1
    saturation: float = 40.0
    markers: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("raster dimensions must be positive")
        if not 1 <= self.max_period_T <= 2 ** 10:
            raise ValueError("max_period_T must lie in 1..1024")


@dataclass
class Raster:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8
    periods: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError("pixel buffer does not match width x height")


def period_color(p: int, palette: Optional[dict] = None) -> tuple:
    """Colour for a T-period: hue follows log2 p; 0 means no period found."""
    if palette and p in palette:
        return tuple(palette[p])
    if p <= 0:
        return RESERVED
    hue = (0.13 * math.log2(p)) % 1.0
    r, g, b = colorsys.hsv_to_rgb(hue, 0.85, 0.95)
    return (int(round(255 * r)), int(round(255 * g)), int(round(255 * b)))


def T_array(t: np.ndarray, z: np.ndarray, sat: float) -> np.ndarray:
    """Elementwise i t tan z with the asymptotic values beyond |Im z| > sat."""
    big = np.abs(z.imag) > sat
    zs = np.where(big, 0.0, z)
    with np.errstate(all="ignore"):
        out = 1j * t * np.tan(zs)
    if big.any():
        out[big] = -t[big] * np.sign(z.imag[big])
    bad = ~np.isfinite(out)
    if bad.any():
        out[bad] = 1j * 2 * sat
    return out


def plane_coordinates(config: RenderConfig) -> np.ndarray:
    re0, re1, im0, im1 = config.region
    dx = (re1 - re0) / config.width
    dy = (im1 - im0) / config.height
    re = re0 + (np.arange(config.width) + 0.5) * dx
    im = im1 - (np.arange(config.height) + 0.5) * dy
    return re[None, :] + 1j * im[:, None]


def plane_periods(t: np.ndarray, transient: int, max_period_T: int, tol: float,
                  sat: float) -> np.ndarray:
    """Minimal T-period of the cycle attracting the asymptotic value t (0 if none)."""
    shape = t.shape
    t = t.ravel().astype(complex)
    z = t.copy()
    for _ in range(transient):
        z = T_array(t, z, sat)
    w = z.copy()
    scale = tol * (1 + np.abs(w))
    per = np.zeros(t.shape, dtype=np.int64)
    for k in range(1, max_period_T + 1):
        z = T_array(t, z, sat)
        hit = (per == 0) & (np.abs(z - w) < scale)
        per[hit] = k
    return per.reshape(shape)


def _plane_chunk(args):
    t, transient, pmax, tol, sat = args
    return plane_periods(t, transient, pmax, tol, sat)


def render_parameter_plane(config: RenderConfig) -> Raster:
    t = plane_coordinates(config)
    args = (config.transient, config.max_period_T, config.tol, config.saturation)
    if config.workers > 1:
        chunks = np.array_split(t, config.workers, axis=0)
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            parts = list(ex.map(_plane_chunk, [(c,) + args for c in chunks]))
        per = np.concatenate(parts, axis=0)
    else:
        per = plane_periods(t, *args)
    pix = np.zeros((config.height, config.width, 3), dtype=np.uint8)
    for p in np.unique(per):
        pix[per == p] = period_color(int(p), config.palette)
    return Raster(config.width, config.height, pix, per)


def row_transitions(raster: Raster, row: int) -> list:
    """Column indices j with a colour change between pixels j and j + 1."""
    r = raster.pixels[row]
    diff = np.any(r[1:] != r[:-1], axis=1)
    return [int(j) for j in np.nonzero(diff)[0]]


def pixel_of(value: float, lo: float, hi: float, n: int) -> float:
    """Continuous pixel coordinate of ``value`` (pixel j spans [j, j + 1))."""
    return (value - lo) / (hi - lo) * n


# ---------------------------------------------------------------------------
# orbit diagram


def diagram_columns(config: RenderConfig) -> np.ndarray:
    t0, t1 = config.region[:2]
    return t0 + (np.arange(config.width) + 1) * (t1 - t0) / config.width


def diagram_orbits(t: np.ndarray, transient: int, samples: int) -> tuple:
    """Last ``samples`` iterates of f_t from +t and -t, shape (samples, columns)."""
    xp = t.astype(float).copy()
    xm = -xp
    with np.errstate(all="ignore"):
        for _ in range(transient):
            xp = -t * np.tanh(t * np.tan(xp))
            xm = -t * np.tanh(t * np.tan(xm))
        out_p = np.empty((samples, t.size))
        out_m = np.empty((samples, t.size))
        for k in range(samples):
            xp = -t * np.tanh(t * np.tan(xp))
            xm = -t * np.tanh(t * np.tan(xm))
            out_p[k] = xp
            out_m[k] = xm
    return out_p, out_m


def height_to_row(y: np.ndarray, height: int) -> np.ndarray:
    rows = np.floor((math.pi - y) / (2 * math.pi) * height).astype(np.int64)
    return np.clip(rows, 0, height - 1)


def render_orbit_diagram(config: RenderConfig) -> Raster:
    W, H = config.width, config.height
    t = diagram_columns(config)
    op, om = diagram_orbits(t, config.transient, config.max_iter)
    plus = np.zeros((H, W), dtype=bool)
    minus = np.zeros((H, W), dtype=bool)
    cols = np.broadcast_to(np.arange(W), op.shape)
    fin = np.isfinite(op)
    plus[height_to_row(op[fin], H), cols[fin]] = True
    fin = np.isfinite(om)
    minus[height_to_row(om[fin], H), cols[fin]] = True
    pix = np.empty((H, W, 3), dtype=np.uint8)
    pix[:] = BACKGROUND
    t0, t1 = config.region[:2]
    for m in config.markers:
        j = int(math.floor(pixel_of(m, t0, t1, W)))
        if 0 <= j < W:
            pix[:, j] = MARKER_COLOR
    pix[plus] = PLUS_COLOR
    pix[minus] = MINUS_COLOR
    pix[plus & minus] = BOTH_COLOR
    return Raster(W, H, pix)


def _runs(mask: np.ndarray) -> int:
    m = mask.astype(np.int8)
    return int(np.sum(np.diff(np.concatenate([[0], m])) == 1))


def count_branches(raster: Raster, column: int) -> dict:
    """Number of separate heights drawn in a column, per orbit colour."""
    col = raster.pixels[:, column]

    def is_(c):
        return np.all(col == np.array(c, dtype=np.uint8), axis=1)

    both = is_(BOTH_COLOR)
    plus = is_(PLUS_COLOR) | both
    minus = is_(MINUS_COLOR) | both
    return {"plus": _runs(plus), "minus": _runs(minus), "total": _runs(plus | minus),
            "shared": _runs(both)}


# ---------------------------------------------------------------------------
# PPM


def ppm_bytes(raster: Raster) -> bytes:
    header = f"P6\n{raster.width} {raster.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(raster.pixels, dtype=np.uint8).tobytes()


def write_ppm(raster: Raster, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(ppm_bytes(raster))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def parse_ppm(data: bytes) -> Raster:
    parts = data.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P6" or parts[3] != b"255":
        raise IoFailure("not a binary PPM with maxval 255")
    w, h = int(parts[1]), int(parts[2])
    header_len = len(f"P6\n{w} {h}\n255\n")
    payload = data[header_len:]
    if len(payload) != w * h * 3:
        raise IoFailure("PPM payload size does not match header")
    pix = np.frombuffer(payload, dtype=np.uint8).reshape(h, w, 3).copy()
    return Raster(w, h, pix)


def read_ppm(path) -> Raster:
    try:
        with open(path, "rb") as fh:
            return parse_ppm(fh.read())
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
