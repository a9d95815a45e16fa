# -*- coding: utf-8 -*-
from numpy import arange, array as npArray
from numpy import floor, full, inf, int64, lexsort, nonzero, ones, uint8

from scene2prompt import Imports

_compiled = {}


def disc_offsets(radius: int):
    """Pixel offsets (dx, dy) of a filled disc, dx^2 + dy^2 <= r^2."""
    span = arange(-radius, radius + 1)
    ox = npArray([dx for dy in span for dx in span if dx * dx + dy * dy <= radius * radius], dtype=int64)
    oy = npArray([dy for dy in span for dx in span if dx * dx + dy * dy <= radius * radius], dtype=int64)
    return ox, oy


def _candidates(px, py, valid, width, height, radius):
    """Indices and integer centers of points whose disc can touch the image."""
    keep = valid & (px >= -radius - 1) & (px < width + radius + 1) & (py >= -radius - 1) & (py < height + radius + 1)
    idx = nonzero(keep)[0]
    return idx, floor(px[idx]).astype(int64), floor(py[idx]).astype(int64)


def _splat_loop(cx, cy, depth, idx, colors, ox, oy, width, height, image, zbuf):
    for m in range(idx.shape[0]):
        d = depth[idx[m]]
        for k in range(ox.shape[0]):
            x, y = cx[m] + ox[k], cy[m] + oy[k]
            if x < 0 or x >= width or y < 0 or y >= height: continue
            p = y * width + x
            # strict: on equal depth the earlier point keeps the pixel
            if d < zbuf[p]:
                zbuf[p] = d
                image[p, 0] = colors[idx[m], 0]
                image[p, 1] = colors[idx[m], 1]
                image[p, 2] = colors[idx[m], 2]


def splat_numpy(cx, cy, depth, idx, colors, ox, oy, width, height, image, zbuf):
    """Vectorized z-buffer: per pixel the nearest splat wins, ties to the lower point index."""
    X = (cx[:, None] + ox[None, :]).reshape(-1)
    Y = (cy[:, None] + oy[None, :]).reshape(-1)
    P = (idx[:, None] + 0 * ox[None, :]).reshape(-1)
    inside = (X >= 0) & (X < width) & (Y >= 0) & (Y < height)
    flat, pts = (Y * width + X)[inside], P[inside]
    d = depth[pts]

    order = lexsort((pts, d, flat))
    flat, pts, d = flat[order], pts[order], d[order]
    first = ones(flat.shape[0], dtype=bool)
    first[1:] = flat[1:] != flat[:-1]

    zbuf[flat[first]] = d[first]
    image[flat[first]] = colors[pts[first]]


def splat_numba():
    """The compiled kernel, built on first use."""
    if "splat" not in _compiled:
        from numba import njit
        _compiled["splat"] = njit(cache=False)(_splat_loop)
    return _compiled["splat"]


def rasterize(px, py, depth, valid, colors, width, height, radius, background, numba=None):
    """(H, W, 3) uint8 image and (H, W) depth buffer (inf on background)."""
    mode_numba = bool(numba) if isinstance(numba, bool) else True
    ox, oy = disc_offsets(radius)
    idx, cx, cy = _candidates(px, py, valid, width, height, radius)

    image = full((height * width, 3), background, dtype=uint8)
    zbuf = full(height * width, inf)
    if idx.shape[0] > 0:
        if Imports["numba"] and mode_numba:
            splat_numba()(cx, cy, depth, idx, colors, ox, oy, width, height, image, zbuf)
        else:
            splat_numpy(cx, cy, depth, idx, colors, ox, oy, width, height, image, zbuf)

    return image.reshape(height, width, 3), zbuf.reshape(height, width)
