# -*- coding: utf-8 -*-
from numpy import arange, column_stack, float64, isfinite, meshgrid, where, zeros
from numpy.random import default_rng

from scene2prompt import HIERARCHY
from scene2prompt.utils import HierarchyError

DESCRIPTOR = 6


def patchify_stub(view, grid: int = None, dim: int = None, seed: int = 0, **kwargs):
    """Hiervis: Stub Patch Features"""
    # Validate Arguments
    grid = int(grid) if grid is not None else HIERARCHY["GRID"]
    dim = int(dim) if dim is not None else HIERARCHY["DIM"]
    height, width = view.image.shape[:2]
    if grid < 1 or height % grid != 0 or width % grid != 0:
        raise HierarchyError(f"[X] A {grid}x{grid} grid does not divide a {width}x{height} image")
    if dim < 1:
        raise HierarchyError(f"[X] dim must be >= 1, got {dim}")
    ch, cw = height // grid, width // grid

    # Calculate Result
    rgb = view.image.astype(float64).reshape(grid, ch, grid, cw, 3).mean(axis=(1, 3)) / 255.0
    depth = view.depth.reshape(grid, ch, grid, cw)
    finite = isfinite(depth)
    depth_sum = where(finite, depth, 0.0).sum(axis=(1, 3))
    depth_count = finite.sum(axis=(1, 3))
    depth_mean = where(depth_count > 0, depth_sum / where(depth_count > 0, depth_count, 1), 0.0)

    rows, cols = meshgrid(arange(grid), arange(grid), indexing="ij")
    descriptor = column_stack([
        rgb.reshape(-1, 3),
        depth_mean.reshape(-1),
        ((cols + 0.5) / grid).reshape(-1),
        ((rows + 0.5) / grid).reshape(-1),
    ])

    if dim >= DESCRIPTOR:
        features = zeros((grid * grid, dim))
        features[:, :DESCRIPTOR] = descriptor
        return features
    lift = default_rng(seed).uniform(-1.0, 1.0, size=(DESCRIPTOR, dim)) / DESCRIPTOR ** 0.5
    return descriptor @ lift


patchify_stub.__doc__ = \
"""Stub Patch Features

A stand-in for a frozen vision encoder so the hierarchy runs without one.
The image is cut into a g x g grid and each cell becomes one patch feature;
real encoder output enters through load_patch_features instead.

Calculation:
    cell (i, j), row-major:
        [mean R, mean G, mean B] / 255,
        mean depth over non-background pixels (0 if none),
        (j + 0.5) / g, (i + 0.5) / g
    dim >= 6: zero-padded to dim
    dim < 6:  lifted by a seeded (6, dim) linear map

Args:
    view (RenderedView): The rendered view
    grid (int): Cells per side. Default: 14
    dim (int): Feature dimension. Default: 64
    seed (int): Seed of the lift when dim < 6. Default: 0

Returns:
    numpy.ndarray: (grid * grid, dim) float64 patch matrix

Raises:
    HierarchyError: grid does not divide the image
"""
