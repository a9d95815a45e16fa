# -*- coding: utf-8 -*-
from dataclasses import dataclass, field

from numpy import asarray, float64, ndarray, vstack

from scene2prompt.utils import HierarchyError

from .scene_token import scene_token_with_cache
from .view_tokens import verify_patches, view_tokens_with_cache


@dataclass(frozen=True, eq=False)
class FeatureHierarchy:
    """patches (views, N, d), view_tokens (views, d), scene_token (1, d) and
    f_v, their (views * N + views + 1, d) concatenation."""
    patches: ndarray = field(repr=False)
    view_tokens: ndarray = field(repr=False)
    scene_token: ndarray = field(repr=False)
    f_v: ndarray = field(repr=False)
    trace: dict = field(default=None, repr=False)

    @property
    def patches_per_view(self) -> int:
        return self.patches.shape[1]

    def __len__(self) -> int:
        return self.f_v.shape[0]


def assemble_hierarchy(patches, view_tokens, scene_token, **kwargs) -> FeatureHierarchy:
    """Hiervis: Hierarchical Visual Embedding"""
    # Validate Arguments
    patches = asarray(patches, dtype=float64)
    view_tokens = asarray(view_tokens, dtype=float64)
    scene_token = asarray(scene_token, dtype=float64).reshape(1, -1)
    if patches.ndim != 3 or view_tokens.ndim != 2:
        raise HierarchyError(f"[X] Expected patches (views, N, d) and view tokens (views, d), got {patches.shape} and {view_tokens.shape}")
    views, n, d = patches.shape
    if view_tokens.shape != (views, d) or scene_token.shape[1] != d:
        raise HierarchyError(
            f"[X] Dimension mismatch: patches {patches.shape}, view tokens {view_tokens.shape}, scene token {scene_token.shape}"
        )

    # Calculate Result
    f_v = vstack([patches.reshape(views * n, d), view_tokens, scene_token])

    return FeatureHierarchy(patches, view_tokens, scene_token, f_v, kwargs.pop("trace", None))


def hierarchy_forward(model, patches) -> FeatureHierarchy:
    """Patches -> view tokens -> scene token -> f_v, recording the caches
    backward needs."""
    patches = verify_patches(model, patches)
    tokens, view_caches = view_tokens_with_cache(model, patches)
    scene, scene_cache = scene_token_with_cache(model, tokens)
    trace = {"view": view_caches, "scene": scene_cache}
    return assemble_hierarchy(patches, tokens, scene, trace=trace)


assemble_hierarchy.__doc__ = \
"""Hierarchical Visual Embedding

The final visual sequence: every patch feature view by view, then the five
view tokens, then the scene token. For N patches per view there are
5N + 5 + 1 tokens and the token at index 5N is V^1.

Calculation:
    F_v = concat(f^1_1, .., f^1_N, .., f^5_N, V^1, .., V^5, S)

Args:
    patches (array): (5, N, d)
    view_tokens (array): (5, d)
    scene_token (array): (d,) or (1, d)

Returns:
    FeatureHierarchy: with f_v of shape (5N + 6, d)
"""
