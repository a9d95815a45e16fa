# -*- coding: utf-8 -*-
from dataclasses import dataclass
from re import compile as re_compile
from typing import Dict, List

from numpy import float64, isfinite, ndarray, ones, zeros
from numpy.random import default_rng

from scene2prompt import HIERARCHY, TOKENS
from scene2prompt.utils import HierarchyError

from ._layers import BLOCK_TENSORS


BLOCKS = ("view", "scene", "decoder")
WORD_RE = re_compile(r"<\|[a-z_]+\|>|<[^<>\s][^<>]*>|-?\d+(?:\.\d+)?|[a-z']+|[^\sa-z0-9]")


@dataclass
class HierarchyConfig:
    """Hierarchy and toy decoder sizes. heads must divide dim."""
    dim: int = HIERARCHY["DIM"]
    heads: int = HIERARCHY["HEADS"]
    ffn_mult: int = HIERARCHY["FFN_MULT"]
    views: int = HIERARCHY["VIEWS"]
    grid: int = HIERARCHY["GRID"]
    max_answer: int = HIERARCHY["MAX_ANSWER"]

    def __post_init__(self):
        for name in ("dim", "heads", "ffn_mult", "views", "grid", "max_answer"):
            value = int(getattr(self, name))
            if value < 1:
                raise HierarchyError(f"[X] HierarchyConfig.{name} must be >= 1, got {value}")
            setattr(self, name, value)
        if self.dim % self.heads != 0:
            raise HierarchyError(f"[X] heads ({self.heads}) must divide dim ({self.dim})")


@dataclass
class HierarchicalModel:
    """Named float64 tensors of the view block, scene block, query tokens and
    toy decoder. Tensor names are '<block>.<tensor>', 'query.view',
    'query.scene' and 'decoder.<tensor>'."""
    params: Dict[str, ndarray]
    heads: int = HIERARCHY["HEADS"]

    def __post_init__(self):
        for name, value in self.params.items():
            if not isfinite(value).all():
                raise HierarchyError(f"[X] Parameter '{name}' has non-finite entries")
        if self.dim % self.heads != 0:
            raise HierarchyError(f"[X] heads ({self.heads}) must divide dim ({self.dim})")

    @property
    def dim(self) -> int:
        return self.params["query.scene"].shape[1]

    @property
    def views(self) -> int:
        return self.params["query.view"].shape[0]

    @property
    def vocab_size(self) -> int:
        return self.params["decoder.embed"].shape[0]

    @property
    def max_answer(self) -> int:
        return self.params["decoder.pos"].shape[0]

    def block(self, name: str) -> Dict[str, ndarray]:
        """The tensors of one attention block, keyed without the block prefix."""
        if name not in BLOCKS:
            raise HierarchyError(f"[X] Unknown block '{name}', expected one of {BLOCKS}")
        return {t: self.params[f"{name}.{t}"] for t in BLOCK_TENSORS}

    def copy(self) -> "HierarchicalModel":
        return HierarchicalModel({k: v.copy() for k, v in self.params.items()}, self.heads)

    def names(self) -> List[str]:
        return sorted(self.params)

    def size(self) -> int:
        return sum(v.size for v in self.params.values())


def _glorot(rng, fan_in, fan_out, shape):
    limit = (6.0 / (fan_in + fan_out)) ** 0.5
    return rng.uniform(-limit, limit, size=shape)


def init_model(config: HierarchyConfig = None, vocab_size: int = 2, seed: int = 0, **kwargs) -> HierarchicalModel:
    """Hiervis: Model Initialization"""
    # Validate Arguments
    config = config if config is not None else HierarchyConfig(**kwargs)
    vocab_size = int(vocab_size)
    if vocab_size < 2:
        raise HierarchyError(f"[X] Vocabulary needs at least 2 tokens, got {vocab_size}")
    rng = default_rng(seed)
    d, hidden = config.dim, config.ffn_mult * config.dim

    # Calculate Result
    params = {}
    for block in BLOCKS:
        for ln in ("ln_q", "ln_kv", "ln_ff"):
            params[f"{block}.{ln}.gain"] = ones(d)
            params[f"{block}.{ln}.bias"] = zeros(d)
        for w in ("wq", "wk", "wv", "wo"):
            params[f"{block}.{w}"] = _glorot(rng, d, d, (d, d))
        params[f"{block}.bo"] = zeros(d)
        params[f"{block}.w1"] = _glorot(rng, d, hidden, (d, hidden))
        params[f"{block}.b1"] = zeros(hidden)
        params[f"{block}.w2"] = _glorot(rng, hidden, d, (hidden, d))
        params[f"{block}.b2"] = zeros(d)

    params["query.view"] = _glorot(rng, d, d, (config.views, d))
    params["query.scene"] = _glorot(rng, d, d, (1, d))
    params["decoder.embed"] = _glorot(rng, vocab_size, d, (vocab_size, d))
    params["decoder.pos"] = _glorot(rng, config.max_answer, d, (config.max_answer, d))
    params["decoder.ln_out.gain"] = ones(d)
    params["decoder.ln_out.bias"] = zeros(d)
    params["decoder.w_out"] = _glorot(rng, d, vocab_size, (d, vocab_size))
    params["decoder.b_out"] = zeros(vocab_size)

    return HierarchicalModel({k: v.astype(float64) for k, v in params.items()}, config.heads)


class ToyVocabulary:
    """Word-level vocabulary for the toy decoder.

    Ids 0 and 1 are <bos> and <unk>, followed by the prompt's demarcation and
    placeholder tokens, then the corpus words in sorted order.
    """
    RESERVED = [TOKENS["BOS"], TOKENS["UNK"]] + [
        TOKENS[k] for k in ("VISION_START", "VISION_END", "VIEW_START", "VIEW_END",
                            "SCENE_START", "SCENE_END", "VIEW", "SCENE", "IMAGE")
    ]

    def __init__(self, words=()):
        extra = sorted(set(words) - set(self.RESERVED))
        self.tokens = list(self.RESERVED) + extra
        self.index = {t: i for i, t in enumerate(self.tokens)}

    @classmethod
    def from_texts(cls, texts) -> "ToyVocabulary":
        words = set()
        for text in texts:
            words.update(cls.split(text))
        return cls(words)

    @staticmethod
    def split(text: str) -> List[str]:
        return WORD_RE.findall(str(text).lower())

    @property
    def bos(self) -> int:
        return 0

    @property
    def unk(self) -> int:
        return 1

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, text: str) -> List[int]:
        return [self.index.get(w, self.unk) for w in self.split(text)]

    def decode(self, ids) -> str:
        return " ".join(self.tokens[i] for i in ids)


init_model.__doc__ = \
"""Model Initialization

Creates the trainable tensors: a view-level attention block shared by all
views, a scene-level block, one learned query per view, one scene query and
the toy decoder (token and position embeddings, a causal cross-attention
block, an output norm and a linear head).

Calculation:
    queries, projections, embeddings: U(-a, a), a = sqrt(6 / (fan_in + fan_out))
    layer norm gains 1, all biases 0

Args:
    config (HierarchyConfig): Sizes. Default: HierarchyConfig()
    vocab_size (int): Toy vocabulary size, >= 2. Default: 2
    seed (int): Seed of numpy.random.default_rng. Default: 0

Kwargs:
    dim, heads, ffn_mult, views, grid, max_answer: Used when config is None

Returns:
    HierarchicalModel: float64 parameters
"""
