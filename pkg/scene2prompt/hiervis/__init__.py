# -*- coding: utf-8 -*-
from ._model import HierarchicalModel, HierarchyConfig, ToyVocabulary, init_model
from .assemble_hierarchy import FeatureHierarchy, assemble_hierarchy, hierarchy_forward
from .backward import backward
from .checkpoint import load_checkpoint, save_checkpoint
from .cross_attention_block import cross_attention_block
from .gradient_check import gradient_check, numeric_gradient, relative_error
from .patchify_stub import patchify_stub
from .scene_token import scene_token
from .toy_decoder_loss import LossGraph, loss_graph, toy_decoder_loss
from .train_toy import train_toy
from .view_tokens import view_tokens
