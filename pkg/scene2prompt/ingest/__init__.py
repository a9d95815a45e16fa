# -*- coding: utf-8 -*-
from .load_patch_features import HVF_HEADER, load_patch_features, save_patch_features
from .load_point_cloud import load_point_cloud, save_point_cloud
from .load_proposals import load_proposals, normalize_label, read_proposal_file, save_proposals
from .load_questions import load_questions
from .load_scene import load_scene, proposal_source
from .load_situation import load_situation
