# -*- coding: utf-8 -*-
from .majority_relabel import majority_relabel, prune_proposals
from .nms_prune import PruneConfig, nms_prune
