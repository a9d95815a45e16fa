# -*- coding: utf-8 -*-
from ._record import QaRecord, load_records, normalize_answer, tokenize
from .bleu import bleu
from .cider_d import cider_d
from .em_at_1 import QUESTION_TYPES, em_at_1, question_type
from .evaluate_run import MetricReport, evaluate_run
from .meteor_lite import meteor_lite
from .rouge_l import rouge_l
