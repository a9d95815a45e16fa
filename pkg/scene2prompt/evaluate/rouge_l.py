# -*- coding: utf-8 -*-
from numpy import zeros

from ._record import QaRecord, tokenize

BETA = 1.2


def lcs_length(a: list, b: list) -> int:
    table = zeros((len(a) + 1, len(b) + 1), dtype=int)
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i, j] = table[i - 1, j - 1] + 1
            else:
                table[i, j] = max(table[i - 1, j], table[i, j - 1])
    return int(table[-1, -1])


def rouge_l(record: QaRecord, beta: float = BETA, **kwargs) -> float:
    """Evaluate: ROUGE-L"""
    candidate = tokenize(record.prediction)
    if len(candidate) == 0: return 0.0

    best = 0.0
    for reference in (tokenize(r) for r in record.references):
        if len(reference) == 0: continue
        lcs = lcs_length(candidate, reference)
        if lcs == 0: continue
        p, r = lcs / len(candidate), lcs / len(reference)
        f = (1 + beta ** 2) * p * r / (r + beta ** 2 * p)
        best = max(best, f)

    return best


rouge_l.__doc__ = \
"""ROUGE-L

F-measure of the longest common subsequence between the prediction and a
reference, weighted toward recall by beta, maximized over references.

Sources:
    Lin, "ROUGE: A Package for Automatic Evaluation of Summaries", 2004

Calculation:
    P = LCS / len(candidate), R = LCS / len(reference)
    F = (1 + beta^2) * P * R / (R + beta^2 * P)

Args:
    record (QaRecord): The record
    beta (float): Recall weight. Default: 1.2

Returns:
    float: In [0, 1]; 0 for an empty prediction
"""
