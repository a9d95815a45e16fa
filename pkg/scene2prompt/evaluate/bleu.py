# -*- coding: utf-8 -*-
from math import exp, log

from scene2prompt.utils import EvaluationError

from ._record import QaRecord, ngrams, tokenize


def closest_reference_length(c: int, lengths: list) -> int:
    """Reference length closest to c; ties go to the shorter one."""
    return min(lengths, key=lambda r: (abs(r - c), r))


def bleu(record: QaRecord, n: int = 4, **kwargs) -> float:
    """Evaluate: Sentence BLEU"""
    # Validate Arguments
    if int(n) not in (1, 2, 3, 4):
        raise EvaluationError(f"[X] BLEU order must be in 1..4, got {n}")
    n = int(n)
    candidate = tokenize(record.prediction)
    references = [tokenize(r) for r in record.references]
    c = len(candidate)
    if c == 0: return 0.0

    # Calculate Result
    orders = min(n, c)
    log_p = 0.0
    for k in range(1, orders + 1):
        counts = ngrams(candidate, k)
        max_ref = {}
        for ref in references:
            for gram, count in ngrams(ref, k).items():
                max_ref[gram] = max(max_ref.get(gram, 0), count)
        clipped = sum(min(count, max_ref.get(gram, 0)) for gram, count in counts.items())
        total = sum(counts.values())
        p = clipped / total if clipped > 0 else 1.0 / (2.0 * c)
        log_p += log(p)

    r = closest_reference_length(c, [len(ref) for ref in references])
    bp = 1.0 if c > r else exp(1.0 - r / c)

    return bp * exp(log_p / orders)


bleu.__doc__ = \
"""Sentence BLEU

Modified n-gram precision up to order n, combined by geometric mean, times a
brevity penalty against the reference whose length is closest to the
candidate (ties to the shorter). Candidate n-gram counts are clipped by their
largest count in any single reference. A precision with no clipped matches is
smoothed to 1 / (2 * candidate length). Orders longer than the candidate are
left out of the mean, so a one-word answer identical to its reference scores
1.0 at every n.

Sources:
    Papineni et al., "BLEU: a Method for Automatic Evaluation of Machine
    Translation", ACL 2002

Calculation:
    c = len(candidate), r = closest reference length
    BP = 1 if c > r else exp(1 - r / c)
    BLEU = BP * exp(mean(log p_k for k in 1..min(n, c)))

Args:
    record (QaRecord): The record
    n (int): Highest n-gram order, 1 to 4. Default: 4

Returns:
    float: In [0, 1]; 0 for an empty prediction
"""
