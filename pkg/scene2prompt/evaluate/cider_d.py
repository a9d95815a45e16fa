# -*- coding: utf-8 -*-
from collections import Counter
from math import exp, log, sqrt

from numpy import array

from scene2prompt.utils import EvaluationError, get_logger

from ._record import ngrams, tokenize

MAX_ORDER = 4
SIGMA = 6.0
SCALE = 10.0


def document_frequency(references: list) -> Counter:
    """For each n-gram, the number of records whose references contain it."""
    df = Counter()
    for refs in references:
        seen = set()
        for ref in refs:
            for k in range(1, MAX_ORDER + 1):
                seen.update(ngrams(ref, k))
        df.update(seen)
    return df


def tfidf(tokens: list, df: Counter, log_n: float) -> tuple:
    """Per-order TF-IDF vectors and their norms."""
    vectors, norms = [], []
    for k in range(1, MAX_ORDER + 1):
        vec = {g: count * (log_n - log(max(1.0, df[g]))) for g, count in ngrams(tokens, k).items()}
        vectors.append(vec)
        norms.append(sqrt(sum(v * v for v in vec.values())))
    return vectors, norms


def pair_score(candidate: list, reference: list, df: Counter, log_n: float, sigma: float = SIGMA) -> float:
    """CIDEr-D of one candidate against one reference, scaled to [0, 10]."""
    vc, nc = tfidf(candidate, df, log_n)
    vr, nr = tfidf(reference, df, log_n)
    delta = len(candidate) - len(reference)
    penalty = exp(-(delta ** 2) / (2 * sigma ** 2))

    orders = max(1, min(MAX_ORDER, max(len(candidate), len(reference))))
    total = 0.0
    for k in range(orders):
        dot = sum(min(v, vr[k].get(g, 0.0)) * vr[k].get(g, 0.0) for g, v in vc[k].items())
        if nc[k] != 0 and nr[k] != 0:
            total += penalty * dot / (nc[k] * nr[k])
    return SCALE * total / orders


def cider_d(records, sigma: float = SIGMA, **kwargs) -> tuple:
    """Evaluate: CIDEr-D"""
    # Validate Arguments
    records = list(records)
    if len(records) == 0:
        raise EvaluationError("[X] cider_d needs at least one record")
    if len(records) == 1:
        get_logger().warning("CIDEr-D over a single record: every IDF weight is zero")

    # Calculate Result
    candidates = [tokenize(r.prediction) for r in records]
    references = [[tokenize(ref) for ref in r.references] for r in records]
    df = document_frequency(references)
    log_n = log(float(len(records)))

    scores = []
    for cand, refs in zip(candidates, references):
        if len(cand) == 0:
            scores.append(0.0)
            continue
        scores.append(sum(pair_score(cand, ref, df, log_n, sigma) for ref in refs) / len(refs))

    scores = array(scores, dtype=float)
    return scores, float(scores.mean())


cider_d.__doc__ = \
"""CIDEr-D

Consensus metric over a corpus of records. Each record's prediction and
references become TF-IDF weighted n-gram vectors (n = 1..4) with document
frequencies counted over the references of all records. The prediction's
weights are clipped by the reference's, compared by cosine, damped by a
Gaussian length penalty and scaled by 10. Per-order scores are averaged over
the orders either sentence reaches and the pair scores over the record's
references. IDF is order free, so shuffling records does not change a score.

An n-gram present in the references of every record carries zero weight;
with a single record every weight is zero and a warning is logged.

Sources:
    Vedantam et al., "CIDEr: Consensus-based Image Description Evaluation",
    CVPR 2015

Calculation:
    g_k(s) = tf(s) * (log N - log max(1, df))
    sim_k = sum(min(g_c, g_r) * g_r) / (|g_c| |g_r|)
    penalty = exp(-(len_c - len_r)^2 / (2 * sigma^2))
    CIDEr-D = 10 * mean_k(penalty * sim_k)

Args:
    records (list[QaRecord]): The corpus
    sigma (float): Length penalty width. Default: 6

Returns:
    tuple: (numpy.ndarray of per-record scores in [0, 10], float mean)
"""
