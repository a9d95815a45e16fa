# -*- coding: utf-8 -*-
from nltk.stem.porter import PorterStemmer

from ._record import QaRecord, tokenize

_stemmer = PorterStemmer()


def align(candidate: list, reference: list) -> list:
    """(candidate index, reference index) pairs: exact matches first, then
    Porter stem matches among the tokens still unaligned. Each stage scans
    the candidate left to right and takes the first free reference token."""
    used_c, used_r, pairs = set(), set(), []
    stages = (lambda w: w, _stemmer.stem)
    for key in stages:
        ref_keys = [key(w) for w in reference]
        for i, word in enumerate(candidate):
            if i in used_c: continue
            k = key(word)
            for j, rk in enumerate(ref_keys):
                if j not in used_r and rk == k:
                    used_c.add(i); used_r.add(j)
                    pairs.append((i, j))
                    break
    return sorted(pairs)


def count_chunks(pairs: list) -> int:
    """Runs of alignments adjacent in both candidate and reference."""
    chunks, previous = 0, None
    for i, j in pairs:
        if previous is None or i != previous[0] + 1 or j != previous[1] + 1:
            chunks += 1
        previous = (i, j)
    return chunks


def meteor_lite(record: QaRecord, **kwargs) -> float:
    """Evaluate: METEOR-lite"""
    candidate = tokenize(record.prediction)
    if len(candidate) == 0: return 0.0

    best = 0.0
    for reference in (tokenize(r) for r in record.references):
        if len(reference) == 0: continue
        pairs = align(candidate, reference)
        m = len(pairs)
        if m == 0: continue
        p, r = m / len(candidate), m / len(reference)
        f_mean = 10 * p * r / (r + 9 * p)
        penalty = 0.5 * (count_chunks(pairs) / m) ** 3
        best = max(best, f_mean * (1 - penalty))

    return best


meteor_lite.__doc__ = \
"""METEOR-lite

Unigram alignment in two stages, exact words and then Porter stems, without
the WordNet synonym stage of full METEOR. Scores are therefore lower than
official METEOR whenever synonyms would have matched. A harmonic mean
weighted toward recall is discounted by a fragmentation penalty, and the
best reference wins.

Sources:
    Banerjee and Lavie, "METEOR: An Automatic Metric for MT Evaluation with
    Improved Correlation with Human Judgments", 2005

Calculation:
    m = aligned unigrams, P = m / len(candidate), R = m / len(reference)
    F_mean = 10 * P * R / (R + 9 * P)
    penalty = 0.5 * (chunks / m)^3
    METEOR = F_mean * (1 - penalty)

Args:
    record (QaRecord): The record

Returns:
    float: In [0, 1); 0 for an empty prediction or no matches
"""
