# -*- coding: utf-8 -*-
from string import punctuation

from ._record import QaRecord, normalize_answer

QUESTION_TYPES = ("What", "Is", "How", "Can", "Which", "Other")


def em_at_1(record: QaRecord) -> int:
    """Evaluate: Exact Match at Top-1"""
    prediction = normalize_answer(record.prediction)
    return int(any(prediction == normalize_answer(r) for r in record.references))


def question_type(question: str) -> str:
    """Evaluate: Question Type by Leading Word"""
    words = str(question).split()
    if len(words) == 0: return "Other"
    lead = words[0].strip(punctuation).capitalize()
    return lead if lead in QUESTION_TYPES[:-1] else "Other"


em_at_1.__doc__ = \
"""Exact Match at Top-1 (EM@1)

1 when the normalized prediction equals any normalized reference, else 0.
Normalization lowercases, strips punctuation, drops articles and collapses
whitespace. There is no stemming: "browns" does not match "brown".

Args:
    record (QaRecord): The record

Returns:
    int: 0 or 1
"""

question_type.__doc__ = \
"""Question Type by Leading Word

Buckets a question by its first whitespace token, case-insensitively, into
What, Is, How, Can or Which; anything else is Other.

Args:
    question (str): The question

Returns:
    str: One of What, Is, How, Can, Which, Other
"""
