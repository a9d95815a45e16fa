# -*- coding: utf-8 -*-
from collections import Counter
from dataclasses import dataclass
from json import JSONDecodeError, loads
from pathlib import Path
from re import compile as re_compile
from string import punctuation
from typing import Tuple

from scene2prompt.utils import EvaluationError, IngestError, get_logger

_PUNCT = str.maketrans("", "", punctuation)
_ARTICLES = re_compile(r"\b(a|an|the)\b")


@dataclass(frozen=True)
class QaRecord:
    """One scored answer. references holds at least one string."""
    question: str
    references: Tuple[str, ...]
    prediction: str
    scene_id: str = ""
    question_id: str = ""

    def __post_init__(self):
        refs = (self.references,) if isinstance(self.references, str) else tuple(self.references)
        if len(refs) == 0:
            raise EvaluationError(f"[X] Record '{self.question_id}' has no reference answers")
        object.__setattr__(self, "references", tuple(str(r) for r in refs))
        object.__setattr__(self, "prediction", "" if self.prediction is None else str(self.prediction))


def tokenize(s: str) -> list:
    """Lowercased whitespace tokens with punctuation removed."""
    return str(s).lower().translate(_PUNCT).split()


def normalize_answer(s: str) -> str:
    """Evaluate: Normalize Answer

    Lowercase, strip punctuation, drop the articles a/an/the and collapse
    whitespace: "The Brown Chair." -> "brown chair".
    """
    s = str(s).lower().translate(_PUNCT)
    s = _ARTICLES.sub(" ", s)
    return " ".join(s.split())


def ngrams(tokens: list, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def load_records(path, skip_unscored: bool = False) -> list:
    """QaRecords from JSONL; each line has question, references (or answers),
    prediction and optionally scene_id and question_id.

    skip_unscored (bool): Skip lines without references or with a null
        prediction, as in a pipeline answers.jsonl with failed questions.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError("Record file not found", path=path)

    records, skipped, offset = [], 0, 0
    for line in path.read_bytes().splitlines(keepends=True):
        start, offset = offset, offset + len(line)
        if not line.strip(): continue
        try:
            row = loads(line)
            refs = row.get("references", row.get("answers"))
            if skip_unscored and (not refs or row.get("prediction") is None):
                skipped += 1
                continue
            if refs is None:
                raise KeyError("references")
            records.append(QaRecord(
                question=row["question"],
                references=refs,
                prediction=row.get("prediction", ""),
                scene_id=str(row.get("scene_id", "")),
                question_id=str(row.get("question_id", "")),
            ))
        except (JSONDecodeError, UnicodeDecodeError) as ex:
            raise IngestError(f"Malformed JSON record: {ex}", path=path, offset=start)
        except KeyError as ex:
            raise IngestError(f"Record is missing {ex}", path=path, offset=start)
        except (AttributeError, TypeError):
            raise IngestError("Record must be a JSON object", path=path, offset=start)
        except EvaluationError as ex:
            raise IngestError(str(ex).replace("[X] ", ""), path=path, offset=start)
    if skipped:
        get_logger().warning(f"Skipped {skipped} unscored line(s) in {path.name}")
    return records
