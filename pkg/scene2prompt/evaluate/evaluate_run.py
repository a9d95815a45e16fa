# -*- coding: utf-8 -*-
from dataclasses import dataclass, field
from json import dumps
from pathlib import Path

from numpy import nan
from pandas import DataFrame

from scene2prompt.utils import EvaluationError, write_if_changed

from ._record import QaRecord
from .bleu import bleu
from .cider_d import cider_d
from .em_at_1 import QUESTION_TYPES, em_at_1, question_type
from .meteor_lite import meteor_lite
from .rouge_l import rouge_l

REFERENCE_NOTE = (
    "Reference only: scores of a stub or untuned model are not comparable"
    " to a finetuned model answering with ground-truth situations."
)


@dataclass
class MetricReport:
    """Aggregated scores. Rates are in [0, 1], cider in [0, 10]; em_by_type
    is None for a question type with no records."""
    em: float
    em_by_type: dict
    count_by_type: dict
    bleu1: float
    bleu4: float
    rouge_l: float
    meteor: float
    cider: float
    count: int
    frame: DataFrame = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "em": self.em, "em_by_type": self.em_by_type, "count_by_type": self.count_by_type,
            "bleu1": self.bleu1, "bleu4": self.bleu4, "rouge_l": self.rouge_l,
            "meteor": self.meteor, "cider": self.cider, "count": self.count,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        """Aligned text: EM@1 by question type then the captioning metrics,
        all in percent."""
        pct = lambda x: nan if x is None else 100 * x
        em = DataFrame(
            [[pct(self.em_by_type[t]) for t in QUESTION_TYPES] + [pct(self.em)]],
            index=["EM@1"], columns=list(QUESTION_TYPES) + ["Overall"],
        )
        counts = DataFrame(
            [[self.count_by_type[t] for t in QUESTION_TYPES] + [self.count]],
            index=["count"], columns=list(QUESTION_TYPES) + ["Overall"],
        )
        captions = DataFrame(
            [[pct(self.bleu1), pct(self.bleu4), pct(self.rouge_l), pct(self.meteor), pct(self.cider)]],
            index=["score"], columns=["B-1", "B-4", "R", "M", "C"],
        )
        fmt = lambda x: f"{x:.1f}"
        return "\n".join([
            em.to_string(float_format=fmt, na_rep="-"),
            counts.to_string(),
            "",
            captions.to_string(float_format=fmt),
            "",
            REFERENCE_NOTE,
        ]) + "\n"

    def save(self, out_dir) -> None:
        out_dir = Path(out_dir)
        write_if_changed(out_dir / "report.json", self.to_json())
        write_if_changed(out_dir / "report.txt", self.to_table())


def evaluate_run(records, **kwargs) -> MetricReport:
    """Evaluate: Evaluate a Run"""
    # Validate Arguments
    records = list(records)
    if len(records) == 0:
        raise EvaluationError("[X] evaluate_run needs at least one record")
    for r in records:
        if not isinstance(r, QaRecord):
            raise EvaluationError(f"[X] evaluate_run expects QaRecord, got {type(r).__name__}")

    # Calculate Result
    cider, _ = cider_d(records)
    df = DataFrame({
        "question_id": [r.question_id for r in records],
        "scene_id": [r.scene_id for r in records],
        "type": [question_type(r.question) for r in records],
        "em": [em_at_1(r) for r in records],
        "bleu1": [bleu(r, 1) for r in records],
        "bleu4": [bleu(r, 4) for r in records],
        "rouge_l": [rouge_l(r) for r in records],
        "meteor": [meteor_lite(r) for r in records],
        "cider": cider,
    })

    by_type = df.groupby("type")["em"].agg(["mean", "size"])
    em_by_type = {t: float(by_type.loc[t, "mean"]) if t in by_type.index else None for t in QUESTION_TYPES}
    count_by_type = {t: int(by_type.loc[t, "size"]) if t in by_type.index else 0 for t in QUESTION_TYPES}
    means = df[["em", "bleu1", "bleu4", "rouge_l", "meteor", "cider"]].mean()

    return MetricReport(
        em=float(means["em"]),
        em_by_type=em_by_type,
        count_by_type=count_by_type,
        bleu1=float(means["bleu1"]),
        bleu4=float(means["bleu4"]),
        rouge_l=float(means["rouge_l"]),
        meteor=float(means["meteor"]),
        cider=float(means["cider"]),
        count=len(df),
        frame=df,
    )


evaluate_run.__doc__ = \
"""Evaluate a Run

Scores every record and aggregates: EM@1 overall and per leading-word
question type (What, Is, How, Can, Which, Other), then mean BLEU-1, BLEU-4,
ROUGE-L, METEOR-lite and CIDEr-D. Per-type counts partition the records.
The per-record scores stay available as a DataFrame in report.frame.

Args:
    records (list[QaRecord]): At least one record

Returns:
    MetricReport: with to_json(), to_table() and save(out_dir) writing
        report.json and report.txt
"""
