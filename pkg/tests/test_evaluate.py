from .config import random_sentence, scored_by_type, scored_records
from .context import scene2prompt

from itertools import combinations
from json import dumps, loads
from math import exp, log, sqrt
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import TestCase

import numpy.testing as npt
from nltk.stem.porter import PorterStemmer
from numpy.random import default_rng

from scene2prompt.evaluate import (
    QUESTION_TYPES, QaRecord, bleu, cider_d, em_at_1, evaluate_run,
    load_records, meteor_lite, normalize_answer, question_type, rouge_l, tokenize
)
from scene2prompt.utils import EvaluationError, IngestError


def record(prediction, *references, question="What is it?") -> QaRecord:
    return QaRecord(question, references, prediction)


def fixture_records() -> list:
    return [QaRecord(q, refs, pred, question_id=f"r{i}") for i, (q, refs, pred, _) in enumerate(scored_records)]


def brute_lcs(a, b) -> int:
    """Longest common subsequence by enumerating subsequences of a."""
    for size in range(len(a), 0, -1):
        for idx in combinations(range(len(a)), size):
            sub, j = [a[i] for i in idx], 0
            for word in b:
                if j < len(sub) and word == sub[j]: j += 1
            if j == len(sub): return size
    return 0


def grams(tokens, k) -> list:
    return [" ".join(tokens[i:i + k]) for i in range(len(tokens) - k + 1)]


def scalar_bleu(candidate, references, n=4) -> float:
    """Sentence BLEU with plain lists and loops."""
    c = len(candidate)
    if c == 0: return 0.0
    total_log, orders = 0.0, min(n, c)
    for k in range(1, orders + 1):
        cand = grams(candidate, k)
        matched = 0
        for g in sorted(set(cand)):
            most = 0
            for ref in references:
                most = max(most, grams(ref, k).count(g))
            matched += min(cand.count(g), most)
        precision = matched / len(cand) if matched else 0.5 / c
        total_log += log(precision)
    best = None
    for ref in references:
        if best is None or abs(len(ref) - c) < abs(best - c) or (abs(len(ref) - c) == abs(best - c) and len(ref) < best):
            best = len(ref)
    penalty = 1.0 if c > best else exp(1.0 - best / c)
    return penalty * exp(total_log / orders)


def scalar_meteor(candidate, references) -> float:
    """METEOR-lite: exact then stem alignment, chunk penalty, best reference."""
    stem = PorterStemmer().stem
    best = 0.0
    for ref in references:
        if not ref: continue
        taken_c, taken_r = [False] * len(candidate), [False] * len(ref)
        links = []
        for key in (str, stem):
            for i in range(len(candidate)):
                if taken_c[i]: continue
                for j in range(len(ref)):
                    if not taken_r[j] and key(ref[j]) == key(candidate[i]):
                        taken_c[i] = taken_r[j] = True
                        links.append((i, j))
                        break
        if not links: continue
        links.sort()
        chunks = 1 + sum(1 for a, b in zip(links, links[1:]) if not (b[0] == a[0] + 1 and b[1] == a[1] + 1))
        m = len(links)
        p, r = m / len(candidate), m / len(ref)
        fmean = 10 * p * r / (r + 9 * p)
        best = max(best, fmean * (1 - 0.5 * (chunks / m) ** 3))
    return best


def scalar_cider(candidates, references, sigma=6.0) -> list:
    """CIDEr-D per record with dicts of weights and explicit sums."""
    count = len(candidates)
    df = {}
    for refs in references:
        for g in {(k, g) for ref in refs for k in range(1, 5) for g in grams(ref, k)}:
            df[g] = df.get(g, 0) + 1

    def weights(tokens, k):
        out = {}
        for g in grams(tokens, k):
            out[g] = out.get(g, 0.0) + 1.0
        return {g: tf * (log(count) - log(max(1.0, df.get((k, g), 0)))) for g, tf in out.items()}

    scores = []
    for cand, refs in zip(candidates, references):
        if not cand:
            scores.append(0.0)
            continue
        per_ref = []
        for ref in refs:
            orders = min(4, max(len(cand), len(ref)))
            gauss = exp(-((len(cand) - len(ref)) ** 2) / (2 * sigma * sigma))
            acc = 0.0
            for k in range(1, orders + 1):
                wc, wr = weights(cand, k), weights(ref, k)
                nc = sqrt(sum(v * v for v in wc.values()))
                nr = sqrt(sum(v * v for v in wr.values()))
                if nc == 0 or nr == 0: continue
                dot = sum(min(v, wr.get(g, 0.0)) * wr.get(g, 0.0) for g, v in wc.items())
                acc += gauss * dot / (nc * nr)
            per_ref.append(10.0 * acc / orders)
        scores.append(sum(per_ref) / len(per_ref))
    return scores


# five records with repeated, partial and missing overlaps
ORACLE_CORPUS = [
    ("the brown wooden chair", ["brown chair", "the brown wooden chair near the desk"]),
    ("two pillows on the bed", ["pillows on the bed", "two pillows"]),
    ("lamp lamp lamp", ["a lamp", "the lamp on the lamp stand"]),
    ("it is running", ["runs", "it runs on the table"]),
    ("left", ["to my left", "left side"]),
]


class TestNormalization(TestCase):
    def test_examples(self):
        self.assertEqual(normalize_answer("The Brown Chair."), "brown chair")
        self.assertEqual(normalize_answer("  3   o'clock "), "3 oclock")
        self.assertEqual(normalize_answer("An apple, a pear"), "apple pear")
        self.assertEqual(tokenize("The Brown Chair."), ["the", "brown", "chair"])

    def test_record_validation(self):
        self.assertRaises(EvaluationError, QaRecord, "q", [], "a")
        self.assertEqual(QaRecord("q", "single", None).references, ("single",))
        self.assertEqual(QaRecord("q", "single", None).prediction, "")


class TestEmAt1(TestCase):
    def test_examples(self):
        self.assertEqual(em_at_1(record("The brown chair", "brown chair")), 1)
        self.assertEqual(em_at_1(record("browns", "brown")), 0)
        self.assertEqual(em_at_1(record("four", "4", "four")), 1)
        self.assertEqual(em_at_1(record("", "yes")), 0)

    def test_fixture(self):
        for q, refs, pred, em in scored_records:
            self.assertEqual(em_at_1(QaRecord(q, refs, pred)), em, q)

    def test_question_type(self):
        self.assertEqual(question_type("what is this?"), "What")
        self.assertEqual(question_type("IS it?"), "Is")
        self.assertEqual(question_type("Whichever works"), "Other")
        self.assertEqual(question_type(""), "Other")
        self.assertEqual(question_type("  How   many?"), "How")


class TestBleu(TestCase):
    def test_brevity_penalty(self):
        self.assertAlmostEqual(bleu(record("brown chair", "the brown chair"), 1), exp(-0.5), places=12)
        self.assertAlmostEqual(bleu(record("brown chair", "the brown chair"), 1), 0.6065, places=4)

    def test_identical_short_answers(self):
        for n in (1, 2, 3, 4):
            self.assertEqual(bleu(record("yes", "yes"), n), 1.0)
            self.assertAlmostEqual(bleu(record("the red chair", "the red chair"), n), 1.0, places=12)

    def test_clipping(self):
        # "the" appears twice in the candidate, once in the reference
        self.assertAlmostEqual(bleu(record("the the", "the cat"), 1), 0.5, places=12)

    def test_closest_reference(self):
        # tie between lengths 1 and 3 for a 2-token candidate goes to the shorter
        self.assertAlmostEqual(bleu(record("red chair", "chair", "a red chair"), 1), 1.0, places=12)

    def test_smoothing(self):
        # p1 = 2/4, p2 = 1/3, no trigram or 4-gram matches: both smoothed to 1/8
        self.assertAlmostEqual(bleu(record("a b c d", "a b x y")), (0.5 / 3 / 64) ** 0.25, places=12)
        self.assertAlmostEqual(bleu(record("a b c d", "a b x y"), 2), sqrt(0.5 / 3), places=12)

    def test_scalar_oracle(self):
        for prediction, refs in ORACLE_CORPUS:
            c, rs = tokenize(prediction), [tokenize(x) for x in refs]
            for n in (1, 2, 3, 4):
                self.assertAlmostEqual(bleu(record(prediction, *refs), n), scalar_bleu(c, rs, n), places=12, msg=prediction)

    def test_edges(self):
        self.assertEqual(bleu(record("", "yes")), 0.0)
        self.assertRaises(EvaluationError, bleu, record("yes", "yes"), 5)


class TestRougeL(TestCase):
    def test_examples(self):
        self.assertAlmostEqual(rouge_l(record("the red chair", "the blue chair")), 2.0 / 3.0, places=12)
        self.assertEqual(rouge_l(record("yes", "yes")), 1.0)
        self.assertEqual(rouge_l(record("yes", "no")), 0.0)
        self.assertEqual(rouge_l(record("", "no")), 0.0)

    def test_best_reference(self):
        self.assertEqual(rouge_l(record("left", "right side", "left")), 1.0)


class TestMeteorLite(TestCase):
    def test_examples(self):
        self.assertAlmostEqual(meteor_lite(record("chair", "chair")), 0.5, places=12)
        self.assertAlmostEqual(meteor_lite(record("the big brown chair", "the big brown chair")), 0.9921875, places=12)

    def test_stem_stage(self):
        self.assertAlmostEqual(meteor_lite(record("chairs", "chair")), 0.5, places=12)
        self.assertEqual(meteor_lite(record("sofa", "chair")), 0.0)

    def test_recall_weighting(self):
        # P = 1, R = 3/4, one chunk of three
        expected = (7.5 / 9.75) * (1 - 0.5 / 27)
        self.assertAlmostEqual(meteor_lite(record("big red chair", "the big red chair")), expected, places=12)
        # every word matched, no two adjacent in both sentences
        self.assertAlmostEqual(meteor_lite(record("the chair red big", "the big red chair")), 0.5, places=12)

    def test_scalar_oracle(self):
        for prediction, refs in ORACLE_CORPUS:
            expected = scalar_meteor(tokenize(prediction), [tokenize(x) for x in refs])
            self.assertAlmostEqual(meteor_lite(record(prediction, *refs)), expected, places=12, msg=prediction)

    def test_fragmentation(self):
        # two aligned words in two chunks: penalty 0.5 * (2 / 2)^3
        score = meteor_lite(record("chair red", "red chair"))
        self.assertAlmostEqual(score, 0.5, places=12)


class TestCiderD(TestCase):
    def test_scalar_oracle(self):
        records = [record(p, *refs) for p, refs in ORACLE_CORPUS]
        scores, mean = cider_d(records)
        expected = scalar_cider([tokenize(p) for p, _ in ORACLE_CORPUS], [[tokenize(x) for x in refs] for _, refs in ORACLE_CORPUS])
        npt.assert_allclose(scores, expected, rtol=0, atol=1e-8)
        self.assertAlmostEqual(mean, sum(expected) / len(expected), delta=1e-8)
        self.assertGreater(min(expected[:4]), 0.0)

    def test_identical_disjoint(self):
        records = [record("red chair", "red chair"), record("blue table", "blue table")]
        scores, mean = cider_d(records)
        npt.assert_allclose(scores, [10.0, 10.0])
        self.assertAlmostEqual(mean, 10.0)

    def test_single_record(self):
        scores, mean = cider_d([record("yes", "yes")])
        self.assertEqual(mean, 0.0)
        self.assertRaises(EvaluationError, cider_d, [])

    def test_shuffle_invariance(self):
        rng = default_rng(50)
        records = [record(random_sentence(rng), random_sentence(rng), random_sentence(rng)) for _ in range(30)]
        base, _ = cider_d(records)
        for _ in range(5):
            order = rng.permutation(len(records))
            shuffled, _ = cider_d([records[i] for i in order])
            npt.assert_allclose(shuffled, base[order], rtol=1e-12, atol=1e-12)

    def test_bounds(self):
        rng = default_rng(51)
        records = [record(random_sentence(rng), random_sentence(rng)) for _ in range(40)]
        scores, mean = cider_d(records)
        self.assertTrue(((scores >= 0.0) & (scores <= 10.0 + 1e-9)).all())
        self.assertAlmostEqual(mean, scores.mean())


class TestRandomRecords(TestCase):
    @classmethod
    def setUpClass(cls):
        rng = default_rng(52)
        cls.records = [record(random_sentence(rng), random_sentence(rng), random_sentence(rng)) for _ in range(50)]

    @classmethod
    def tearDownClass(cls):
        del cls.records

    def test_ranges(self):
        for r in self.records:
            for value in (bleu(r, 1), bleu(r, 4), rouge_l(r), meteor_lite(r)):
                self.assertTrue(0.0 <= value <= 1.0)
            self.assertIn(em_at_1(r), (0, 1))

    def test_rouge_lcs_oracle(self):
        for r in self.records:
            c = tokenize(r.prediction)
            expected = 0.0
            for ref in (tokenize(x) for x in r.references):
                lcs = brute_lcs(c, ref)
                if lcs == 0: continue
                p, rc = lcs / len(c), lcs / len(ref)
                expected = max(expected, 2.44 * p * rc / (rc + 1.44 * p))
            self.assertAlmostEqual(rouge_l(r), expected, places=12)

    def test_unigram_precision_oracle(self):
        for r in self.records:
            c = tokenize(r.prediction)
            refs = [tokenize(x) for x in r.references]
            clipped = sum(min(c.count(w), max(ref.count(w) for ref in refs)) for w in set(c))
            p = clipped / len(c) if clipped else 1.0 / (2 * len(c))
            lengths = sorted({len(ref) for ref in refs}, key=lambda n: (abs(n - len(c)), n))
            bp = 1.0 if len(c) > lengths[0] else exp(1.0 - lengths[0] / len(c))
            self.assertAlmostEqual(bleu(r, 1), bp * p, places=12)

    def test_self_match(self):
        for r in self.records:
            same = record(r.references[0], r.references[0])
            self.assertEqual(em_at_1(same), 1)
            self.assertAlmostEqual(bleu(same, 4), 1.0, places=12)
            self.assertAlmostEqual(rouge_l(same), 1.0, places=12)
            m = len(tokenize(same.prediction))
            self.assertAlmostEqual(meteor_lite(same), 1.0 - 0.5 * (1.0 / m) ** 3, places=12)


class TestLoadRecords(TestCase):
    def test_load(self):
        rows = [
            {"question": "Is it red?", "references": ["yes"], "prediction": "yes", "question_id": "a"},
            {"question": "What is it?", "answers": ["cup"], "prediction": "mug", "scene_id": "scene0000_00"},
            {"question": "Where?", "answers": ["left"], "prediction": None},
        ]
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "run.jsonl"
            path.write_text("".join(dumps(r) + "\n" for r in rows) + "\n", encoding="utf-8")
            records = load_records(path, skip_unscored=True)
            self.assertEqual(len(records), 2)
            self.assertEqual(records[1].references, ("cup",))
            self.assertEqual(records[1].scene_id, "scene0000_00")
            self.assertEqual(len(load_records(path)), 3)
            self.assertEqual(load_records(path)[2].prediction, "")

    def test_errors(self):
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.jsonl"
            first = dumps({"question": "q", "references": ["a"], "prediction": "a"}) + "\n"
            path.write_text(first + "{broken\n", encoding="utf-8")
            with self.assertRaises(IngestError) as ctx:
                load_records(path)
            self.assertEqual(ctx.exception.offset, len(first))
            path.write_text(dumps({"question": "q", "prediction": "a"}) + "\n", encoding="utf-8")
            self.assertRaises(IngestError, load_records, path)
            path.write_text(dumps({"question": "q", "references": [], "prediction": "a"}) + "\n", encoding="utf-8")
            self.assertRaises(IngestError, load_records, path)
            self.assertRaises(IngestError, load_records, Path(tmp) / "missing.jsonl")


class TestEvaluateRun(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = evaluate_run(fixture_records())

    @classmethod
    def tearDownClass(cls):
        del cls.report

    def test_em_tally(self):
        self.assertAlmostEqual(self.report.em, 13 / 20)
        self.assertEqual(self.report.count, 20)
        for t, (hits, total) in scored_by_type.items():
            self.assertAlmostEqual(self.report.em_by_type[t], hits / total, msg=t)
            self.assertEqual(self.report.count_by_type[t], total)
        self.assertEqual(sum(self.report.count_by_type.values()), self.report.count)

    def test_frame(self):
        frame = self.report.frame
        self.assertEqual(list(frame["question_id"]), [f"r{i}" for i in range(20)])
        self.assertAlmostEqual(frame["bleu1"].mean(), self.report.bleu1)
        self.assertEqual(int(frame["em"].sum()), 13)

    def test_missing_type(self):
        report = evaluate_run([QaRecord("Is it?", ["yes"], "yes"), QaRecord("Is it not?", ["no"], "yes")])
        self.assertEqual(report.em_by_type["Is"], 0.5)
        self.assertIsNone(report.em_by_type["What"])
        self.assertEqual(report.count_by_type["What"], 0)
        self.assertIn("-", report.to_table().splitlines()[1])

    def test_table_and_save(self):
        table = self.report.to_table()
        self.assertIn("EM@1", table)
        self.assertIn("65.0", table)
        for column in list(QUESTION_TYPES) + ["B-1", "B-4", "R", "M", "C"]:
            self.assertIn(column, table)
        with TemporaryDirectory() as tmp:
            self.report.save(tmp)
            data = loads((Path(tmp) / "report.json").read_text(encoding="utf-8"))
            self.assertAlmostEqual(data["em"], 0.65)
            self.assertEqual(data["count_by_type"]["Which"], 2)
            self.assertEqual((Path(tmp) / "report.txt").read_text(encoding="utf-8"), table)

    def test_errors(self):
        self.assertRaises(EvaluationError, evaluate_run, [])
        self.assertRaises(EvaluationError, evaluate_run, [("q", ["a"], "a")])
