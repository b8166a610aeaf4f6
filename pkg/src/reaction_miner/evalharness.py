"""Evaluation harness: multi-annotator ground truth, Fleiss' kappa,
Agree-k labels, confusion metrics, Naive Bayes baselines and sarcasm
threshold grid search.

Annotation file format: `text_id<TAB>lang<TAB>label_1,...,label_m<TAB>text`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from reaction_miner.errors import CorpusFormatError, TrainingError
from reaction_miner.emoclass import classify
from reaction_miner.sarcasm import SarcasmThresholds, label_sarcasm


@dataclass
class AnnotationItem:
    text_id: str
    text: str
    labels: list[int]
    lang: str = "en"


@dataclass
class AnnotationSet:
    items: list[AnnotationItem]

    @property
    def n_annotators(self) -> int:
        return len(self.items[0].labels) if self.items else 0


def load_annotations(path) -> AnnotationSet:
    items = []
    m = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t", 3)
            if len(parts) != 4:
                raise CorpusFormatError(f"{path}:{lineno}: expected 4 fields")
            text_id, lang, raw_labels, text = parts
            labels = [int(v) for v in raw_labels.split(",")]
            if any(v not in (0, 1) for v in labels):
                raise CorpusFormatError(f"{path}:{lineno}: labels must be 0/1")
            if m is None:
                m = len(labels)
            elif len(labels) != m:
                raise CorpusFormatError(
                    f"{path}:{lineno}: expected {m} labels, got {len(labels)}")
            items.append(AnnotationItem(text_id, text, labels, lang))
    return AnnotationSet(items)


def fleiss_kappa(annotations: AnnotationSet) -> float:
    """Fleiss' kappa over the two sarcasm categories.

    Returns 1.0 in the all-unanimous single-category degenerate case where
    chance agreement is also 1.
    """
    m = annotations.n_annotators
    if m < 2:
        raise ValueError("Fleiss' kappa needs at least 2 annotators")
    if not annotations.items:
        raise ValueError("Fleiss' kappa needs at least 1 item")
    n_items = len(annotations.items)
    p_agree = 0.0
    cat_totals = [0, 0]
    for item in annotations.items:
        pos = sum(item.labels)
        neg = m - pos
        cat_totals[0] += neg
        cat_totals[1] += pos
        p_agree += (pos * pos + neg * neg - m) / (m * (m - 1))
    p_bar = p_agree / n_items
    total = n_items * m
    p_e = sum((c / total) ** 2 for c in cat_totals)
    if p_e == 1.0:
        return 1.0
    return (p_bar - p_e) / (1 - p_e)


@dataclass
class AgreeGroundTruth:
    level: int
    labels: dict[str, int]


def agree_labels(annotations: AnnotationSet, k: int) -> AgreeGroundTruth:
    """Item positive iff at least k annotators marked it sarcastic."""
    if not 1 <= k <= annotations.n_annotators:
        raise ValueError(
            f"agreement level {k} exceeds annotator count {annotations.n_annotators}")
    labels = {
        item.text_id: 1 if sum(item.labels) >= k else 0
        for item in annotations.items
    }
    return AgreeGroundTruth(k, labels)


@dataclass
class MetricReport:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    degenerate: bool = False


def metrics(pred: dict[str, int], truth: AgreeGroundTruth) -> MetricReport:
    """Confusion counts and accuracy/precision/recall/F1.

    Undefined fractions (zero denominators) are reported as 0 with the
    degenerate flag set."""
    tp = fp = tn = fn = 0
    for text_id, gold in truth.labels.items():
        if text_id not in pred:
            raise ValueError(f"missing prediction for {text_id}")
        p = pred[text_id]
        if p == 1 and gold == 1:
            tp += 1
        elif p == 1 and gold == 0:
            fp += 1
        elif p == 0 and gold == 0:
            tn += 1
        else:
            fn += 1
    total = tp + fp + tn + fn
    degenerate = False

    def frac(num, den):
        nonlocal degenerate
        if den == 0:
            degenerate = True
            return 0.0
        return num / den

    accuracy = frac(tp + tn, total)
    precision = frac(tp, tp + fp)
    recall = frac(tp, tp + fn)
    f1 = frac(2 * precision * recall, precision + recall) if precision + recall else frac(0, 0)
    return MetricReport(tp, fp, tn, fn, accuracy, precision, recall, f1, degenerate)


# --------------------------------------------------------------------------
# Naive Bayes baselines
# --------------------------------------------------------------------------

@dataclass
class NBModel:
    features: str  # "bow" | "tfidf"
    log_prior: dict[int, float]
    log_likelihood: dict[int, dict[str, float]]
    vocab: set = field(default_factory=set)


def nb_train(labeled, features: str = "bow") -> NBModel:
    """Multinomial Naive Bayes with add-one smoothing.

    `labeled` yields (tokens, 0/1) pairs. BOW features are raw term counts;
    TF-IDF features weight counts by tf * ln(N/df) before smoothing.
    """
    if features not in ("bow", "tfidf"):
        raise ValueError(f"unknown feature scheme {features!r}")
    docs = [(list(tokens), int(label)) for tokens, label in labeled]
    classes = {label for _, label in docs}
    if classes != {0, 1}:
        raise TrainingError("Naive Bayes training requires both classes")

    vocab: set[str] = set()
    for tokens, _ in docs:
        vocab.update(tokens)

    if features == "tfidf":
        n_docs = len(docs)
        df: Counter[str] = Counter()
        for tokens, _ in docs:
            df.update(set(tokens))
        idf = {w: math.log(n_docs / df[w]) for w in vocab}

    weighted: dict[int, Counter] = {0: Counter(), 1: Counter()}
    doc_count = {0: 0, 1: 0}
    for tokens, label in docs:
        doc_count[label] += 1
        tf = Counter(tokens)
        for w, c in tf.items():
            weighted[label][w] += c * idf[w] if features == "tfidf" else c

    n_docs = len(docs)
    v = len(vocab)
    log_prior = {c: math.log(doc_count[c] / n_docs) for c in (0, 1)}
    log_likelihood: dict[int, dict[str, float]] = {}
    for c in (0, 1):
        total = sum(weighted[c].values())
        log_likelihood[c] = {
            w: math.log((weighted[c].get(w, 0) + 1) / (total + v)) for w in vocab
        }
    return NBModel(features, log_prior, log_likelihood, vocab)


def nb_predict(model: NBModel, tokens) -> int:
    """Argmax class posterior; unseen tokens are skipped; ties predict 0."""
    scores = {c: model.log_prior[c] for c in (0, 1)}
    for w, c in Counter(tokens).items():
        if w not in model.vocab:
            continue
        for cls in (0, 1):
            scores[cls] += c * model.log_likelihood[cls][w]
    return 1 if scores[1] > scores[0] else 0


# --------------------------------------------------------------------------
# Threshold grid search
# --------------------------------------------------------------------------

def grid_search_thresholds(model, annotations: AnnotationSet, grid: dict,
                           tokenizer=None,
                           combos=None) -> SarcasmThresholds:
    """Exhaustive threshold search maximizing F1 against Agree-2 truth.

    `grid` maps each of x1, x2, y1, y2 to an iterable of candidate values;
    ties break by higher precision, then by grid enumeration order.
    """
    from reaction_miner.textproc import normalize, tokenize_en

    if tokenizer is None:
        tokenizer = lambda text: tokenize_en(normalize(text))
    axes = [list(grid[k]) for k in ("x1", "x2", "y1", "y2")]
    if any(not axis for axis in axes):
        raise ValueError("grid axes must be non-empty")

    truth = agree_labels(annotations, k=min(2, annotations.n_annotators))
    scored = []
    for item in annotations.items:
        scored.append((item.text_id, classify(tokenizer(item.text), model)))

    best = None
    for x1, x2, y1, y2 in itertools.product(*axes):
        if x1 > x2:
            continue
        kwargs = {"x1": x1, "x2": x2, "y1": y1, "y2": y2}
        if combos is not None:
            kwargs["combos"] = combos
        thresholds = SarcasmThresholds(**kwargs)
        pred = {}
        for text_id, sc in scored:
            if sc.nosignal:
                pred[text_id] = 0
            else:
                pred[text_id] = 1 if label_sarcasm(sc, thresholds).sarcastic else 0
        report = metrics(pred, truth)
        key = (report.f1, report.precision)
        if best is None or key > best[0]:
            best = (key, thresholds)
    if best is None:
        raise ValueError("empty threshold grid")
    return best[1]


def format_metrics(reports: dict[int, MetricReport]) -> str:
    """Table-style report: one row per agreement level."""
    lines = ["level\taccuracy\tf1\trecall\tprecision\ttp\tfp\ttn\tfn"]
    for level in sorted(reports):
        r = reports[level]
        lines.append(
            f"agree-{level}\t{r.accuracy:.4f}\t{r.f1:.4f}\t{r.recall:.4f}"
            f"\t{r.precision:.4f}\t{r.tp}\t{r.fp}\t{r.tn}\t{r.fn}"
        )
    return "\n".join(lines) + "\n"
