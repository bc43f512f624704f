"""Binary classification metrics and reporting.

Counts live in a 2x2 confusion matrix; the report derives per-class
precision/recall/F1, accuracy, error rate, and the macro (unweighted) and
support-weighted averages over the two classes. Machine output keeps full
precision; only the text table rounds to integer percent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .space import round_half_away

NEGATIVE = "negative"
POSITIVE = "positive"


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False


@dataclass(frozen=True)
class Averages:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ClassReport:
    negative: ClassMetrics
    positive: ClassMetrics
    accuracy: float
    error_rate: float
    macro_avg: Averages
    weighted_avg: Averages


def confusion(y_true, y_pred, positive_label) -> ConfusionMatrix:
    """Count binary prediction outcomes against the truth."""
    y_true, y_pred = list(y_true), list(y_pred)
    if not y_true:
        raise ValueError("label lists must be non-empty")
    if len(y_true) != len(y_pred):
        raise ValueError(
            f"label lists differ in length: {len(y_true)} vs {len(y_pred)}"
        )
    labels = set(y_true) | set(y_pred)
    if len(labels - {positive_label}) > 1:
        raise ValueError(f"labels must be binary, got {sorted(map(str, labels))}")
    tp = tn = fp = fn = 0
    for truth, pred in zip(y_true, y_pred):
        if truth == positive_label:
            if pred == positive_label:
                tp += 1
            else:
                fn += 1
        else:
            if pred == positive_label:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, tn=tn, fp=fp, fn=fn)


def _check_total(cm: ConfusionMatrix):
    if cm.total < 1:
        raise ValueError("confusion matrix is empty")


def accuracy(cm: ConfusionMatrix) -> float:
    """Correctly classified fraction."""
    _check_total(cm)
    return (cm.tp + cm.tn) / cm.total


def error_rate(cm: ConfusionMatrix) -> float:
    """Complement of accuracy."""
    return 1.0 - accuracy(cm)


def _oriented(cm: ConfusionMatrix, for_class: str):
    """(tp, fp, fn) with the matrix roles swapped for the negative class."""
    if for_class == POSITIVE:
        return cm.tp, cm.fp, cm.fn
    if for_class == NEGATIVE:
        return cm.tn, cm.fn, cm.fp
    raise ValueError(f"for_class must be '{NEGATIVE}' or '{POSITIVE}', got {for_class!r}")


def precision(cm: ConfusionMatrix, for_class: str = POSITIVE) -> float:
    """True hits over predicted hits; 0 when nothing was predicted."""
    tp, fp, _ = _oriented(cm, for_class)
    return tp / (tp + fp) if tp + fp else 0.0


def recall(cm: ConfusionMatrix, for_class: str = POSITIVE) -> float:
    """True hits over actual members; 0 when the class is absent."""
    tp, _, fn = _oriented(cm, for_class)
    return tp / (tp + fn) if tp + fn else 0.0


def f1(cm: ConfusionMatrix, for_class: str = POSITIVE) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    p, r = precision(cm, for_class), recall(cm, for_class)
    return 2.0 * p * r / (p + r) if p + r else 0.0


def _class_metrics(cm: ConfusionMatrix, for_class: str) -> ClassMetrics:
    tp, fp, fn = _oriented(cm, for_class)
    return ClassMetrics(
        precision=precision(cm, for_class),
        recall=recall(cm, for_class),
        f1=f1(cm, for_class),
        support=tp + fn,
        degenerate=(tp + fp == 0) or (tp + fn == 0),
    )


def report(cm: ConfusionMatrix) -> ClassReport:
    """Assemble the full two-class report."""
    _check_total(cm)
    neg = _class_metrics(cm, NEGATIVE)
    pos = _class_metrics(cm, POSITIVE)
    total_support = neg.support + pos.support
    macro = Averages(
        precision=(neg.precision + pos.precision) / 2.0,
        recall=(neg.recall + pos.recall) / 2.0,
        f1=(neg.f1 + pos.f1) / 2.0,
    )
    if total_support:
        weighted = Averages(
            precision=(neg.support * neg.precision + pos.support * pos.precision) / total_support,
            recall=(neg.support * neg.recall + pos.support * pos.recall) / total_support,
            f1=(neg.support * neg.f1 + pos.support * pos.f1) / total_support,
        )
    else:
        weighted = macro
    acc = accuracy(cm)
    return ClassReport(
        negative=neg,
        positive=pos,
        accuracy=acc,
        error_rate=1.0 - acc,
        macro_avg=macro,
        weighted_avg=weighted,
    )


def percent(value: float) -> int:
    """Integer percent, halves rounded away from zero."""
    return round_half_away(value * 100.0)


def report_to_dict(rep: ClassReport) -> dict:
    """Full-precision machine form of a report."""

    def cls(m: ClassMetrics) -> dict:
        return {
            "precision": m.precision,
            "recall": m.recall,
            "f1": m.f1,
            "support": m.support,
            "degenerate": m.degenerate,
        }

    return {
        "negative": cls(rep.negative),
        "positive": cls(rep.positive),
        "accuracy": rep.accuracy,
        "error_rate": rep.error_rate,
        "macro_avg": {
            "precision": rep.macro_avg.precision,
            "recall": rep.macro_avg.recall,
            "f1": rep.macro_avg.f1,
        },
        "weighted_avg": {
            "precision": rep.weighted_avg.precision,
            "recall": rep.weighted_avg.recall,
            "f1": rep.weighted_avg.f1,
        },
    }


def format_report(rep: ClassReport) -> str:
    """Text table with per-class rows, the two averages, and accuracy,
    rounded to integer percent."""
    rows = [
        ("Negative", rep.negative.precision, rep.negative.recall, rep.negative.f1),
        ("Positive", rep.positive.precision, rep.positive.recall, rep.positive.f1),
        ("Macro Average", rep.macro_avg.precision, rep.macro_avg.recall, rep.macro_avg.f1),
        ("Weighted Average", rep.weighted_avg.precision, rep.weighted_avg.recall,
         rep.weighted_avg.f1),
    ]
    lines = [f"{'Categories':<18}{'Precision':>10}{'Recall':>8}{'F1 score':>10}"]
    for name, p, r, f in rows:
        lines.append(f"{name:<18}{percent(p):>9}%{percent(r):>7}%{percent(f):>9}%")
    lines.append(f"Accuracy: {percent(rep.accuracy)}%")
    return "\n".join(lines)
