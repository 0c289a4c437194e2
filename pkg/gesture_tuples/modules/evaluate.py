"""gesture_tuples.evaluate"""

import collections
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from modules import utils
from modules.alphabet import GestureTuple
from modules.pipeline import EventKind, RecognitionEvent


class EmptyEvaluationError(ValueError):
    """Raised when a report is asked for zero records"""


class Outcome:
    CORRECT = "Correct"
    DETECTOR_ERROR = "DetectorError"
    TUPLE_ERROR = "TupleError"

    __slots__ = ("kind", "single_errors")

    def __init__(self, kind, single_errors=0):
        self.kind = kind
        self.single_errors = single_errors

    def __eq__(self, other):
        if isinstance(other, Outcome):
            return (self.kind, self.single_errors) == (other.kind, other.single_errors)
        return False

    def __repr__(self):
        if self.kind == self.TUPLE_ERROR:
            return "TupleError({})".format(self.single_errors)
        return self.kind


class EvalRecord:
    """Ground truth and the events one recording produced"""

    def __init__(
        self,
        ground_truth: GestureTuple,
        events: Sequence[RecognitionEvent],
        group: Optional[str] = None,
        source: Optional[str] = None,
    ):
        self.ground_truth = GestureTuple(ground_truth)
        self.events = list(events)
        self.group = group
        self.source = source
        recognized = [e for e in self.events if e.kind == EventKind.RECOGNIZED]
        self.predicted = recognized[0].tuple if recognized else None

    def kinds(self):
        return [e.kind for e in self.events]

    def to_dict(self):
        return {
            "source": self.source,
            "group": self.group,
            "ground_truth": str(self.ground_truth),
            "predicted": str(self.predicted) if self.predicted is not None else None,
            "events": [e.to_dict() for e in self.events],
        }

    @classmethod
    def from_dict(cls, config):
        return cls(
            GestureTuple.from_string(config["ground_truth"]),
            [RecognitionEvent.from_dict(e) for e in config.get("events", [])],
            group=config.get("group"),
            source=config.get("source"),
        )


def single_errors(truth: Sequence[int], predicted: Sequence[int]) -> int:
    """Positionwise mismatches; a length mismatch counts the longer length"""

    truth, predicted = tuple(truth), tuple(predicted)
    if len(truth) != len(predicted):
        return max(len(truth), len(predicted))
    return sum(1 for a, b in zip(truth, predicted) if a != b)


def classify_record(record: EvalRecord) -> Outcome:
    kinds = record.kinds()
    if (
        EventKind.SOG not in kinds
        or EventKind.EOG not in kinds
        or EventKind.FAILED in kinds
        or record.predicted is None
    ):
        return Outcome(Outcome.DETECTOR_ERROR)
    if record.predicted != record.ground_truth:
        return Outcome(
            Outcome.TUPLE_ERROR, single_errors(record.ground_truth, record.predicted)
        )
    return Outcome(Outcome.CORRECT)


class EvalReport:
    """Detector, tuple and single errors with the total accuracy"""

    def __init__(self, n_samples, err_det, err_tup, err_sin):
        if n_samples < 1:
            raise EmptyEvaluationError("A report needs at least one sample")
        assert err_det + err_tup <= n_samples, "More errors than samples"
        self.n_samples = int(n_samples)
        self.err_det = int(err_det)
        self.err_tup = int(err_tup)
        self.err_sin = int(err_sin)

    @property
    def accuracy_percent(self):
        return (1.0 - (self.err_det + self.err_tup) / float(self.n_samples)) * 100.0

    def __eq__(self, other):
        if isinstance(other, EvalReport):
            return self.to_dict() == other.to_dict()
        return False

    def __repr__(self):
        return "EvalReport(N={}, det={}, tup={}, sin={}, acc={:.2f})".format(
            self.n_samples, self.err_det, self.err_tup, self.err_sin, self.accuracy_percent
        )

    def abstract(self):
        return {
            "samples": self.n_samples,
            "detector errors": self.err_det,
            "tuple errors": self.err_tup,
            "single errors": self.err_sin,
            "accuracy": "{:.2f}%".format(self.accuracy_percent),
        }

    def __str__(self):
        return utils.dump_dict(self.abstract())

    def to_dict(self):
        return {
            "n_samples": self.n_samples,
            "err_det": self.err_det,
            "err_tup": self.err_tup,
            "err_sin": self.err_sin,
            "accuracy_percent": round(self.accuracy_percent, 6),
        }

    @classmethod
    def from_dict(cls, config):
        return cls(
            config["n_samples"], config["err_det"], config["err_tup"], config["err_sin"]
        )


def aggregate(records: Iterable[EvalRecord]) -> EvalReport:
    counts = collections.Counter()
    n_samples = 0
    for record in records:
        outcome = classify_record(record)
        counts[outcome.kind] += 1
        counts["single"] += outcome.single_errors
        n_samples += 1
    if not n_samples:
        raise EmptyEvaluationError("Can not aggregate an empty set of records")
    return EvalReport(
        n_samples,
        counts[Outcome.DETECTOR_ERROR],
        counts[Outcome.TUPLE_ERROR],
        counts["single"],
    )


def aggregate_by(
    records: Iterable[EvalRecord], key: Optional[Callable] = None
) -> Dict[str, EvalReport]:
    """One report per group, keyed by record.group unless `key` is given"""

    key = key or (lambda r: r.group)
    groups = collections.OrderedDict()
    for record in records:
        groups.setdefault(str(key(record)), []).append(record)
    return collections.OrderedDict(
        (name, aggregate(group)) for name, group in sorted(groups.items())
    )


def format_table(reports: Dict[str, EvalReport]) -> str:
    """Aligned Det | Tup | Sin | Acc table, one row per report"""

    header = ("", "N", "Det", "Tup", "Sin", "Acc.(%)")
    rows = [
        (
            name,
            str(r.n_samples),
            str(r.err_det),
            str(r.err_tup),
            str(r.err_sin),
            "{:.2f}".format(r.accuracy_percent),
        )
        for name, r in reports.items()
    ]
    widths = [max(len(row[i]) for row in [header] + rows) for i in range(len(header))]
    lines = []
    for row in [header] + rows:
        cells = [row[0].ljust(widths[0])] + [
            cell.rjust(width) for cell, width in zip(row[1:], widths[1:])
        ]
        lines.append(" | ".join(cells))
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)
