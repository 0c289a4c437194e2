"""gesture_tuples.stream"""

import os
import csv
from typing import Iterable, List, Optional

import numpy as np

from modules import utils
from modules.alphabet import AlphabetConfig, GestureTuple, InvalidTupleError
from modules.decoder import InvalidColumnError, ScoreMatrix
from modules.pipeline import RawScoreFrame

class StreamFormatError(ValueError):
    """Raised for unreadable stream, matrix or manifest files"""

    def __init__(self, path, line, msg):
        super().__init__("{}:{}: {}".format(path, line, msg))
        self.path = path
        self.line = line


def _parse_row(path, lineno, row, width=None):
    if width is not None and len(row) != width:
        raise StreamFormatError(
            path, lineno, "expect {} columns, get {}".format(width, len(row))
        )
    try:
        values = [float(v) for v in row]
    except ValueError as err:
        raise StreamFormatError(path, lineno, str(err)) from err
    if not all(np.isfinite(values)):
        raise StreamFormatError(path, lineno, "non-finite value")
    return values


def _csv_rows(path, f):
    """Yield (line number, row), decoding and csv faults become StreamFormatError"""

    reader = csv.reader(f)
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except (csv.Error, UnicodeDecodeError) as err:
            raise StreamFormatError(path, reader.line_num + 1, str(err)) from err
        yield reader.line_num, row


def write_stream(frames, path: str, alphabet: Optional[AlphabetConfig] = None) -> str:
    """Write raw score frames, one per row under the class-name header"""

    alphabet = alphabet or AlphabetConfig()
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(alphabet.class_names())
        for frame in frames:
            scores = frame.scores if isinstance(frame, RawScoreFrame) else frame
            writer.writerow([repr(float(v)) for v in scores])
    return path


def read_stream(path: str, alphabet: Optional[AlphabetConfig] = None) -> List[RawScoreFrame]:
    """Read a stream csv, frame indices follow the row order"""

    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = _csv_rows(path, f)
        _, header = next(rows, (1, None))
        if not header:
            raise StreamFormatError(path, 1, "missing header")
        header = [h.strip() for h in header]
        if alphabet is None:
            if len(header) < 5:
                raise StreamFormatError(path, 1, "header holds {} classes".format(len(header)))
            alphabet = AlphabetConfig(len(header) - 3)
        if header != alphabet.class_names():
            raise StreamFormatError(
                path,
                1,
                "header should be {}".format(",".join(alphabet.class_names())),
            )
        frames = []
        for lineno, row in rows:
            if not row:
                continue
            values = _parse_row(path, lineno, row, alphabet.num_classes)
            frames.append(RawScoreFrame(values, len(frames)))
    return frames


def write_matrix(P, path: str) -> str:
    matrix = P.data if isinstance(P, ScoreMatrix) else np.asarray(P)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        for column in matrix:
            writer.writerow([repr(float(v)) for v in column])
    return path


def read_matrix(path: str) -> ScoreMatrix:
    """Read one softmaxed column per row, '#' lines are comments"""

    rows, linenos = [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for lineno, row in _csv_rows(path, f):
            if not row or row[0].lstrip().startswith("#"):
                continue
            width = len(rows[0]) if rows else None
            rows.append(_parse_row(path, lineno, row, width))
            linenos.append(lineno)
    if not rows:
        raise StreamFormatError(path, 1, "empty matrix")
    try:
        return ScoreMatrix(rows)
    except InvalidColumnError as err:
        line = linenos[err.row] if err.row is not None else 1
        raise StreamFormatError(path, line, str(err)) from err


class ManifestEntry:
    """One simulated stream: file path, ground truth, speed name and seed"""

    def __init__(self, path, ground_truth, speed, seed):
        self.path = path
        self.ground_truth = GestureTuple(ground_truth)
        self.speed = speed
        self.seed = int(seed)

    def __eq__(self, other):
        if isinstance(other, ManifestEntry):
            return self.to_dict() == other.to_dict()
        return False

    def __repr__(self):
        return "ManifestEntry({}, {}, {}, {})".format(
            self.path, self.ground_truth, self.speed, self.seed
        )

    def to_dict(self):
        return {
            "path": self.path,
            "tuple": str(self.ground_truth),
            "speed": self.speed,
            "seed": self.seed,
        }

    def resolve(self, folder: str) -> str:
        """The stream file, a relative path is taken from the manifest folder"""

        return os.path.join(folder, self.path)

    @classmethod
    def from_dict(cls, config):
        return cls(
            config["path"],
            GestureTuple.from_string(config["tuple"]),
            config["speed"],
            config["seed"],
        )


def write_manifest(entries: Iterable[ManifestEntry], path: str) -> str:
    return utils.save_records((e.to_dict() for e in entries), path)


def read_manifest(path: str) -> List[ManifestEntry]:
    """Read the manifest, stream paths stay as written (see ManifestEntry.resolve)"""

    entries = []
    try:
        records = utils.load_records(path)
    except ValueError as err:
        raise StreamFormatError(path, 0, str(err)) from err
    for lineno, record in enumerate(records, 1):
        try:
            entry = ManifestEntry.from_dict(record)
        except (KeyError, TypeError, InvalidTupleError) as err:
            raise StreamFormatError(path, lineno, "bad manifest record: {}".format(err))
        entries.append(entry)
    return entries
