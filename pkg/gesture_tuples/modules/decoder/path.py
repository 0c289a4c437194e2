"""gesture_tuples.decoder.path"""

from typing import Iterable, Sequence

import numpy as np

# tolerance of the softmax normalization of a column
COLUMN_ATOL = 1e-6


class DecoderError(ValueError):
    """Base class of the decoding errors"""


class InvalidColumnError(DecoderError):
    """Raised when a probability column is not softmax-normalized"""

    def __init__(self, msg, row=None):
        super().__init__(msg)
        self.row = row


class DimensionMismatchError(DecoderError):
    """Raised when a column length differs from the number of phoneme classes"""


class DecodePreconditionError(DecoderError):
    """Raised when the matrix is too short for K transitions"""


class NoValidPathError(DecoderError):
    """Raised when no surviving path holds exactly K transitions"""


class SearchSpaceError(DecoderError):
    """Raised when an exhaustive search would exceed its size guard"""


def check_column(column, num_classes=None, atol=COLUMN_ATOL, row=None) -> np.ndarray:
    """Validate a softmaxed probability column and return it as float array"""

    where = "" if row is None else " (column {})".format(row)
    try:
        column = np.asarray(column, dtype=np.float64)
    except (TypeError, ValueError) as err:
        raise InvalidColumnError("Column is not numeric" + where, row) from err
    if column.ndim != 1:
        raise InvalidColumnError(
            "Column should be 1-D, get shape {}{}".format(column.shape, where), row
        )
    if num_classes is not None and column.shape[0] != num_classes:
        raise DimensionMismatchError(
            "Column has {} entries, expect {}{}".format(column.shape[0], num_classes, where)
        )
    if column.shape[0] < 2:
        raise InvalidColumnError("Column needs at least 2 classes" + where, row)
    if not np.all(np.isfinite(column)):
        raise InvalidColumnError("Column holds non-finite values" + where, row)
    if column.min() < -atol or column.max() > 1 + atol:
        raise InvalidColumnError("Column entries should be in [0, 1]" + where, row)
    total = float(column.sum())
    if abs(total - 1.0) > atol:
        raise InvalidColumnError(
            "Column sums to {:.6f}, expect 1{}".format(total, where), row
        )
    return column


class ScoreMatrix:
    """T softmaxed phoneme columns P_0..P_{T-1}, stored as a T x N array"""

    def __init__(self, columns, atol=COLUMN_ATOL):
        try:
            data = np.array(columns, dtype=np.float64)
        except (TypeError, ValueError) as err:
            raise InvalidColumnError("Columns should be numeric and equally long") from err
        if data.ndim != 2:
            if data.size == 0:
                raise InvalidColumnError("Score matrix needs at least one column")
            raise InvalidColumnError(
                "Score matrix should be 2-D, get shape {}".format(data.shape)
            )
        if data.shape[0] < 1:
            raise InvalidColumnError("Score matrix needs at least one column")
        if data.shape[1] < 2:
            check_column(data[0], atol=atol, row=0)
        with np.errstate(invalid="ignore", over="ignore"):
            bad = ~np.isfinite(data).all(axis=1)
            bad |= (data.min(axis=1) < -atol) | (data.max(axis=1) > 1 + atol)
            bad |= np.abs(data.sum(axis=1) - 1.0) > atol
        if bad.any():
            # the first offending column reports the precise error
            row = int(np.argmax(bad))
            check_column(data[row], atol=atol, row=row)
        data.setflags(write=False)
        self._data = data

    def __len__(self):
        return self._data.shape[0]

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return ScoreMatrix(self._data[idx])
        return self._data[idx]

    def __iter__(self):
        return iter(self._data)

    def to_list(self):
        return self._data.tolist()

    @property
    def length(self):
        return self._data.shape[0]

    @property
    def num_classes(self):
        return self._data.shape[1]

    @property
    def data(self):
        return self._data


def as_score_matrix(P) -> ScoreMatrix:
    if isinstance(P, ScoreMatrix):
        return P
    return ScoreMatrix(P)


class DecoderParams:
    """K allowed transitions, transition cost delta and beam limit gamma"""

    def __init__(self, k=2, delta=-0.2, gamma=300):
        if isinstance(k, bool) or int(k) != k or k < 0:
            raise DecoderError("k should be a non-negative integer, get {}".format(k))
        if not delta <= 0:
            raise DecoderError("delta should be <= 0, get {}".format(delta))
        if isinstance(gamma, bool) or int(gamma) != gamma or gamma < 1:
            raise DecoderError("gamma should be a positive integer, get {}".format(gamma))
        self.k = int(k)
        self.delta = float(delta)
        self.gamma = int(gamma)

    def __eq__(self, other):
        if isinstance(other, DecoderParams):
            return self.to_dict() == other.to_dict()
        return False

    def __repr__(self):
        return "DecoderParams(k={}, delta={}, gamma={})".format(
            self.k, self.delta, self.gamma
        )

    def to_dict(self):
        return {"k": self.k, "delta": self.delta, "gamma": self.gamma}

    @classmethod
    def for_tuple_length(cls, s, delta=-0.2, gamma=300):
        return cls(k=s - 1, delta=delta, gamma=gamma)

    @classmethod
    def from_dict(cls, config):
        return cls(**config)


class Path:
    """A beam hypothesis: sequence record pi, score s and transition count k"""

    __slots__ = ("pi", "score", "transitions")

    def __init__(self, pi: Iterable[int], score: float, transitions=None):
        self.pi = tuple(int(p) for p in pi)
        self.score = float(score)
        self.transitions = len(self.pi) - 1 if transitions is None else transitions
        assert self.transitions == len(self.pi) - 1, "transitions {} mismatch pi {}".format(
            self.transitions, self.pi
        )

    def __eq__(self, other):
        if isinstance(other, Path):
            return (self.pi, self.score, self.transitions) == (
                other.pi,
                other.score,
                other.transitions,
            )
        return False

    def __repr__(self):
        return "Path(pi={}, score={:.6f}, k={})".format(
            list(self.pi), self.score, self.transitions
        )

    def __str__(self):
        return "pi={} score={:.3f} k={}".format(
            "[" + ",".join(str(p) for p in self.pi) + "]", self.score, self.transitions
        )

    def to_dict(self):
        return {"pi": list(self.pi), "score": self.score, "transitions": self.transitions}

    @property
    def last(self):
        return self.pi[-1]

    @classmethod
    def from_dict(cls, config):
        return cls(config["pi"], config["score"], config.get("transitions"))


def rank_key(pi: Sequence[int], score: float):
    """Descending score, ties resolved to the lexicographically smaller pi"""

    return (-score, tuple(pi))
