"""gesture_tuples.alphabet"""

from typing import Iterable, Iterator, List, Optional, Sequence

DEFAULT_ENUMERATION_CAP = 10**6

SIGNALING_CLASSES = ("preparation", "retraction", "no_gesture")


class AlphabetError(ValueError):
    """Raised when the phoneme count or tuple length is out of domain"""


class InvalidTupleError(ValueError):
    """Raised for consecutive repeats or out-of-range phoneme ids"""


class EnumerationCapError(ValueError):
    """Raised when a tuple space is larger than the enumeration cap"""


class AlphabetConfig:
    """The label universe: m phonemes followed by the three signaling classes.

    Column layout of every 13-class (m + 3) score vector:
    ``0..m-1`` phonemes, ``m`` preparation, ``m+1`` retraction, ``m+2`` no-gesture.
    """

    def __init__(self, num_phonemes=10):
        if not isinstance(num_phonemes, int) or num_phonemes < 2:
            raise AlphabetError(
                "num_phonemes should be an integer >= 2, get {}".format(num_phonemes)
            )
        self._num_phonemes = num_phonemes

    def __eq__(self, other):
        if isinstance(other, AlphabetConfig):
            return self._num_phonemes == other._num_phonemes
        return False

    def __hash__(self):
        return hash(("alphabet", self._num_phonemes))

    def __repr__(self):
        return "AlphabetConfig(num_phonemes={})".format(self._num_phonemes)

    def class_names(self) -> List[str]:
        names = ["class_{}".format(p) for p in self.phonemes]
        return names + list(SIGNALING_CLASSES)

    def is_phoneme(self, label: int) -> bool:
        return 0 <= label < self._num_phonemes

    @property
    def num_phonemes(self):
        return self._num_phonemes

    @property
    def num_classes(self):
        return self._num_phonemes + len(SIGNALING_CLASSES)

    @property
    def phonemes(self):
        return range(self._num_phonemes)

    @property
    def preparation(self):
        return self._num_phonemes

    @property
    def retraction(self):
        return self._num_phonemes + 1

    @property
    def no_gesture(self):
        return self._num_phonemes + 2


class GestureTuple:
    """Ordered phonemes performed one after another, no consecutive repeats"""

    __slots__ = ("_phonemes",)

    def __init__(self, phonemes: Iterable[int], num_phonemes: Optional[int] = None):
        phonemes = tuple(phonemes)
        validate_tuple(phonemes, num_phonemes)
        self._phonemes = tuple(int(p) for p in phonemes)

    def __len__(self):
        return len(self._phonemes)

    def __iter__(self):
        return iter(self._phonemes)

    def __getitem__(self, idx):
        return self._phonemes[idx]

    def __eq__(self, other):
        if isinstance(other, GestureTuple):
            return self._phonemes == other._phonemes
        if isinstance(other, (tuple, list)):
            return self._phonemes == tuple(other)
        return False

    def __lt__(self, other):
        return self._phonemes < tuple(other)

    def __hash__(self):
        return hash(self._phonemes)

    def __str__(self):
        return "-".join(str(p) for p in self._phonemes)

    def __repr__(self):
        return "GestureTuple({})".format(list(self._phonemes))

    def to_list(self):
        return list(self._phonemes)

    @property
    def phonemes(self):
        return self._phonemes

    @classmethod
    def from_string(cls, text: str, num_phonemes: Optional[int] = None):
        try:
            phonemes = [int(p) for p in text.strip().split("-")]
        except ValueError as err:
            raise InvalidTupleError("Can not parse tuple from '{}'".format(text)) from err
        return cls(phonemes, num_phonemes)


def validate_tuple(phonemes: Sequence[int], num_phonemes: Optional[int] = None):
    """Check the no-repeat rule and the phoneme id range"""

    if len(phonemes) < 1:
        raise InvalidTupleError("A gesture tuple holds at least one phoneme")
    for pos, p in enumerate(phonemes):
        if isinstance(p, bool) or int(p) != p or p < 0:
            raise InvalidTupleError("Invalid phoneme id {} at position {}".format(p, pos))
        if num_phonemes is not None and p >= num_phonemes:
            raise InvalidTupleError(
                "Phoneme id {} at position {} is out of range [0, {})".format(
                    p, pos, num_phonemes
                )
            )
        if pos > 0 and p == phonemes[pos - 1]:
            raise InvalidTupleError(
                "Consecutive repeat of phoneme {} at position {}".format(p, pos)
            )


def _check_domain(m, s):
    if m < 2:
        raise AlphabetError("m should be >= 2, get {}".format(m))
    if s < 1:
        raise AlphabetError("s should be >= 1, get {}".format(s))


def tuple_count(m: int, s: int) -> int:
    """Number of s-tuples over m phonemes without consecutive repeats"""

    _check_domain(m, s)
    return m * (m - 1) ** (s - 1)


def iter_tuples(m: int, s: int) -> Iterator[GestureTuple]:
    """Lazily yield every tuple in lexicographic order of phoneme ids"""

    _check_domain(m, s)

    def _extend(prefix, depth):
        if depth == s:
            yield prefix
            return
        for p in range(m):
            if prefix and p == prefix[-1]:
                continue
            yield from _extend(prefix + (p,), depth + 1)

    for phonemes in _extend((), 0):
        yield GestureTuple(phonemes)


def enumerate_tuples(
    m: int, s: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> List[GestureTuple]:
    count = tuple_count(m, s)
    if count > cap:
        raise EnumerationCapError(
            "{} tuples for m={}, s={} exceed the enumeration cap {}".format(
                count, m, s, cap
            )
        )
    return list(iter_tuples(m, s))


def tuple_index(t: Sequence[int], m: int) -> int:
    """Position of t in the lexicographic enumeration of its tuple space.

    The first phoneme is a digit in base m, every later phoneme a digit in
    base m-1 once the previous phoneme is skipped.
    """

    phonemes = tuple(t)
    _check_domain(m, len(phonemes) or 1)
    validate_tuple(phonemes, m)
    index = phonemes[0]
    for prev, cur in zip(phonemes, phonemes[1:]):
        index = index * (m - 1) + (cur if cur < prev else cur - 1)
    return index


def index_to_tuple(index: int, m: int, s: int) -> GestureTuple:
    """Inverse of tuple_index"""

    count = tuple_count(m, s)
    if not 0 <= index < count:
        raise InvalidTupleError(
            "Index {} out of range [0, {}) for m={}, s={}".format(index, count, m, s)
        )
    digits = []
    for _ in range(s - 1):
        index, digit = divmod(index, m - 1)
        digits.append(digit)
    phonemes = [index]
    for digit in reversed(digits):
        phonemes.append(digit if digit < phonemes[-1] else digit + 1)
    return GestureTuple(phonemes, m)
