import random

import pytest

from modules.alphabet import (
    AlphabetConfig,
    AlphabetError,
    EnumerationCapError,
    GestureTuple,
    InvalidTupleError,
    enumerate_tuples,
    index_to_tuple,
    tuple_count,
    tuple_index,
)


@pytest.mark.parametrize(
    "m, s, count", [(10, 3, 810), (10, 5, 65610), (3, 1, 3), (2, 4, 2)]
)
def test_tuple_count(m, s, count):
    assert tuple_count(m, s) == count


@pytest.mark.parametrize("m, s", [(1, 3), (0, 1), (10, 0)])
def test_tuple_count_domain(m, s):
    with pytest.raises(AlphabetError):
        tuple_count(m, s)


def test_enumerate_small_spaces():
    assert [t.to_list() for t in enumerate_tuples(2, 2)] == [[0, 1], [1, 0]]
    assert [t.to_list() for t in enumerate_tuples(3, 2)] == [
        [0, 1],
        [0, 2],
        [1, 0],
        [1, 2],
        [2, 0],
        [2, 1],
    ]


def test_enumerate_810():
    tuples = enumerate_tuples(10, 3)
    assert len(tuples) == 810
    assert tuples[0] == [0, 1, 0]
    assert tuples[-1] == [9, 8, 9]


@pytest.mark.parametrize("m", range(2, 11))
@pytest.mark.parametrize("s", range(1, 5))
def test_enumeration_matches_count(m, s):
    tuples = enumerate_tuples(m, s)
    assert len(tuples) == tuple_count(m, s)
    assert len(set(tuples)) == len(tuples)
    assert tuples == sorted(tuples)
    for idx, t in enumerate(tuples):
        assert all(a != b for a, b in zip(t, t[1:]))
        assert all(0 <= p < m for p in t)
        assert tuple_index(t, m) == idx


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        enumerate_tuples(10, 5, cap=1000)
    assert len(enumerate_tuples(10, 5, cap=65610)) == 65610


def test_tuple_index_examples():
    assert tuple_index([0, 1, 0], 10) == 0
    assert tuple_index([9, 8, 9], 10) == 809
    with pytest.raises(InvalidTupleError):
        tuple_index([1, 1, 2], 10)
    with pytest.raises(InvalidTupleError):
        tuple_index([1, 10, 2], 10)


def test_index_round_trip():
    rnd = random.Random(7)
    for _ in range(1000):
        m, s = rnd.randint(2, 10), rnd.randint(1, 6)
        phonemes = [rnd.randrange(m)]
        while len(phonemes) < s:
            p = rnd.randrange(m)
            if p != phonemes[-1]:
                phonemes.append(p)
        idx = tuple_index(phonemes, m)
        assert 0 <= idx < tuple_count(m, s)
        assert index_to_tuple(idx, m, s) == phonemes


def test_index_to_tuple_range():
    with pytest.raises(InvalidTupleError):
        index_to_tuple(810, 10, 3)


def test_gesture_tuple_rules():
    assert str(GestureTuple([5, 1, 3])) == "5-1-3"
    assert GestureTuple.from_string("5-1-3") == GestureTuple([5, 1, 3])
    with pytest.raises(InvalidTupleError):
        GestureTuple([2, 2])
    with pytest.raises(InvalidTupleError):
        GestureTuple([])
    with pytest.raises(InvalidTupleError):
        GestureTuple([3, 11], num_phonemes=10)
    with pytest.raises(InvalidTupleError):
        GestureTuple.from_string("5-x")


def test_alphabet_layout():
    alphabet = AlphabetConfig(10)
    assert alphabet.num_classes == 13
    assert (alphabet.preparation, alphabet.retraction, alphabet.no_gesture) == (10, 11, 12)
    names = alphabet.class_names()
    assert names[0] == "class_0" and names[9] == "class_9"
    assert names[10:] == ["preparation", "retraction", "no_gesture"]
    assert len(set(names)) == 13
    with pytest.raises(AlphabetError):
        AlphabetConfig(1)
