import time

import numpy as np
import pytest

from conftest import one_hot_columns, random_columns
from modules.decoder import (
    DecodePreconditionError,
    DecoderError,
    DecoderParams,
    DimensionMismatchError,
    InvalidColumnError,
    NoValidPathError,
    Path,
    ScoreMatrix,
    SearchSpaceError,
    align,
    brute_force_decode,
    decode,
    decode_nbest,
    init_beam,
    replay_score,
    run_beam,
    step_beam,
)


def test_params_invariants():
    params = DecoderParams()
    assert (params.k, params.delta, params.gamma) == (2, -0.2, 300)
    assert DecoderParams.for_tuple_length(5).k == 4
    for kwargs in ({"k": -1}, {"delta": 0.1}, {"gamma": 0}):
        with pytest.raises(DecoderError):
            DecoderParams(**kwargs)


def test_score_matrix_validation():
    with pytest.raises(InvalidColumnError):
        ScoreMatrix([[0.5, 0.3]])
    with pytest.raises(InvalidColumnError):
        ScoreMatrix([[1.2, -0.2]])
    with pytest.raises(InvalidColumnError):
        ScoreMatrix([])
    with pytest.raises(InvalidColumnError):
        ScoreMatrix([[1.0]])
    with pytest.raises(InvalidColumnError) as info:
        ScoreMatrix([[0.5, 0.5], [0.4, 0.4]])
    assert info.value.row == 1
    matrix = ScoreMatrix([[0.5, 0.5], [0.9, 0.1]])
    assert (matrix.length, matrix.num_classes) == (2, 2)


def test_init_beam():
    beam = init_beam([0.5, 0.5], DecoderParams())
    assert beam == [Path([0], 0.5, 0), Path([1], 0.5, 0)]
    beam = init_beam([0.7, 0.2, 0.1], DecoderParams())
    assert beam[0] == Path([0], 0.7, 0)
    assert len(init_beam([0.25] * 4, DecoderParams(gamma=2))) == 2
    with pytest.raises(InvalidColumnError):
        init_beam([0.5, 0.4], DecoderParams())


def test_step_beam_stay_and_move():
    beam = step_beam([Path([0], 1.0, 0)], [1.0, 0.0], DecoderParams(k=2, delta=-0.2))
    assert [p.pi for p in beam] == [(0,), (0, 1)]
    assert beam[0].score == pytest.approx(2.0)
    assert beam[1].score == pytest.approx(0.8)
    assert [p.transitions for p in beam] == [0, 1]


def test_step_beam_budget_exhausted():
    beam = step_beam([Path([0, 1], 1.5, 1)], [0.6, 0.4], DecoderParams(k=1))
    assert len(beam) == 1
    assert beam[0].pi == (0, 1)
    assert beam[0].score == pytest.approx(1.9)


def test_step_beam_merges_duplicates():
    beam = [Path([0, 1], 0.6, 1), Path([0], 0.6, 0)]
    children = step_beam(beam, [0.5, 0.5], DecoderParams(k=1))
    pis = [p.pi for p in children]
    assert len(pis) == len(set(pis))
    merged = [p for p in children if p.pi == (0, 1)]
    assert len(merged) == 1
    assert merged[0].score == pytest.approx(1.1)


def test_step_beam_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        step_beam([Path([2], 1.0)], [0.5, 0.5], DecoderParams())
    with pytest.raises(DimensionMismatchError):
        step_beam([Path([0], 1.0)], [0.5, 0.5], DecoderParams(), num_classes=3)


def test_decode_one_hot():
    P = one_hot_columns([5, 5, 1, 1, 3, 3], 10)
    path = decode(P, DecoderParams(k=2, delta=-0.2, gamma=300))
    assert path.pi == (5, 1, 3)
    assert path.transitions == 2
    assert path.score == pytest.approx(5.6)
    assert str(path) == "pi=[5,1,3] score=5.600 k=2"


def test_decode_tie_break():
    path = decode([[0.5, 0.5]] * 3, DecoderParams(k=2))
    assert path.pi == (0, 1, 0)
    assert path.score == pytest.approx(1.1)


def test_decode_precondition():
    with pytest.raises(DecodePreconditionError):
        decode([[0.5, 0.5]] * 2, DecoderParams(k=2))


def test_decode_no_valid_path_after_truncation():
    # a beam of one keeps the stay path, which never reaches K transitions
    P = one_hot_columns([0, 0, 0, 0], 3)
    with pytest.raises(NoValidPathError):
        decode(P, DecoderParams(k=2, gamma=1))


def test_decode_nbest_is_sorted():
    P = one_hot_columns([5, 5, 1, 1, 3, 3], 10)
    paths = decode_nbest(P, DecoderParams(), top_n=5)
    assert len(paths) == 5
    assert paths[0].pi == (5, 1, 3)
    assert all(p.transitions == 2 for p in paths)
    scores = [p.score for p in paths]
    assert scores == sorted(scores, reverse=True)


def test_oracle_examples():
    P = one_hot_columns([5, 5, 1, 1, 3, 3], 10)
    path = brute_force_decode(P, DecoderParams())
    assert path.pi == (5, 1, 3)
    assert path.score == pytest.approx(5.6)
    path = brute_force_decode([[0.5, 0.5]] * 3, DecoderParams(k=2))
    assert path.pi == (0, 1, 0)
    assert path.score == pytest.approx(1.1)


def test_oracle_size_guard():
    P = np.full((40, 10), 0.1)
    with pytest.raises(SearchSpaceError):
        brute_force_decode(P, DecoderParams(k=3))


def test_decoder_matches_oracle(rng):
    start = time.perf_counter()
    for _ in range(1000):
        length = int(rng.integers(1, 9))
        num_classes = int(rng.integers(2, 5))
        k = int(rng.integers(0, min(2, length - 1) + 1))
        P = random_columns(rng, length, num_classes)
        params = DecoderParams(k=k, delta=-0.2, gamma=max(num_classes**length, 1))
        fast = decode(P, params)
        slow = brute_force_decode(P, params)
        assert fast.pi == slow.pi
        assert abs(fast.score - slow.score) <= 1e-9
        assert fast.transitions == k
        states = align(P, fast.pi)
        assert abs(replay_score(P, states, params.delta) - fast.score) <= 1e-9
    assert time.perf_counter() - start < 30


def test_beam_invariants(rng):
    params = DecoderParams(k=2, gamma=20)
    P = random_columns(rng, 12, 6)
    beam = init_beam(P[0], params)
    for column in P[1:]:
        beam = step_beam(beam, column, params)
        assert len(beam) <= params.gamma
        keys = [(-p.score, p.pi) for p in beam]
        assert keys == sorted(keys)
        for path in beam:
            assert path.transitions == len(path.pi) - 1 <= params.k
            assert all(a != b for a, b in zip(path.pi, path.pi[1:]))


def test_prefix_then_resume(rng):
    params = DecoderParams(k=2, gamma=50)
    P = random_columns(rng, 15, 5)
    whole = run_beam(P, params)
    resumed = run_beam(P[6:], params, beam=run_beam(P[:6], params))
    assert whole == resumed


def test_permutation_equivariance(rng):
    params = DecoderParams(k=2, gamma=10**6)
    perm = np.array([3, 0, 4, 1, 2])
    for _ in range(20):
        P = random_columns(rng, 7, 5)
        relabeled = np.empty_like(P)
        relabeled[:, perm] = P
        base = decode(P, params)
        moved = decode(relabeled, params)
        assert moved.pi == tuple(int(perm[p]) for p in base.pi)
        assert moved.score == pytest.approx(base.score)


def test_align_one_hot():
    P = one_hot_columns([5, 5, 1, 1, 3, 3], 10)
    assert align(P, (5, 1, 3)) == [5, 5, 1, 1, 3, 3]
    assert replay_score(P, [5, 5, 1, 1, 3, 3], -0.2) == pytest.approx(5.6)


@pytest.mark.slow
def test_decode_throughput(rng):
    P = ScoreMatrix(random_columns(rng, 60, 10))
    params = DecoderParams(k=2, gamma=300)
    decode(P, params)
    laps = []
    for _ in range(10):
        start = time.perf_counter()
        decode(P, params)
        laps.append(time.perf_counter() - start)
    assert min(laps) < 0.01


@pytest.mark.parametrize("k, gamma", [(1, 5), (2, 20), (3, 300), (4, 7)])
def test_run_beam_matches_stepwise(rng, k, gamma):
    params = DecoderParams(k=k, gamma=gamma)
    for _ in range(10):
        P = random_columns(rng, 14, 6)
        beam = init_beam(P[0], params)
        for column in P[1:]:
            beam = step_beam(beam, column, params)
        assert run_beam(P, params) == beam


def test_run_beam_merges_on_ties():
    # one-hot columns give exact score ties between merged children
    P = one_hot_columns([2, 2, 0, 0, 1, 1, 1], 4)
    params = DecoderParams(k=2, gamma=6)
    beam = init_beam(P[0], params)
    for column in P[1:]:
        beam = step_beam(beam, column, params)
    assert run_beam(P, params) == beam
    assert beam[0].pi == (2, 0, 1)


def test_run_beam_wide_codes(rng):
    # 31 states with k=12 no longer fit a packed int64 code
    params = DecoderParams(k=12, gamma=40)
    P = random_columns(rng, 16, 31)
    beam = init_beam(P[0], params)
    for column in P[1:]:
        beam = step_beam(beam, column, params)
    assert run_beam(P, params) == beam


def test_run_beam_rejects_foreign_states():
    with pytest.raises(DimensionMismatchError):
        run_beam([[0.5, 0.5]], DecoderParams(), beam=[Path([3], 1.0)])
