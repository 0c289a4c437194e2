"""gesture_tuples.decoder.viterbi"""

import heapq
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .path import (
    DecodePreconditionError,
    DecoderParams,
    DimensionMismatchError,
    NoValidPathError,
    Path,
    ScoreMatrix,
    as_score_matrix,
    check_column,
    rank_key,
)


def _truncate(candidates: Dict[Tuple[int, ...], float], gamma: int) -> List[Path]:
    items = candidates.items()
    key = lambda item: (-item[1], item[0])
    if len(candidates) > gamma:
        ranked = heapq.nsmallest(gamma, items, key=key)
    else:
        ranked = sorted(items, key=key)
    return [Path(pi, score, len(pi) - 1) for pi, score in ranked]


class _PackedBeam:
    """A beam as numpy arrays, each pi packed into one lexicographic integer.

    Digit j of a code holds pi[j] + 1 in base N + 1, missing states are 0, so
    ordering codes orders the pi tuples and a prefix sorts before its children.
    """

    def __init__(self, codes, scores, lengths, weights):
        self.codes = codes
        self.scores = scores
        self.lengths = lengths
        self.weights = weights

    @staticmethod
    def radix(num_classes: int, k: int) -> Optional[np.ndarray]:
        base = num_classes + 1
        if base ** (k + 1) >= 2**62:
            return None
        return np.array([base ** (k - j) for j in range(k + 1)], dtype=np.int64)

    @classmethod
    def from_paths(cls, beam: List[Path], num_classes: int, weights: np.ndarray):
        codes = np.zeros(len(beam), dtype=np.int64)
        for idx, path in enumerate(beam):
            if max(path.pi) >= num_classes:
                raise DimensionMismatchError(
                    "Path state {} does not exist in a column of {} entries".format(
                        max(path.pi), num_classes
                    )
                )
            if len(path.pi) > weights.shape[0]:
                raise DimensionMismatchError(
                    "Path {} holds more than {} transitions".format(
                        list(path.pi), weights.shape[0] - 1
                    )
                )
            codes[idx] = sum((p + 1) * int(w) for p, w in zip(path.pi, weights))
        scores = np.array([p.score for p in beam], dtype=np.float64)
        lengths = np.array([len(p.pi) for p in beam], dtype=np.int64)
        return cls(codes, scores, lengths, weights)

    @classmethod
    def start(cls, column: np.ndarray, params: DecoderParams, weights: np.ndarray):
        size = column.shape[0]
        codes = (np.arange(size, dtype=np.int64) + 1) * weights[0]
        beam = cls(codes, column.copy(), np.ones(size, dtype=np.int64), weights)
        return beam.truncate(params.gamma)

    def last_states(self, size: int) -> np.ndarray:
        return (self.codes // self.weights[self.lengths - 1]) % (size + 1) - 1

    def truncate(self, gamma: int) -> "_PackedBeam":
        codes, scores, lengths = self.codes, self.scores, self.lengths
        if scores.shape[0] > gamma:
            pivot = scores.shape[0] - gamma
            kth = np.partition(scores, pivot)[pivot]
            keep = np.flatnonzero(scores >= kth)
            codes, scores, lengths = codes[keep], scores[keep], lengths[keep]
        order = np.lexsort((codes, -scores))[:gamma]
        return _PackedBeam(codes[order], scores[order], lengths[order], self.weights)

    def step(self, column: np.ndarray, params: DecoderParams) -> "_PackedBeam":
        size = column.shape[0]
        codes, scores, lengths, weights = self.codes, self.scores, self.lengths, self.weights
        last = self.last_states(size)
        stay = scores + column[last]

        movable = np.flatnonzero(lengths <= params.k)
        rows = np.arange(movable.shape[0])
        moves = scores[movable][:, None] + column[None, :] + params.delta
        valid = np.ones(moves.shape, dtype=bool)
        valid[rows, last[movable]] = False

        # the stay child of [.., a, b] and the move child of [.., a] share pi
        child = np.flatnonzero(lengths > 1)
        if child.shape[0] and movable.shape[0]:
            parent_codes = codes[child] - (last[child] + 1) * weights[lengths[child] - 1]
            order = np.argsort(codes)
            ranked = codes[order]
            pos = np.minimum(np.searchsorted(ranked, parent_codes), ranked.shape[0] - 1)
            found = ranked[pos] == parent_codes
            child, parent = child[found], order[pos[found]]
            row_of = np.full(codes.shape[0], -1, dtype=np.int64)
            row_of[movable] = rows
            parent_rows = row_of[parent]
            stay[child] = np.maximum(stay[child], moves[parent_rows, last[child]])
            valid[parent_rows, last[child]] = False

        move_codes = (
            codes[movable][:, None]
            + (np.arange(size, dtype=np.int64) + 1)[None, :]
            * weights[lengths[movable]][:, None]
        )
        move_lengths = np.broadcast_to((lengths[movable] + 1)[:, None], moves.shape)
        merged = _PackedBeam(
            np.concatenate([codes, move_codes[valid]]),
            np.concatenate([stay, moves[valid]]),
            np.concatenate([lengths, move_lengths[valid]]),
            weights,
        )
        return merged.truncate(params.gamma)

    def to_paths(self, size: int) -> List[Path]:
        paths, weights = [], self.weights.tolist()
        for code, score, length in zip(
            self.codes.tolist(), self.scores.tolist(), self.lengths.tolist()
        ):
            pi = [(code // w) % (size + 1) - 1 for w in weights[:length]]
            paths.append(Path(pi, score, length - 1))
        return paths


def init_beam(P0, params: DecoderParams) -> List[Path]:
    """Start one path per phoneme state, scored with P_0"""

    column = check_column(P0).tolist()
    candidates = {(n,): p for n, p in enumerate(column)}
    return _truncate(candidates, params.gamma)


def step_beam(
    beam: List[Path], Pt, params: DecoderParams, num_classes: Optional[int] = None
) -> List[Path]:
    """Extend every path of the beam with the states of column Pt.

    Staying on the last state adds Pt[n]; moving to a new state appends it to
    pi and adds Pt[n] + delta while transitions < K. Moves past the budget are
    dropped. Children with the same pi keep the best score.
    """

    assert beam, "step_beam needs a non-empty beam"
    column = check_column(Pt, num_classes).tolist()
    size = len(column)
    k_max, delta = params.k, params.delta
    candidates = {}
    for path in beam:
        pi, score, last = path.pi, path.score, path.pi[-1]
        if last >= size:
            raise DimensionMismatchError(
                "Path state {} does not exist in a column of {} entries".format(last, size)
            )
        stay = score + column[last]
        if candidates.get(pi, stay) <= stay:
            candidates[pi] = stay
        if path.transitions >= k_max:
            continue
        for n, p in enumerate(column):
            if n == last:
                continue
            child, moved = pi + (n,), score + p + delta
            if candidates.get(child, moved) <= moved:
                candidates[child] = moved
    return _truncate(candidates, params.gamma)


def run_beam(
    P, params: DecoderParams, beam: Optional[List[Path]] = None
) -> List[Path]:
    """Consume the columns of P, starting a new beam or resuming `beam`.

    Same result as chaining init_beam and step_beam, computed on packed arrays.
    """

    matrix = as_score_matrix(P)
    size = matrix.num_classes
    columns = iter(matrix.data)
    weights = _PackedBeam.radix(size, params.k)
    if weights is None:
        # codes would overflow int64
        if beam is None:
            beam = init_beam(next(columns), params)
        for column in columns:
            beam = step_beam(beam, column, params, size)
        return beam
    if beam is None:
        packed = _PackedBeam.start(next(columns), params, weights)
    else:
        assert beam, "run_beam resumes a non-empty beam"
        packed = _PackedBeam.from_paths(beam, size, weights)
    for column in columns:
        packed = packed.step(column, params)
    return packed.to_paths(size)


def decode_nbest(P, params: DecoderParams, top_n: int = 1) -> List[Path]:
    """Best paths holding exactly K transitions, best first"""

    matrix = as_score_matrix(P)
    if matrix.length < params.k + 1:
        raise DecodePreconditionError(
            "{} columns can not hold {} transitions".format(matrix.length, params.k)
        )
    finals = [p for p in run_beam(matrix, params) if p.transitions == params.k]
    if not finals:
        raise NoValidPathError(
            "No path with {} transitions survived the beam of {}".format(
                params.k, params.gamma
            )
        )
    return finals[:top_n]


def decode(P, params: DecoderParams) -> Path:
    """Return the maximal-score path with exactly K transitions"""

    return decode_nbest(P, params, top_n=1)[0]


def align(P, pi: Sequence[int]) -> List[int]:
    """Best assignment of the states of pi to the columns of P, in order"""

    matrix = as_score_matrix(P)
    length, segments = matrix.length, len(pi)
    if length < segments:
        raise DecodePreconditionError(
            "{} columns can not hold {} states".format(length, segments)
        )
    scores = matrix.data[:, list(pi)]
    table = np.full((length, segments), -np.inf)
    moved = np.zeros((length, segments), dtype=bool)
    table[0, 0] = scores[0, 0]
    for t in range(1, length):
        for j in range(min(t + 1, segments)):
            stay = table[t - 1, j]
            come = table[t - 1, j - 1] if j > 0 else -np.inf
            moved[t, j] = come > stay
            table[t, j] = max(stay, come) + scores[t, j]
    states, j = [], segments - 1
    for t in range(length - 1, -1, -1):
        states.append(pi[j])
        if t > 0 and moved[t, j]:
            j -= 1
    return states[::-1]


def replay_score(P, states: Sequence[int], delta: float) -> float:
    """Sum of the assigned column probabilities plus delta per state change"""

    matrix = as_score_matrix(P)
    assert len(states) == matrix.length, "Expect {} states, get {}".format(
        matrix.length, len(states)
    )
    score = float(matrix.data[0, states[0]])
    for t in range(1, matrix.length):
        score = score + float(matrix.data[t, states[t]])
        if states[t] != states[t - 1]:
            score = score + delta
    return score
