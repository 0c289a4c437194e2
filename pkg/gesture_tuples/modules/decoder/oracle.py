"""gesture_tuples.decoder.oracle"""

import itertools
import math

from modules.alphabet import iter_tuples
from .path import (
    DecodePreconditionError,
    DecoderParams,
    Path,
    SearchSpaceError,
    as_score_matrix,
)

# largest number of state assignments the oracle enumerates
SEARCH_LIMIT = 10**7


def search_space(length: int, num_classes: int, k: int) -> int:
    return num_classes ** (k + 1) * math.comb(length - 1, k)


def brute_force_decode(P, params: DecoderParams, limit: int = SEARCH_LIMIT) -> Path:
    """Score every state assignment with exactly K change points.

    Scores accumulate column by column, in the same order as the beam
    decoder, so both agree bit for bit on identical assignments.
    """

    matrix = as_score_matrix(P)
    length, num_classes, k = matrix.length, matrix.num_classes, params.k
    if length < k + 1:
        raise DecodePreconditionError(
            "{} columns can not hold {} transitions".format(length, k)
        )
    size = search_space(length, num_classes, k)
    if size > limit:
        raise SearchSpaceError(
            "Search space {} of T={}, N={}, K={} exceeds {}".format(
                size, length, num_classes, k, limit
            )
        )
    columns = matrix.data.tolist()
    best_pi, best_score = None, -math.inf
    for states in iter_tuples(num_classes, k + 1):
        pi = states.phonemes
        for cuts in itertools.combinations(range(1, length), k):
            bounds = set(cuts)
            j = 0
            score = columns[0][pi[0]]
            for t in range(1, length):
                if t in bounds:
                    j += 1
                    score = score + columns[t][pi[j]] + params.delta
                else:
                    score = score + columns[t][pi[j]]
            if score > best_score or (score == best_score and pi < best_pi):
                best_pi, best_score = pi, score
    return Path(best_pi, best_score, k)
