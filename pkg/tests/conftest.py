import numpy as np
import pytest

from modules.alphabet import AlphabetConfig
from modules.pipeline import RawScoreFrame


def one_hot_columns(states, num_classes):
    columns = np.zeros((len(states), num_classes))
    columns[np.arange(len(states)), states] = 1.0
    return columns


def random_columns(rng, length, num_classes):
    logits = rng.normal(size=(length, num_classes)) * 2.0
    probs = np.exp(logits - logits.max(axis=1, keepdims=True))
    return probs / probs.sum(axis=1, keepdims=True)


def logit_frames(labels, alphabet=None, high=5.0, start=0):
    """Clean raw frames with `high` at the labeled class"""

    alphabet = alphabet or AlphabetConfig()
    frames = []
    for offset, label in enumerate(labels):
        scores = np.zeros(alphabet.num_classes)
        scores[label] = high
        frames.append(RawScoreFrame(scores, start + offset))
    return frames


@pytest.fixture
def alphabet():
    return AlphabetConfig(10)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
