"""gesture_tuples.plot"""

import os
from typing import List, Optional, Sequence

import numpy as np

from modules.alphabet import AlphabetConfig
from modules.pipeline import RawScoreFrame, RecognitionEvent, post_process

# one character per class in text charts: phonemes, then P/R/-
SIGNAL_MARKS = ("P", "R", "-")


def timeline(
    frames: Sequence[RawScoreFrame], post_window: int = 5
) -> np.ndarray:
    """Post-processed probabilities, one row per non-overlapping window"""

    rows = [
        post_process(frames[i : i + post_window], post_window)
        for i in range(0, len(frames) - post_window + 1, post_window)
    ]
    if not rows:
        return np.zeros((0, frames[0].scores.shape[0] if frames else 0))
    return np.stack(rows)


def _mark(label, alphabet):
    if alphabet.is_phoneme(label):
        return str(label) if label < 10 else chr(ord("a") + label - 10)
    return SIGNAL_MARKS[label - alphabet.num_phonemes]


def text_chart(
    frames: Sequence[RawScoreFrame],
    events: List[RecognitionEvent],
    alphabet: Optional[AlphabetConfig] = None,
    post_window: int = 5,
    width: int = 72,
) -> str:
    """Argmax class per window, with the event frames marked underneath"""

    alphabet = alphabet or AlphabetConfig()
    probs = timeline(frames, post_window)
    marks = "".join(_mark(int(r.argmax()), alphabet) for r in probs)
    flags = [" "] * len(marks)
    for event in events:
        pos = event.frame // post_window
        if 0 <= pos < len(flags) and flags[pos] == " ":
            flags[pos] = event.kind[0]
    flags = "".join(flags)
    lines = []
    for start in range(0, len(marks), width):
        lines.append("{:>6} {}".format(start * post_window, marks[start : start + width]))
        if flags[start : start + width].strip():
            lines.append("{:>6} {}".format("", flags[start : start + width]))
    return "\n".join(lines)


def plot_png(
    frames: Sequence[RawScoreFrame],
    events: List[RecognitionEvent],
    path: str,
    alphabet: Optional[AlphabetConfig] = None,
    post_window: int = 5,
    title: str = "",
) -> str:
    """Class-probability timeline of a stream, saved as an image"""

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    alphabet = alphabet or AlphabetConfig()
    probs = timeline(frames, post_window)
    x = np.arange(probs.shape[0]) * post_window
    fig, ax = plt.subplots(figsize=(10, 4))
    for label, name in enumerate(alphabet.class_names()):
        if probs.shape[0] and probs[:, label].max() > 0.3:
            ax.plot(x, probs[:, label], label=name)
    for event in events:
        ax.axvline(event.frame, color="k", linestyle="--", linewidth=0.8)
        ax.text(event.frame, 1.02, event.kind, rotation=90, fontsize=7, va="bottom")
    ax.set_xlabel("frame")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1.0)
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=7)
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)
    return path
