"""gesture_tuples.simulator"""

from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from modules import utils
from modules.alphabet import (
    DEFAULT_ENUMERATION_CAP,
    AlphabetConfig,
    GestureTuple,
    enumerate_tuples,
    tuple_count,
)
from modules.pipeline import RawScoreFrame

L_HI = 5.0
L_LO = 0.0
PADDING = 60
# shortest phoneme segment, in post-processing windows
MIN_PHONEME_WINDOWS = 5


class InfeasibleBudgetError(ValueError):
    """Raised when a speed budget can not hold the minimum segments"""


class SimulationError(ValueError):
    """Raised for malformed scripts or noise settings"""


class SpeedPreset:
    """Frames allowed for the whole tuple, recorded at utils.FPS"""

    def __init__(self, name, frame_budget):
        self.name = name
        self.frame_budget = int(frame_budget)

    def __eq__(self, other):
        if isinstance(other, SpeedPreset):
            return (self.name, self.frame_budget) == (other.name, other.frame_budget)
        return False

    def __hash__(self):
        return hash((self.name, self.frame_budget))

    def __repr__(self):
        return "SpeedPreset({}, {} frames, {:.1f}s)".format(
            self.name, self.frame_budget, self.seconds
        )

    @property
    def seconds(self):
        return utils.frames_to_seconds(self.frame_budget)


SPEED_PRESETS = {
    "slow": SpeedPreset("slow", 300),
    "medium": SpeedPreset("medium", 240),
    "fast": SpeedPreset("fast", 180),
}


def get_speed(speed) -> SpeedPreset:
    if isinstance(speed, SpeedPreset):
        return speed
    if speed not in SPEED_PRESETS:
        raise SimulationError(
            "Unknown speed {}, should be in {}".format(speed, "|".join(SPEED_PRESETS))
        )
    return SPEED_PRESETS[speed]


class SimulationScript:
    """Labeled segments of a performance: (class id, duration in frames)"""

    def __init__(
        self,
        segments: Sequence[Tuple[int, int]],
        ground_truth: GestureTuple,
        alphabet: Optional[AlphabetConfig] = None,
    ):
        self.alphabet = alphabet or AlphabetConfig()
        self.segments = [(int(c), int(d)) for c, d in segments]
        self.ground_truth = GestureTuple(ground_truth, self.alphabet.num_phonemes)
        a = self.alphabet
        grammar = (
            [a.no_gesture, a.preparation]
            + list(self.ground_truth)
            + [a.retraction, a.no_gesture]
        )
        labels = [c for c, _ in self.segments]
        if labels != grammar:
            raise SimulationError(
                "Segments {} do not follow the performance grammar {}".format(labels, grammar)
            )
        if any(d < 1 for _, d in self.segments):
            raise SimulationError("Every segment lasts at least one frame")

    def __eq__(self, other):
        if isinstance(other, SimulationScript):
            return (self.segments, self.ground_truth) == (other.segments, other.ground_truth)
        return False

    def abstract(self):
        return {
            "ground_truth": str(self.ground_truth),
            "segments": " ".join("{}x{}".format(c, d) for c, d in self.segments),
            "gesture_frames": self.gesture_frames,
        }

    def __str__(self):
        return utils.dump_dict(self.abstract())

    def labels(self) -> np.ndarray:
        return np.repeat(
            [c for c, _ in self.segments], [d for _, d in self.segments]
        ).astype(np.int64)

    @property
    def num_frames(self):
        return sum(d for _, d in self.segments)

    @property
    def gesture_frames(self):
        """Frames from preparation to retraction, the part bound by the speed budget"""

        return sum(d for _, d in self.segments[1:-1])


class NoiseModel:
    def __init__(self, logit_sigma=0.0, blend_width=0, seed=0):
        if not logit_sigma >= 0:
            raise SimulationError("logit_sigma should be >= 0, get {}".format(logit_sigma))
        if isinstance(blend_width, bool) or int(blend_width) != blend_width or blend_width < 0:
            raise SimulationError(
                "blend_width should be a non-negative integer, get {}".format(blend_width)
            )
        self.logit_sigma = float(logit_sigma)
        self.blend_width = int(blend_width)
        self.seed = int(seed)

    def with_seed(self, seed):
        return NoiseModel(self.logit_sigma, self.blend_width, seed)

    def to_dict(self):
        return {
            "logit_sigma": self.logit_sigma,
            "blend_width": self.blend_width,
            "seed": self.seed,
        }


def _rng(seed, stream):
    return np.random.default_rng(np.random.SeedSequence([int(seed), stream]))


def script_performance(
    t,
    speed,
    seed: int,
    alphabet: Optional[AlphabetConfig] = None,
    post_window: int = 5,
    detector_queue_len: int = 8,
    padding: int = PADDING,
) -> SimulationScript:
    """Split the speed budget over preparation, the phonemes and retraction.

    Phoneme segments last at least MIN_PHONEME_WINDOWS windows, signaling segments at
    least detector_queue_len windows; the rest of a random share (80-100%) of
    the budget is spread with Dirichlet proportions.
    """

    alphabet = alphabet or AlphabetConfig()
    t = GestureTuple(t, alphabet.num_phonemes)
    speed = get_speed(speed)
    rng = _rng(seed, 0)
    minimums = (
        [detector_queue_len * post_window]
        + [MIN_PHONEME_WINDOWS * post_window] * len(t)
        + [detector_queue_len * post_window]
    )
    needed, budget = sum(minimums), speed.frame_budget
    if budget < needed:
        raise InfeasibleBudgetError(
            "{} budget of {} frames can not hold the {} frames a {}-tuple needs".format(
                speed.name, budget, needed, len(t)
            )
        )
    total = int(rng.integers(max(needed, int(0.8 * budget)), budget + 1))
    slack = total - needed
    shares = rng.dirichlet(np.ones(len(minimums)))
    extra = np.floor(shares * slack).astype(np.int64)
    extra[int(np.argmax(shares))] += slack - int(extra.sum())
    durations = [m + int(e) for m, e in zip(minimums, extra)]
    labels = [alphabet.preparation] + list(t) + [alphabet.retraction]
    segments = (
        [(alphabet.no_gesture, padding)]
        + list(zip(labels, durations))
        + [(alphabet.no_gesture, padding)]
    )
    return SimulationScript(segments, t, alphabet)


def render_logits(
    script: SimulationScript, noise: NoiseModel, l_hi: float = L_HI, l_lo: float = L_LO
) -> np.ndarray:
    """Frame x class logits of a script, as a numpy array"""

    labels = script.labels()
    num_frames, num_classes = labels.shape[0], script.alphabet.num_classes
    logits = np.full((num_frames, num_classes), l_lo, dtype=np.float64)
    logits[np.arange(num_frames), labels] = l_hi
    half = noise.blend_width / 2.0
    if noise.blend_width > 0:
        boundary = 0
        for idx in range(1, len(script.segments)):
            boundary += script.segments[idx - 1][1]
            prev, cur = script.segments[idx - 1][0], script.segments[idx][0]
            lo = max(0, int(np.ceil(boundary - half)))
            hi = min(num_frames - 1, int(np.floor(boundary + half)))
            for f in range(lo, hi + 1):
                w = (f - boundary) / float(noise.blend_width) + 0.5
                logits[f, :] = l_lo
                logits[f, prev] = l_lo + (1.0 - w) * (l_hi - l_lo)
                logits[f, cur] = l_lo + w * (l_hi - l_lo)
    draws = _rng(noise.seed, 1).standard_normal((num_frames, num_classes))
    return logits + noise.logit_sigma * draws


def render_scores(
    script: SimulationScript, noise: NoiseModel, l_hi: float = L_HI, l_lo: float = L_LO
) -> List[RawScoreFrame]:
    logits = render_logits(script, noise, l_hi, l_lo)
    return [RawScoreFrame(row, t) for t, row in enumerate(logits)]


def sample_seed(seed: int, index: int, repeat: int) -> int:
    """Seed of one sample, fixed by (run seed, tuple index, sample number)"""

    state = np.random.SeedSequence([int(seed), int(index), int(repeat)])
    return int(state.generate_state(1, dtype=np.uint64)[0])


class Sample:
    def __init__(self, frames, ground_truth, speed, seed, index, script=None):
        self.frames = frames
        self.ground_truth = ground_truth
        self.speed = speed
        self.seed = seed
        self.index = index
        self.script = script

    def __repr__(self):
        return "Sample(#{} {} {} seed={})".format(
            self.index, self.ground_truth, self.speed.name, self.seed
        )


def iter_test_set(
    m: int,
    s: int,
    samples_per_class: int,
    speeds: Sequence,
    noise: NoiseModel,
    cap: int = DEFAULT_ENUMERATION_CAP,
    l_hi: float = L_HI,
    l_lo: float = L_LO,
    padding: int = PADDING,
    post_window: int = 5,
    detector_queue_len: int = 8,
) -> Iterator[Sample]:
    """Lazily render samples_per_class streams for every tuple, cycling speeds"""

    alphabet = AlphabetConfig(m)
    speeds = [get_speed(sp) for sp in speeds]
    if not speeds:
        raise SimulationError("At least one speed preset is needed")
    tuples = enumerate_tuples(m, s, cap)
    index = 0
    for t_idx, t in enumerate(tuples):
        for repeat in range(samples_per_class):
            speed = speeds[index % len(speeds)]
            seed = sample_seed(noise.seed, t_idx, repeat)
            script = script_performance(
                t,
                speed,
                seed,
                alphabet,
                post_window=post_window,
                detector_queue_len=detector_queue_len,
                padding=padding,
            )
            frames = render_scores(script, noise.with_seed(seed), l_hi, l_lo)
            yield Sample(frames, t, speed, seed, index, script)
            index += 1


def generate_test_set(
    m: int, s: int, samples_per_class: int, speeds: Sequence, noise: NoiseModel, **kwargs
) -> List[Sample]:
    samples = list(iter_test_set(m, s, samples_per_class, speeds, noise, **kwargs))
    assert len(samples) == tuple_count(m, s) * samples_per_class
    return samples
