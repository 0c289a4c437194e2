"""gesture_tuples.pipeline"""

import collections
from typing import Iterable, List, Optional, Sequence

import numpy as np

from modules import utils
from modules.alphabet import AlphabetConfig, GestureTuple
from modules.decoder import DecoderError, DecoderParams, ScoreMatrix, decode

# detection thresholds used with 2D and 3D classifiers
DETECTOR_PRESETS = {"2d": 5.0, "3d": 6.0}


class PipelineError(ValueError):
    """Raised for malformed frames, buffers or pipeline settings"""


class Phase:
    IDLE = "Idle"
    ACTIVE = "GestureActive"
    DONE = "Done"


class EventKind:
    SOG = "SoG"
    EOG = "EoG"
    RECOGNIZED = "TupleRecognized"
    FAILED = "DecodeFailed"

    ALL = (SOG, EOG, RECOGNIZED, FAILED)


def softmax(logits) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    shifted = np.exp(logits - logits.max())
    return shifted / shifted.sum()


class RawScoreFrame:
    """One classifier output: m + 3 scores at a frame index"""

    __slots__ = ("scores", "timestamp")

    def __init__(self, scores, timestamp: int):
        scores = np.asarray(scores, dtype=np.float64)
        if scores.ndim != 1 or scores.shape[0] < 1:
            raise PipelineError(
                "Frame {} should hold a 1-D score vector, get shape {}".format(
                    timestamp, scores.shape
                )
            )
        if not np.all(np.isfinite(scores)):
            raise PipelineError("Frame {} holds non-finite scores".format(timestamp))
        self.scores = scores
        self.timestamp = int(timestamp)

    def __repr__(self):
        return "RawScoreFrame(t={}, argmax={})".format(
            self.timestamp, int(self.scores.argmax())
        )


class RecognitionEvent:
    __slots__ = ("kind", "frame", "tuple", "score", "reason")

    def __init__(self, kind, frame, tuple=None, score=None, reason=None):
        assert kind in EventKind.ALL, "Unexpected event kind " + str(kind)
        assert (tuple is not None) == (
            kind == EventKind.RECOGNIZED
        ), "A tuple comes with TupleRecognized only"
        self.kind = kind
        self.frame = int(frame)
        self.tuple = tuple
        self.score = score
        self.reason = reason

    def __eq__(self, other):
        if isinstance(other, RecognitionEvent):
            return self.to_dict() == other.to_dict()
        return False

    def __str__(self):
        des = "{}@{}".format(self.kind, self.frame)
        if self.tuple is not None:
            des += " [{}] score={:.3f}".format(
                ",".join(str(p) for p in self.tuple), self.score
            )
        if self.reason:
            des += " ({})".format(self.reason)
        return des

    def to_dict(self):
        return {
            "kind": self.kind,
            "frame": self.frame,
            "tuple": str(self.tuple) if self.tuple is not None else None,
            "score": self.score,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, config):
        config = dict(config)
        if config.get("tuple") is not None:
            config["tuple"] = GestureTuple.from_string(config["tuple"])
        return cls(**config)


class PipelineConfig:
    def __init__(
        self,
        post_window=5,
        detector_queue_len=8,
        sog_threshold=5.0,
        eog_threshold=5.0,
        decoder_params: Optional[DecoderParams] = None,
    ):
        for name, value in (
            ("post_window", post_window),
            ("detector_queue_len", detector_queue_len),
        ):
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise PipelineError(
                    "{} should be a positive integer, get {}".format(name, value)
                )
        for name, value in (("sog_threshold", sog_threshold), ("eog_threshold", eog_threshold)):
            if not 0 < value <= detector_queue_len:
                raise PipelineError(
                    "{} should be in (0, {}], get {}".format(name, detector_queue_len, value)
                )
        self.post_window = int(post_window)
        self.detector_queue_len = int(detector_queue_len)
        self.sog_threshold = float(sog_threshold)
        self.eog_threshold = float(eog_threshold)
        self.decoder_params = decoder_params or DecoderParams()

    def to_dict(self):
        return {
            "post_window": self.post_window,
            "detector_queue_len": self.detector_queue_len,
            "sog_threshold": self.sog_threshold,
            "eog_threshold": self.eog_threshold,
            "decoder_params": self.decoder_params.to_dict(),
        }

    @classmethod
    def from_dict(cls, config):
        config = dict(config)
        if isinstance(config.get("decoder_params"), dict):
            config["decoder_params"] = DecoderParams.from_dict(config["decoder_params"])
        return cls(**config)


class PipelineState:
    def __init__(self, config: PipelineConfig):
        self.phase = Phase.IDLE
        self.post_buffer: List[RawScoreFrame] = []
        self.detector_queue = collections.deque(maxlen=config.detector_queue_len)
        self.classifier_queue: List[np.ndarray] = []
        self.events: List[RecognitionEvent] = []

    def abstract(self):
        return {
            "phase": self.phase,
            "post_buffer": len(self.post_buffer),
            "detector_queue": len(self.detector_queue),
            "classifier_queue": len(self.classifier_queue),
            "events": [str(e) for e in self.events],
        }

    def __str__(self):
        return utils.dump_dict(self.abstract())


def average_scores(buffer: Sequence[RawScoreFrame], post_window: Optional[int] = None):
    post_window = post_window or len(buffer)
    if not buffer or len(buffer) != post_window:
        raise PipelineError(
            "Post-processing needs {} frames, get {}".format(post_window, len(buffer))
        )
    return np.mean([f.scores for f in buffer], axis=0)


def post_process(buffer: Sequence[RawScoreFrame], post_window: Optional[int] = None):
    """Average a full, non-overlapping window of raw scores, then softmax"""

    return softmax(average_scores(buffer, post_window))


def phoneme_column(mean_scores, alphabet: AlphabetConfig) -> np.ndarray:
    """Softmax restricted to the phoneme entries, a decoder column"""

    return softmax(np.asarray(mean_scores)[: alphabet.num_phonemes])


class GesturePipeline:
    """Online SoG/EoG detection feeding the Viterbi-like decoder.

    Raw frames are averaged in non-overlapping windows; the detector queue sums
    preparation (Idle) or retraction (GestureActive) probability over its last
    outputs; the outputs strictly between SoG and EoG fill the classifier queue.
    """

    def __init__(
        self,
        config: Optional[PipelineConfig] = None,
        alphabet: Optional[AlphabetConfig] = None,
        logger=None,
    ):
        self.config = config or PipelineConfig()
        self.alphabet = alphabet or AlphabetConfig()
        self.logger = logger or utils.IOLogger()
        self.state = PipelineState(self.config)

    def reset(self):
        self.state = PipelineState(self.config)

    def detector_update(self, v) -> Optional[str]:
        state, config = self.state, self.config
        if state.phase == Phase.DONE:
            return None
        state.detector_queue.append(v)
        if state.phase == Phase.IDLE:
            total = sum(float(q[self.alphabet.preparation]) for q in state.detector_queue)
            if total > config.sog_threshold:
                state.phase = Phase.ACTIVE
                state.detector_queue.clear()
                return EventKind.SOG
        elif state.phase == Phase.ACTIVE:
            total = sum(float(q[self.alphabet.retraction]) for q in state.detector_queue)
            if total > config.eog_threshold:
                state.phase = Phase.DONE
                return EventKind.EOG
        return None

    def push_frame(self, frame: RawScoreFrame) -> List[RecognitionEvent]:
        state = self.state
        if state.phase == Phase.DONE:
            return []
        if frame.scores.shape[0] != self.alphabet.num_classes:
            raise PipelineError(
                "Frame {} holds {} scores, expect {}".format(
                    frame.timestamp, frame.scores.shape[0], self.alphabet.num_classes
                )
            )
        state.post_buffer.append(frame)
        if len(state.post_buffer) < self.config.post_window:
            return []
        mean_scores = average_scores(state.post_buffer, self.config.post_window)
        state.post_buffer = []
        was_active = state.phase == Phase.ACTIVE
        flag = self.detector_update(softmax(mean_scores))
        events = []
        if flag == EventKind.SOG:
            events.append(RecognitionEvent(EventKind.SOG, frame.timestamp))
            self.logger.debug("SoG at frame {}".format(frame.timestamp))
        elif flag == EventKind.EOG:
            events.append(RecognitionEvent(EventKind.EOG, frame.timestamp))
            self.logger.debug(
                "EoG at frame {}, {} columns queued".format(
                    frame.timestamp, len(state.classifier_queue)
                )
            )
            events.append(self._recognize(frame.timestamp))
        elif was_active:
            state.classifier_queue.append(phoneme_column(mean_scores, self.alphabet))
        state.events.extend(events)
        return events

    def push_frames(self, frames: Iterable[RawScoreFrame]) -> List[RecognitionEvent]:
        events = []
        for frame in frames:
            events.extend(self.push_frame(frame))
        return events

    def finish(self) -> List[RecognitionEvent]:
        """Close the stream, pending frames of a partial window are dropped"""

        if self.state.phase == Phase.ACTIVE:
            self.logger.debug(
                "Stream ended without EoG, {} columns dropped".format(
                    len(self.state.classifier_queue)
                )
            )
        self.state.post_buffer = []
        return []

    def classifier_matrix(self) -> ScoreMatrix:
        return ScoreMatrix(self.state.classifier_queue)

    def _recognize(self, timestamp) -> RecognitionEvent:
        try:
            path = decode(self.classifier_matrix(), self.config.decoder_params)
        except DecoderError as err:
            self.logger.debug("Decode failed at frame {}: {}".format(timestamp, err))
            return RecognitionEvent(EventKind.FAILED, timestamp, reason=str(err))
        self.logger.debug("Decoded {} at frame {}".format(path, timestamp))
        return RecognitionEvent(
            EventKind.RECOGNIZED,
            timestamp,
            tuple=GestureTuple(path.pi, self.alphabet.num_phonemes),
            score=path.score,
        )


def run_stream(
    frames: Iterable[RawScoreFrame],
    config: Optional[PipelineConfig] = None,
    alphabet: Optional[AlphabetConfig] = None,
    logger=None,
) -> List[RecognitionEvent]:
    """Push a whole recording through a fresh pipeline"""

    pipeline = GesturePipeline(config, alphabet, logger)
    events = pipeline.push_frames(frames)
    pipeline.finish()
    return events
