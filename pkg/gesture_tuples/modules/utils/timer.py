"""gesture_tuples.utils.timer"""

import time
import datetime
import contextlib

from .namespace import GestureTuplesMap, GestureTuplesKey

# recording rate of the sensor the speed presets were collected with
FPS = 45


def frames_to_seconds(frames, fps=FPS):
    return frames / float(fps)


def seconds_to_frames(seconds, fps=FPS):
    return int(round(seconds * fps))


class Timer:
    """Wall clock of a run, with named laps for throughput summaries"""

    def __init__(self, mode="wall"):
        self._mode = mode
        self._start = datetime.datetime.now()
        self._tic = time.perf_counter()
        self._laps = {}

    def get_date(self, date_format=""):
        date = datetime.datetime.now()
        if date_format:
            return date.strftime(date_format)
        return date

    def elapsed(self, mode="second"):
        seconds = time.perf_counter() - self._tic
        if mode == "second":
            return seconds
        if mode == "millisecond":
            return seconds * 1000
        return datetime.timedelta(seconds=seconds)

    @contextlib.contextmanager
    def lap(self, name):
        tic = time.perf_counter()
        try:
            yield
        finally:
            count, total = self._laps.get(name, (0, 0.0))
            self._laps[name] = (count + 1, total + time.perf_counter() - tic)

    def get_laps(self):
        return {
            name: {"count": count, "total_s": round(total, 4)}
            for name, (count, total) in self._laps.items()
        }

    @property
    def start(self):
        return self._start

    @property
    def mode(self):
        return self._mode


def set_timer(mode="wall"):
    GestureTuplesMap.set(GestureTuplesKey.TIMER, Timer(mode=mode))
    return GestureTuplesMap.get(GestureTuplesKey.TIMER)


def get_timer():
    if not GestureTuplesMap.get(GestureTuplesKey.TIMER):
        set_timer()
    return GestureTuplesMap.get(GestureTuplesKey.TIMER)
