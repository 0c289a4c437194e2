"""gesture_tuples.utils.log"""

import os
import logging
from typing import Union

from .timer import get_timer
from .arguments import dump_dict

LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warn": logging.WARN,
    "error": logging.ERROR,
    "critical": logging.CRITICAL,
}

# ansi color per message tag
COLORS = {"DEBUG": 96, "INFO": 92, "WARNING": 93, "ERROR": 91}


def to_level(level: Union[str, int]) -> int:
    """Map a --verbose name (debug, info, warn[ing], error, critical) to a logging level"""

    if isinstance(level, int):
        return level
    for name, value in LEVELS.items():
        if level.startswith(name):
            return value
    raise ValueError(
        "Unexpected verbose {}, should be in {}".format(level, "|".join(LEVELS))
    )


class IOLogger(object):
    """Console logger of the recognition runs.

    Lines read ``[TAG]<date(+elapsed s)>: message``; the elapsed time comes from
    the run timer. ``error`` only reports, the caller decides whether to stop.
    """

    def __init__(self, level=logging.INFO, color=False):
        self._level = to_level(level)
        self._color = color

    def _emit(self, level, tag, msg):
        if self._level > level:
            return
        timer = get_timer()
        line = "[{}]<{}(+{:.2f}s)>: {}".format(
            tag, timer.get_date("%Y%m%d-%H:%M:%S"), timer.elapsed(), msg
        )
        if self._color:
            line = "\033[{}m {}\033[00m".format(COLORS[tag], line)
        print(line)

    def debug(self, msg):
        self._emit(logging.DEBUG, "DEBUG", msg)

    def info(self, msg):
        self._emit(logging.INFO, "INFO", msg)

    def warning(self, msg):
        self._emit(logging.WARN, "WARNING", msg)

    def error(self, msg):
        self._emit(logging.ERROR, "ERROR", msg)

    @property
    def level(self):
        return self._level


def create_io_logger(level: Union[str, int] = logging.INFO, color: bool = False):
    return IOLogger(to_level(level), color=color)


def create_file_logger(
    path: str, level: Union[str, int] = logging.INFO
) -> logging.Logger:
    """Logger writing to `path` and to the console.

    Parameters
    ----------
    path: str
        The log file, its folder is created when missing.
    level: str or int
        A --verbose name or a logging level.

    Returns
    -------
    logger: logging.Logger
        The same logger when called twice for one file.
    """

    level = to_level(level)
    path = os.path.abspath(path)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    logger = logging.getLogger("gesture_tuples." + os.path.basename(path))
    logger.setLevel(level)
    for handler in logger.handlers:
        if isinstance(handler, logging.FileHandler) and handler.baseFilename == path:
            return logger
    formatter = logging.Formatter(
        "%(asctime)s %(filename)s[ln:%(lineno)d]<%(levelname)s> %(message)s"
    )
    for handler in (
        logging.FileHandler(path, mode="a", encoding="utf-8"),
        logging.StreamHandler(),
    ):
        handler.setLevel(level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def split_line(title, symbol="-", width=80):
    return "{0}{1}{0}".format(symbol * 10, title.center(width - 20))


def block_msg(title, msg, symbol="-", width=80):
    """A banner line followed by msg, dicts are dumped as tables"""

    if isinstance(msg, dict):
        msg = dump_dict(msg)
    return "\n{}\n{}".format(split_line(title, symbol, width), msg)
