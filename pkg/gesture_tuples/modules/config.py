"""gesture_tuples.config"""

import os
from typing import Any, Optional

from modules import utils
from modules.alphabet import AlphabetConfig, AlphabetError, tuple_count
from modules.decoder import DecoderError, DecoderParams
from modules.pipeline import DETECTOR_PRESETS, PipelineConfig, PipelineError
from modules.simulator import NoiseModel, SimulationError, get_speed

DEFAULT_CONFIG = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "config.json"
)


class ConfigError(ValueError):
    """Raised for unknown keys or out-of-range values of a run config"""


def _check_keys(config: dict, schema: dict, scope: str = ""):
    for key, value in config.items():
        name = scope + key
        if key not in schema:
            raise ConfigError("Unknown config key '{}'".format(name))
        if isinstance(schema[key], dict):
            if not isinstance(value, dict):
                raise ConfigError("Config key '{}' should be a section".format(name))
            _check_keys(value, schema[key], name + ".")


class RunConfig:
    """Every knob of a run: alphabet, decoder, pipeline, simulator and paths"""

    def __init__(self, config: Optional[dict] = None, defaults: str = DEFAULT_CONFIG):
        base = utils.load_dict(defaults)
        config = utils.load_dict(config) if config else {}
        _check_keys(config, base)
        self._config = utils.update_dict(base, config)
        try:
            self.alphabet = AlphabetConfig(self.get("alphabet.m"))
            self.tuple_length = int(self.get("alphabet.s"))
            tuple_count(self.alphabet.num_phonemes, self.tuple_length)
            k = self.get("decoder.k")
            self.decoder_params = DecoderParams(
                k=self.tuple_length - 1 if k is None else k,
                delta=self.get("decoder.delta"),
                gamma=self.get("decoder.gamma"),
            )
            self.pipeline_config = PipelineConfig(
                post_window=self.get("pipeline.post_window"),
                detector_queue_len=self.get("pipeline.detector_queue"),
                sog_threshold=self.get("pipeline.sog_threshold"),
                eog_threshold=self.get("pipeline.eog_threshold"),
                decoder_params=self.decoder_params,
            )
            self.noise = NoiseModel(
                logit_sigma=self.get("simulator.sigma"),
                blend_width=self.get("simulator.blend"),
                seed=self.seed,
            )
            self.speeds = [get_speed(s) for s in self.get("simulator.speeds")]
        except (AlphabetError, DecoderError, PipelineError, SimulationError) as err:
            raise ConfigError(str(err)) from err
        except (TypeError, ValueError) as err:
            raise ConfigError("Invalid config value: {}".format(err)) from err
        if not self.speeds:
            raise ConfigError("simulator.speeds should name at least one speed")
        if int(self.get("simulator.samples_per_class")) < 1:
            raise ConfigError("simulator.samples_per_class should be >= 1")
        if int(self.get("simulator.padding")) < 0:
            raise ConfigError("simulator.padding should be >= 0")
        if int(self.get("workers")) < 1:
            raise ConfigError("workers should be >= 1")

    def get(self, key: str, default: Any = None):
        value = self._config
        for part in key.split("."):
            if not isinstance(value, dict) or part not in value:
                return default
            value = value[part]
        return value

    def to_dict(self):
        return utils.copy_dict(self._config)

    def abstract(self):
        return self.to_dict()

    def __str__(self):
        return utils.dump_dict(self.abstract())

    def __eq__(self, other):
        if isinstance(other, RunConfig):
            return self._config == other._config
        return False

    @property
    def seed(self):
        return int(self.get("seed"))

    @property
    def workers(self):
        return int(self.get("workers"))

    @property
    def out(self):
        return self.get("out")

    @classmethod
    def load(cls, path=None, overrides=None, defaults: str = DEFAULT_CONFIG):
        """Defaults < config file < overrides (flags win)"""

        config = utils.load_dict(path) if path else {}
        if overrides:
            _check_keys(overrides, utils.load_dict(defaults))
            config = utils.update_dict(config, overrides)
        return cls(config, defaults=defaults)


def preset_thresholds(preset: str) -> dict:
    if preset not in DETECTOR_PRESETS:
        raise ConfigError(
            "Unknown detector preset {}, should be in {}".format(
                preset, "|".join(DETECTOR_PRESETS)
            )
        )
    value = DETECTOR_PRESETS[preset]
    return {"sog_threshold": value, "eog_threshold": value}
